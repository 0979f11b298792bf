#include "flatcluster/pairwise.hpp"

#include <exception>
#include <string>

#include "flatcluster/errors.hpp"
#include "flatcluster/parallel.hpp"

namespace flatcluster {

PairProjection pair_projection(const Flat& f, const ImplicitFlat& fi, const Flat& g,
                               const ImplicitFlat& gi, double rank_tol) {
    const Index d = f.ambient_dim();
    if (g.ambient_dim() != d) {
        throw InvalidInput("pair_projection: flats live in R^" + std::to_string(d) + " and R^" +
                           std::to_string(g.ambient_dim()));
    }
    Matrix a(fi.c.rows() + gi.c.rows(), d);
    a.topRows(fi.c.rows()) = fi.c;
    a.bottomRows(gi.c.rows()) = gi.c;
    Vector b(a.rows());
    b.head(fi.e.size()) = fi.e;
    b.tail(gi.e.size()) = gi.e;

    const auto sol = least_squares(a, b, rank_tol);

    PairProjection out;
    out.midpoint = sol.x;
    out.degenerate = sol.rank < d;
    out.closest_i = project_point(f, out.midpoint);
    out.closest_j = project_point(g, out.midpoint);
    out.distance = (out.closest_i - out.closest_j).norm();
    return out;
}

PairProjection pair_projection(const Flat& f, const Flat& g, double rank_tol) {
    if (g.ambient_dim() != f.ambient_dim()) {
        throw InvalidInput("pair_projection: flats live in R^" + std::to_string(f.ambient_dim()) +
                           " and R^" + std::to_string(g.ambient_dim()));
    }
    return pair_projection(f, implicitize(f, rank_tol), g, implicitize(g, rank_tol), rank_tol);
}

std::vector<PairProjection> all_pairs(std::span<const Flat> flats, double rank_tol,
                                      std::size_t workers) {
    const std::size_t n = flats.size();
    if (n < 2) throw InvalidInput("all_pairs: need at least 2 flats");
    const Index d = flats.front().ambient_dim();
    for (std::size_t i = 0; i < n; ++i) {
        if (flats[i].ambient_dim() != d) {
            throw InvalidInput("all_pairs: flat " + std::to_string(i) + " lives in R^" +
                               std::to_string(flats[i].ambient_dim()) + ", expected R^" +
                               std::to_string(d));
        }
    }

    std::vector<ImplicitFlat> implicit;
    implicit.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        try {
            implicit.push_back(implicitize(flats[i], rank_tol));
        } catch (const std::exception& e) {
            throw DegenerateFlat("flat " + std::to_string(i) + ": " + e.what());
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> index;
    index.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) index.emplace_back(i, j);

    std::vector<PairProjection> out(index.size());
    parallel_for(index.size(), workers, [&](std::size_t p) {
        const auto [i, j] = index[p];
        try {
            out[p] = pair_projection(flats[i], implicit[i], flats[j], implicit[j], rank_tol);
        } catch (const std::exception& e) {
            throw InvalidInput("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                               "): " + e.what());
        }
        out[p].i = i;
        out[p].j = j;
    });
    return out;
}

}  // namespace flatcluster
