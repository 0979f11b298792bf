#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flatcluster/geometry.hpp"

namespace flatcluster {

struct PairProjection {
    std::size_t i = 0;
    std::size_t j = 0;
    Vector midpoint;
    double distance = 0.0;
    Vector closest_i;  // on flat i
    Vector closest_j;  // on flat j
    /// Stacked system was rank deficient (parallel or intersecting directions);
    /// midpoint is then the minimum-norm minimizer.
    bool degenerate = false;
};

/// Midpoint from min ||Ax - b||^2 with A = [C_f; C_g], b = [e_f; e_g] in
/// row-orthonormal implicit form; closest points are the projections of the
/// midpoint onto each flat.
PairProjection pair_projection(const Flat& f, const Flat& g, double rank_tol = kDefaultRankTol);

/// Same, with implicit forms computed by the caller.
PairProjection pair_projection(const Flat& f, const ImplicitFlat& fi, const Flat& g,
                               const ImplicitFlat& gi, double rank_tol = kDefaultRankTol);

/// All n(n-1)/2 pairs in lexicographic (i, j) order, i < j. Output is
/// identical for any worker count (0 = hardware concurrency).
std::vector<PairProjection> all_pairs(std::span<const Flat> flats,
                                      double rank_tol = kDefaultRankTol,
                                      std::size_t workers = 0);

inline std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace flatcluster
