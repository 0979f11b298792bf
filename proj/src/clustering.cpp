#include "flatcluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "flatcluster/errors.hpp"
#include "flatcluster/rng.hpp"

namespace flatcluster {

namespace {

bool within(const Vector& a, const Vector& b, double threshold) {
    const double limit = threshold * threshold;
    double acc = 0.0;
    for (Index t = 0; t < a.size(); ++t) {
        const double diff = a(t) - b(t);
        acc += diff * diff;
        if (acc > limit) return false;
    }
    return true;
}

Vector mean_of(const std::vector<Vector>& points) {
    Vector sum = Vector::Zero(points.front().size());
    for (const auto& p : points) sum += p;
    return sum / static_cast<double>(points.size());
}

// Restricts a clustering computed on a subset back to original flat indices.
void remap(Clustering& c, const std::vector<std::size_t>& original) {
    for (auto& cl : c.clusters) {
        for (auto& m : cl.members) m = original[m];
        for (auto& [i, j] : cl.pairs) {
            i = original[i];
            j = original[j];
        }
    }
}

}  // namespace

ClusterParams ClusterParams::for_radius(double radius, std::size_t min_cluster_size) {
    ClusterParams p;
    p.ball_radius = radius;
    p.accept_threshold = 2.0 * radius;
    p.link_threshold = 2.0 * radius;
    p.min_cluster_size = min_cluster_size;
    return p;
}

void ClusterParams::validate() const {
    if (!(accept_threshold >= 0.0) || !std::isfinite(accept_threshold)) {
        throw InvalidInput("accept_threshold must be finite and >= 0");
    }
    if (!(link_threshold >= 0.0) || !std::isfinite(link_threshold)) {
        throw InvalidInput("link_threshold must be finite and >= 0");
    }
    if (!(ball_radius > 0.0) || !std::isfinite(ball_radius)) {
        throw InvalidInput("ball_radius must be finite and > 0");
    }
    if (!(rank_tol > 0.0)) throw InvalidInput("rank_tol must be > 0");
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSet::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::vector<PairProjection> filter_pairs(std::span<const PairProjection> pairs,
                                         const ClusterParams& params) {
    params.validate();
    std::vector<PairProjection> out;
    for (const auto& p : pairs) {
        if (p.distance <= params.accept_threshold) out.push_back(p);
    }
    return out;
}

Clustering union_find_cluster(std::span<const PairProjection> accepted,
                              const ClusterParams& params) {
    params.validate();
    Clustering out;
    out.accepted_pairs = accepted.size();
    const std::size_t p = accepted.size();
    if (p == 0) return out;

    DisjointSet sets(p);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            if (sets.find(a) == sets.find(b)) continue;
            if (within(accepted[a].midpoint, accepted[b].midpoint, params.link_threshold)) {
                sets.unite(a, b);
            }
        }
    }

    // Cluster order: first appearance of each root in the accepted list.
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t a = 0; a < p; ++a) {
        const std::size_t root = sets.find(a);
        auto [it, inserted] = slot.try_emplace(root, out.clusters.size());
        if (inserted) out.clusters.emplace_back();
        Cluster& cl = out.clusters[it->second];
        cl.pairs.emplace_back(accepted[a].i, accepted[a].j);
        cl.midpoints.push_back(accepted[a].midpoint);
        cl.members.push_back(accepted[a].i);
        cl.members.push_back(accepted[a].j);
    }
    for (auto& cl : out.clusters) {
        std::sort(cl.members.begin(), cl.members.end());
        cl.members.erase(std::unique(cl.members.begin(), cl.members.end()), cl.members.end());
        cl.center = mean_of(cl.midpoints);
    }
    return out;
}

Clustering cluster_pairs(std::span<const PairProjection> pairs, std::size_t flat_count,
                         const ClusterParams& params) {
    const auto accepted = filter_pairs(pairs, params);
    Clustering linked = union_find_cluster(accepted, params);

    Clustering out;
    out.accepted_pairs = accepted.size();
    out.rejected_pairs = pairs.size() - accepted.size();
    for (auto& cl : linked.clusters) {
        if (cl.size() > params.min_cluster_size) out.clusters.push_back(std::move(cl));
    }

    // Majority vote of each flat over its midpoints in surviving clusters.
    std::vector<std::vector<std::size_t>> votes(flat_count,
                                                std::vector<std::size_t>(out.clusters.size(), 0));
    for (std::size_t c = 0; c < out.clusters.size(); ++c) {
        for (const auto& [i, j] : out.clusters[c].pairs) {
            if (i >= flat_count || j >= flat_count) {
                throw InvalidInput("cluster_pairs: pair index out of range");
            }
            ++votes[i][c];
            ++votes[j][c];
        }
    }
    out.labels.assign(flat_count, -1);
    for (auto& cl : out.clusters) cl.members.clear();
    for (std::size_t f = 0; f < flat_count; ++f) {
        std::size_t best = 0;
        long label = -1;
        for (std::size_t c = 0; c < out.clusters.size(); ++c) {
            if (votes[f][c] > best) {
                best = votes[f][c];
                label = static_cast<long>(c);
            }
        }
        out.labels[f] = label;
        if (label >= 0) out.clusters[static_cast<std::size_t>(label)].members.push_back(f);
    }
    return out;
}

Clustering cluster(std::span<const Flat> flats, const ClusterParams& params) {
    params.validate();
    if (flats.size() < 2) throw InvalidInput("cluster: need at least 2 flats");
    const auto pairs = all_pairs(flats, params.rank_tol, params.workers);
    return cluster_pairs(pairs, flats.size(), params);
}

Clustering cluster_recursive(std::span<const Flat> flats, const ClusterParams& params,
                             std::optional<std::size_t> expected_clusters) {
    params.validate();
    if (flats.size() < 2) throw InvalidInput("cluster_recursive: need at least 2 flats");

    Clustering out;
    out.labels.assign(flats.size(), -1);
    std::vector<std::size_t> remaining(flats.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});

    while (remaining.size() >= 2) {
        std::size_t floor = params.min_cluster_size;
        if (expected_clusters) {
            const std::size_t found = out.clusters.size();
            if (found >= *expected_clusters) break;
            floor = remaining.size() / (*expected_clusters - found);
        }
        std::vector<Flat> subset;
        subset.reserve(remaining.size());
        for (auto idx : remaining) subset.push_back(flats[idx]);

        ClusterParams round = params;
        round.min_cluster_size = floor;
        Clustering step = cluster(subset, round);
        out.accepted_pairs += step.accepted_pairs;
        out.rejected_pairs += step.rejected_pairs;
        if (step.clusters.empty()) break;

        std::size_t largest = 0;
        for (std::size_t c = 1; c < step.clusters.size(); ++c) {
            if (step.clusters[c].size() > step.clusters[largest].size()) largest = c;
        }
        Cluster chosen = std::move(step.clusters[largest]);
        if (chosen.members.empty()) break;
        step.clusters = {chosen};
        remap(step, remaining);
        chosen = std::move(step.clusters.front());

        const long label = static_cast<long>(out.clusters.size());
        for (auto m : chosen.members) out.labels[m] = label;
        std::vector<std::size_t> next;
        for (auto idx : remaining) {
            if (out.labels[idx] < 0) next.push_back(idx);
        }
        remaining = std::move(next);
        out.clusters.push_back(std::move(chosen));
    }
    return out;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t sample_size,
                                        std::uint64_t seed) {
    if (sample_size < 2) throw InvalidInput("sample_size must be at least 2");
    if (sample_size > n) throw InvalidInput("sample_size exceeds the number of flats");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    RngStream rng(seed, StreamTag::subsample, 0);
    for (std::size_t i = 0; i < sample_size; ++i) {
        std::swap(idx[i], idx[i + static_cast<std::size_t>(uniform_index(rng, n - i))]);
    }
    idx.resize(sample_size);
    std::sort(idx.begin(), idx.end());
    return idx;
}

Clustering cluster_sampled(std::span<const Flat> flats, const ClusterParams& params,
                           std::size_t sample_size, std::uint64_t seed) {
    params.validate();
    const auto chosen = sample_indices(flats.size(), sample_size, seed);
    std::vector<Flat> subset;
    subset.reserve(chosen.size());
    for (auto idx : chosen) subset.push_back(flats[idx]);

    Clustering sub = cluster(subset, params);
    Clustering out;
    out.accepted_pairs = sub.accepted_pairs;
    out.rejected_pairs = sub.rejected_pairs;
    out.clusters = std::move(sub.clusters);
    remap(out, chosen);
    out.labels.assign(flats.size(), -1);
    for (std::size_t s = 0; s < chosen.size(); ++s) out.labels[chosen[s]] = sub.labels[s];

    std::vector<bool> sampled(flats.size(), false);
    for (auto idx : chosen) sampled[idx] = true;
    for (std::size_t f = 0; f < flats.size(); ++f) {
        if (sampled[f] || out.clusters.empty()) continue;
        double best = std::numeric_limits<double>::infinity();
        long label = -1;
        for (std::size_t c = 0; c < out.clusters.size(); ++c) {
            const double dist = distance_to_point(flats[f], out.clusters[c].center);
            if (dist < best) {
                best = dist;
                label = static_cast<long>(c);
            }
        }
        // The flat meets the true ball and the estimate lies within it, so a
        // member is never farther than one diameter from the estimate.
        if (best <= 2.0 * params.ball_radius) {
            out.labels[f] = label;
            out.clusters[static_cast<std::size_t>(label)].members.push_back(f);
        }
    }
    for (auto& cl : out.clusters) std::sort(cl.members.begin(), cl.members.end());
    return out;
}

}  // namespace flatcluster
