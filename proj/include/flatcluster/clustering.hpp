#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "flatcluster/pairwise.hpp"

namespace flatcluster {

struct ClusterParams {
    double accept_threshold = 2.0;  // keep pairs with distance <= this
    double link_threshold = 2.0;    // merge midpoint sets within this distance
    std::size_t min_cluster_size = 1;  // M; clusters survive when size > M
    double ball_radius = 1.0;
    double rank_tol = kDefaultRankTol;
    std::size_t workers = 0;

    /// Thresholds 2 * radius.
    static ClusterParams for_radius(double radius, std::size_t min_cluster_size);

    void validate() const;
};

struct Cluster {
    std::vector<std::size_t> members;  // flat indices, ascending
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<Vector> midpoints;
    Vector center;  // mean of midpoints

    /// Number of midpoints, the quantity compared against M.
    std::size_t size() const { return midpoints.size(); }
};

struct Clustering {
    std::vector<Cluster> clusters;
    std::size_t accepted_pairs = 0;
    std::size_t rejected_pairs = 0;
    /// Cluster index per input flat, -1 when unassigned. Empty before pruning.
    std::vector<long> labels;
};

/// Pairs with distance <= accept_threshold, order preserved.
std::vector<PairProjection> filter_pairs(std::span<const PairProjection> pairs,
                                         const ClusterParams& params);

/// Single-linkage union-find over the midpoints of accepted pairs. Clusters
/// appear in order of their first accepted pair; members are every flat that
/// touches one of the cluster's midpoints. No pruning, no labels.
Clustering union_find_cluster(std::span<const PairProjection> accepted,
                              const ClusterParams& params);

/// Filter, link, prune (size > M) and assign each flat to the surviving
/// cluster holding most of its accepted midpoints (ties -> lowest index).
Clustering cluster_pairs(std::span<const PairProjection> pairs, std::size_t flat_count,
                         const ClusterParams& params);

Clustering cluster(std::span<const Flat> flats, const ClusterParams& params);

/// Repeatedly clusters the remaining flats, keeps the largest cluster and
/// removes its members. With expected_clusters = m the floor is
/// remaining_n / remaining_m, otherwise min_cluster_size.
Clustering cluster_recursive(std::span<const Flat> flats, const ClusterParams& params,
                             std::optional<std::size_t> expected_clusters = std::nullopt);

/// Clusters a uniform sample of sample_size flats, then attaches every other
/// flat to the nearest center estimate when it passes within 2 * ball_radius.
Clustering cluster_sampled(std::span<const Flat> flats, const ClusterParams& params,
                           std::size_t sample_size, std::uint64_t seed);

/// Sorted sample indices used by cluster_sampled for (n, sample_size, seed).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t sample_size,
                                        std::uint64_t seed);

/// Disjoint-set forest with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n);

    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    std::size_t set_size(std::size_t x) { return size_[find(x)]; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace flatcluster
