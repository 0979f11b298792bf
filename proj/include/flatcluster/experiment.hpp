#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flatcluster/clustering.hpp"
#include "flatcluster/generator.hpp"

namespace flatcluster {

/// Two-ball run at one dimension: centers at (+-100, 0, ...), k = d / 3.
struct ExperimentRow {
    Index d = 0;
    Index k = 0;
    std::size_t pairs = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t within_accepted = 0;
    std::size_t within_total = 0;
    std::size_t cross_rejected = 0;
    std::size_t cross_total = 0;
    std::size_t clusters = 0;
    std::vector<Vector> centers;  // estimated, in cluster order
    /// Per true center, distance to the nearest estimate (infinite if none).
    std::vector<double> center_errors;
    /// Trace of the within-cluster midpoint covariance, averaged over clusters.
    double midpoint_variance = 0.0;
    /// midpoint_variance / d.
    double coordinate_variance = 0.0;
};

struct ExperimentConfig {
    std::size_t per_cluster = 10;
    double sigma = 1.0;
    double half_separation = 100.0;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
};

struct ExperimentRun {
    LabeledDataset data;
    std::vector<PairProjection> pairs;
    Clustering clustering;
    ExperimentRow row;
};

/// Seed for dimension d within a seed family.
std::uint64_t experiment_seed(std::uint64_t family, Index d);

ExperimentRun run_experiment(Index d, Index k, const ExperimentConfig& cfg);

}  // namespace flatcluster
