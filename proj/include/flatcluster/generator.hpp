#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flatcluster/geometry.hpp"

namespace flatcluster {

struct GenConfig {
    Index d = 0;
    Index k = 0;
    std::vector<Vector> centers;
    std::size_t per_cluster = 0;
    double sigma = 1.0;
    double mu = 0.0;       // mean of the direction coefficients
    double delta = 0.0;    // minimum pairwise center distance
    double radius = 1.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
};

struct LabeledDataset {
    std::vector<Flat> flats;
    std::vector<std::size_t> labels;
    GenConfig config;
};

/// Flat meeting the ball (center, radius). Directions: k Gaussian vectors
/// N(mu, sigma^2), orthonormalized. Base: center plus a N(0, sigma^2 I)
/// offset conditioned on the flat passing within `radius` of the center. The
/// off-flat component is drawn directly from its conditional law (uniform
/// direction, truncated chi radius), the in-span component stays Gaussian.
Flat sample_cluster_flat(const Vector& center, Index k, double sigma, double radius,
                         RngStream& rng, double mu = 0.0);

/// Flat through (r, 0, ..., 0) with raw N(0, sigma^2) direction coefficients.
/// Two calls on equal-state streams yield identical directions.
Flat sample_flat_through_point(double r, Index k, Index d, double sigma, RngStream& rng);

/// m * per_cluster flats, shuffled, labels preserved. Flat g of cluster c is
/// drawn from its own substream so generation order does not matter.
LabeledDataset generate_dataset(const GenConfig& cfg, std::size_t workers = 0);

/// Centers (-delta/2, 0, ...) and (delta/2, 0, ...).
std::vector<Vector> two_ball_centers(Index d, double delta);

/// Line meeting the unit disk under the kinematic measure: normal angle
/// uniform on [0, pi), signed offset uniform on [-1, 1].
Flat sample_disk_chord_line(RngStream& rng);

struct TangentLinePair {
    Flat first;
    Flat second;
    double phi = 0.0;  // angle of the wedge containing the disk
};

/// Two tangent lines to the unit circle meeting at angle phi ~ U(0, pi).
/// Each line is based at its point of tangency.
TangentLinePair sample_tangent_line_pair(RngStream& rng);

/// Radius of a N(0, sigma^2 I_dof) vector conditioned on norm <= limit.
double sample_truncated_chi(Index dof, double sigma, double limit, RngStream& rng);

}  // namespace flatcluster
