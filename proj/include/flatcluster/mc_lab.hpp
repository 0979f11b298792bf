#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flatcluster/numerics.hpp"

namespace flatcluster {

inline constexpr double kZ99 = 2.5758293035489004;

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(samples)
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::string label;

    std::pair<double, double> ci99() const {
        return {value - kZ99 * std_error, value + kZ99 * std_error};
    }
};

/// Mean and standard error of per-sample values.
McEstimate summarize(const std::vector<double>& values, std::uint64_t seed, std::string label);

struct McOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    std::size_t workers = 0;
};

/// Mean distance of two flats meeting the origin unit ball.
McEstimate estimate_S0(Index d, Index k, const McOptions& opt);
/// Mean distance of independent P(-1), P(1).
McEstimate estimate_S1(Index d, Index k, const McOptions& opt);
/// Mean distance of independent P(-delta), P(delta).
McEstimate estimate_S_delta(double delta, Index d, Index k, const McOptions& opt);

struct ScalingCheck {
    std::size_t samples = 0;
    std::size_t failures = 0;
    double max_relative_error = 0.0;
};

/// With shared directions, dist(P(-delta), P(delta)) = delta * dist(P(-1), P(1))
/// sample by sample.
ScalingCheck scaling_identity_check(double delta, Index d, Index k, const McOptions& opt,
                                    double rel_tol = 1e-10);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
};

/// OLS of value on x; stderrs propagated from the independent MC stderrs.
LinearFit fit_line(const std::vector<double>& x, const std::vector<McEstimate>& y);

/// Pr(dist(P(-delta), P(delta)) > 2).
McEstimate estimate_rejection_fraction(double delta, Index d, Index k, const McOptions& opt);

/// 1 - (1 - S1/2)(1 + 1/delta + 1/delta^2).
double rejection_lower_bound(double s1, double delta);

struct ConcentrationReport {
    double mean_offset = 0.0;  // average over repetitions of ||mean midpoint||
    double variance = 0.0;     // average trace of the midpoint covariance
    std::vector<double> offsets;    // per repetition
    std::vector<double> variances;  // per repetition
};

/// n_flats through the origin unit ball, all pairwise midpoints, repeated
/// opt.samples times.
ConcentrationReport midpoint_concentration(Index d, Index k, std::size_t n_flats,
                                           const McOptions& opt);

/// Pr(two chord lines of the unit disk meet inside it).
McEstimate disk_intersection_probability(const McOptions& opt);

/// Pr(r <= r0) for the meeting point of two random tangent lines.
McEstimate tangent_pair_reach(double r0, const McOptions& opt);

/// Largest |r - 1/sin(phi/2)| / r over the draws of tangent_pair_reach.
double tangent_identity_max_error(const McOptions& opt);

/// Pr(||midpoint|| <= r0) for two flats meeting the origin unit ball.
McEstimate midpoint_reach_bound(Index d, Index k, double r0, const McOptions& opt);

/// d = 2 restricted to tangent line pairs, midpoint through pair_projection.
McEstimate tangent_midpoint_reach(double r0, const McOptions& opt);

struct SeparationEstimate {
    McEstimate fraction;  // Pr(cross / within >= delta - epsilon)
    double max_within = 0.0;
    bool vacuous = false;  // delta <= 1: balls touch, test says nothing
};

/// Balls at (-delta, 0, ...) and (delta, 0, ...): P, Q in the first, R in the
/// second; ratio dist(R, Q) / dist(P, Q).
SeparationEstimate separation_ratio(double delta, double epsilon, Index d, Index k,
                                    const McOptions& opt);

/// Intersection of two lines in R^2; false when parallel.
bool intersect_lines_2d(const Vector& base_a, const Vector& dir_a, const Vector& base_b,
                        const Vector& dir_b, Vector& out);

}  // namespace flatcluster
