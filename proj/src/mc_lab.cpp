#include "flatcluster/mc_lab.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "flatcluster/errors.hpp"
#include "flatcluster/generator.hpp"
#include "flatcluster/pairwise.hpp"
#include "flatcluster/parallel.hpp"

namespace flatcluster {

namespace {

constexpr std::size_t kMinSamples = 100;

void require_samples(std::size_t samples, std::size_t minimum = kMinSamples) {
    if (samples < minimum) {
        throw InvalidInput("need at least " + std::to_string(minimum) + " samples");
    }
}

void require_model_dims(Index d, Index k) {
    if (d < 2 || k < 1 || k > d / 2) {
        throw InvalidInput("need 1 <= k <= floor(d/2) (k=" + std::to_string(k) +
                           ", d=" + std::to_string(d) + ")");
    }
}

// Sample i always draws from substream (seed, sample, i), so the values do
// not depend on how the index range is split across workers.
template <typename Draw>
std::vector<double> draw_values(const McOptions& opt, Draw&& draw) {
    std::vector<double> values(opt.samples);
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
        RngStream rng(opt.seed, StreamTag::sample, i);
        values[i] = draw(rng);
    });
    return values;
}

std::string dims_label(const char* name, Index d, Index k) {
    return std::string(name) + "(d=" + std::to_string(d) + ",k=" + std::to_string(k) + ")";
}

double pair_distance(const Flat& a, const Flat& b) { return pair_projection(a, b).distance; }

double trace_covariance(const std::vector<Vector>& points) {
    const std::size_t n = points.size();
    Vector mean = Vector::Zero(points.front().size());
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (const auto& p : points) acc += (p - mean).squaredNorm();
    return acc / static_cast<double>(n - 1);
}

}  // namespace

McEstimate summarize(const std::vector<double>& values, std::uint64_t seed, std::string label) {
    require_samples(values.size());
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    McEstimate out;
    out.value = mean;
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    out.samples = values.size();
    out.seed = seed;
    out.label = std::move(label);
    return out;
}

McEstimate estimate_S0(Index d, Index k, const McOptions& opt) {
    require_model_dims(d, k);
    require_samples(opt.samples);
    const Vector origin = Vector::Zero(d);
    auto values = draw_values(opt, [&](RngStream& rng) {
        const Flat a = sample_cluster_flat(origin, k, opt.sigma, 1.0, rng);
        const Flat b = sample_cluster_flat(origin, k, opt.sigma, 1.0, rng);
        return pair_distance(a, b);
    });
    return summarize(values, opt.seed, dims_label("S0", d, k));
}

McEstimate estimate_S_delta(double delta, Index d, Index k, const McOptions& opt) {
    require_model_dims(d, k);
    require_samples(opt.samples);
    if (!(delta > 0.0)) throw InvalidInput("delta must be > 0");
    auto values = draw_values(opt, [&](RngStream& rng) {
        const Flat a = sample_flat_through_point(-delta, k, d, opt.sigma, rng);
        const Flat b = sample_flat_through_point(delta, k, d, opt.sigma, rng);
        return pair_distance(a, b);
    });
    return summarize(values, opt.seed,
                     dims_label("S_delta", d, k) + "[delta=" + std::to_string(delta) + "]");
}

McEstimate estimate_S1(Index d, Index k, const McOptions& opt) {
    auto est = estimate_S_delta(1.0, d, k, opt);
    est.label = dims_label("S1", d, k);
    return est;
}

ScalingCheck scaling_identity_check(double delta, Index d, Index k, const McOptions& opt,
                                    double rel_tol) {
    require_model_dims(d, k);
    if (!(delta > 0.0)) throw InvalidInput("delta must be > 0");
    std::vector<double> errors(opt.samples);
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
        RngStream unit(opt.seed, StreamTag::sample, i);
        RngStream scaled = unit;
        const Flat a1 = sample_flat_through_point(-1.0, k, d, opt.sigma, unit);
        const Flat b1 = sample_flat_through_point(1.0, k, d, opt.sigma, unit);
        const Flat ad = sample_flat_through_point(-delta, k, d, opt.sigma, scaled);
        const Flat bd = sample_flat_through_point(delta, k, d, opt.sigma, scaled);
        const double expected = delta * pair_distance(a1, b1);
        const double got = pair_distance(ad, bd);
        errors[i] = std::abs(got - expected) / expected;
    });
    ScalingCheck out;
    out.samples = opt.samples;
    for (double e : errors) {
        if (!(e <= rel_tol)) ++out.failures;
        out.max_relative_error = std::max(out.max_relative_error, e);
    }
    return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<McEstimate>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw InvalidInput("fit_line: need matching x and y with at least 3 points");
    }
    const double n = static_cast<double>(x.size());
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xbar += x[i];
        ybar += y[i].value;
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i].value - ybar);
        syy += (y[i].value - ybar) * (y[i].value - ybar);
    }
    if (sxx == 0.0) throw InvalidInput("fit_line: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i].value - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    double var_slope = 0.0, var_intercept = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ws = (x[i] - xbar) / sxx;
        const double wi = 1.0 / n - xbar * ws;
        const double v = y[i].std_error * y[i].std_error;
        var_slope += ws * ws * v;
        var_intercept += wi * wi * v;
    }
    fit.slope_stderr = std::sqrt(var_slope);
    fit.intercept_stderr = std::sqrt(var_intercept);
    return fit;
}

McEstimate estimate_rejection_fraction(double delta, Index d, Index k, const McOptions& opt) {
    require_model_dims(d, k);
    require_samples(opt.samples);
    if (!(delta > 1.0)) throw InvalidInput("rejection fraction needs delta > 1");
    auto values = draw_values(opt, [&](RngStream& rng) {
        const Flat a = sample_flat_through_point(-delta, k, d, opt.sigma, rng);
        const Flat b = sample_flat_through_point(delta, k, d, opt.sigma, rng);
        return pair_distance(a, b) > 2.0 ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed,
                     dims_label("reject", d, k) + "[delta=" + std::to_string(delta) + "]");
}

double rejection_lower_bound(double s1, double delta) {
    const double q = (1.0 - s1 / 2.0) * (1.0 + 1.0 / delta + 1.0 / (delta * delta));
    return 1.0 - q;
}

ConcentrationReport midpoint_concentration(Index d, Index k, std::size_t n_flats,
                                           const McOptions& opt) {
    require_model_dims(d, k);
    if (n_flats < 3) throw InvalidInput("midpoint_concentration needs at least 3 flats");
    if (opt.samples < 1) throw InvalidInput("midpoint_concentration needs a repetition");
    ConcentrationReport out;
    out.offsets.resize(opt.samples);
    out.variances.resize(opt.samples);
    const Vector origin = Vector::Zero(d);
    parallel_for(opt.samples, opt.workers, [&](std::size_t r) {
        std::vector<Flat> flats;
        flats.reserve(n_flats);
        for (std::size_t f = 0; f < n_flats; ++f) {
            RngStream rng(opt.seed, StreamTag::sample, r * n_flats + f);
            flats.push_back(sample_cluster_flat(origin, k, opt.sigma, 1.0, rng));
        }
        const auto pairs = all_pairs(flats, kDefaultRankTol, 1);
        std::vector<Vector> mids;
        mids.reserve(pairs.size());
        for (const auto& p : pairs) mids.push_back(p.midpoint);
        Vector mean = Vector::Zero(d);
        for (const auto& m : mids) mean += m;
        mean /= static_cast<double>(mids.size());
        out.offsets[r] = mean.norm();
        out.variances[r] = trace_covariance(mids);
    });
    for (std::size_t r = 0; r < opt.samples; ++r) {
        out.mean_offset += out.offsets[r];
        out.variance += out.variances[r];
    }
    out.mean_offset /= static_cast<double>(opt.samples);
    out.variance /= static_cast<double>(opt.samples);
    return out;
}

bool intersect_lines_2d(const Vector& base_a, const Vector& dir_a, const Vector& base_b,
                        const Vector& dir_b, Vector& out) {
    const double na_x = -dir_a(1) / dir_a.norm(), na_y = dir_a(0) / dir_a.norm();
    const double nb_x = -dir_b(1) / dir_b.norm(), nb_y = dir_b(0) / dir_b.norm();
    const double ca = na_x * base_a(0) + na_y * base_a(1);
    const double cb = nb_x * base_b(0) + nb_y * base_b(1);
    const double det = na_x * nb_y - na_y * nb_x;
    if (det == 0.0) return false;
    out.resize(2);
    out(0) = (ca * nb_y - cb * na_y) / det;
    out(1) = (na_x * cb - nb_x * ca) / det;
    return std::isfinite(out(0)) && std::isfinite(out(1));
}

McEstimate disk_intersection_probability(const McOptions& opt) {
    require_samples(opt.samples, 10000);
    auto values = draw_values(opt, [](RngStream& rng) {
        const Flat a = sample_disk_chord_line(rng);
        const Flat b = sample_disk_chord_line(rng);
        Vector x;
        if (!intersect_lines_2d(a.base(), a.directions().col(0), b.base(), b.directions().col(0),
                                x)) {
            return 0.0;
        }
        return x.norm() <= 1.0 ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed, "disk");
}

namespace {

double tangent_meeting_radius(const TangentLinePair& pair) {
    Vector x;
    if (!intersect_lines_2d(pair.first.base(), pair.first.directions().col(0),
                            pair.second.base(), pair.second.directions().col(0), x)) {
        return std::numeric_limits<double>::infinity();
    }
    return x.norm();
}

}  // namespace

McEstimate tangent_pair_reach(double r0, const McOptions& opt) {
    require_samples(opt.samples);
    if (!(r0 > 1.0)) throw InvalidInput("tangent_pair_reach needs r0 > 1");
    auto values = draw_values(opt, [&](RngStream& rng) {
        return tangent_meeting_radius(sample_tangent_line_pair(rng)) <= r0 ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed, "tangent[r0=" + std::to_string(r0) + "]");
}

double tangent_identity_max_error(const McOptions& opt) {
    auto values = draw_values(opt, [](RngStream& rng) {
        const auto pair = sample_tangent_line_pair(rng);
        const double expected = 1.0 / std::sin(0.5 * pair.phi);
        return std::abs(tangent_meeting_radius(pair) - expected) / expected;
    });
    double worst = 0.0;
    for (double v : values) worst = std::max(worst, std::isnan(v) ? INFINITY : v);
    return worst;
}

McEstimate midpoint_reach_bound(Index d, Index k, double r0, const McOptions& opt) {
    require_model_dims(d, k);
    require_samples(opt.samples);
    if (!(r0 > 0.0)) throw InvalidInput("midpoint_reach_bound needs r0 > 0");
    const Vector origin = Vector::Zero(d);
    auto values = draw_values(opt, [&](RngStream& rng) {
        const Flat a = sample_cluster_flat(origin, k, opt.sigma, 1.0, rng);
        const Flat b = sample_cluster_flat(origin, k, opt.sigma, 1.0, rng);
        return pair_projection(a, b).midpoint.norm() <= r0 ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed,
                     dims_label("reach", d, k) + "[r0=" + std::to_string(r0) + "]");
}

McEstimate tangent_midpoint_reach(double r0, const McOptions& opt) {
    require_samples(opt.samples);
    if (!(r0 > 0.0)) throw InvalidInput("tangent_midpoint_reach needs r0 > 0");
    auto values = draw_values(opt, [&](RngStream& rng) {
        const auto pair = sample_tangent_line_pair(rng);
        return pair_projection(pair.first, pair.second).midpoint.norm() <= r0 ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed, "reach(d=2,tangent)[r0=" + std::to_string(r0) + "]");
}

SeparationEstimate separation_ratio(double delta, double epsilon, Index d, Index k,
                                    const McOptions& opt) {
    require_model_dims(d, k);
    require_samples(opt.samples);
    if (!(delta > 0.0)) throw InvalidInput("separation_ratio needs delta > 0");
    Vector left = Vector::Zero(d);
    Vector right = Vector::Zero(d);
    left(0) = -delta;
    right(0) = delta;
    std::vector<double> within(opt.samples);
    std::vector<double> hits(opt.samples);
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
        RngStream rng(opt.seed, StreamTag::sample, i);
        const Flat p = sample_cluster_flat(left, k, opt.sigma, 1.0, rng);
        const Flat q = sample_cluster_flat(left, k, opt.sigma, 1.0, rng);
        const Flat r = sample_cluster_flat(right, k, opt.sigma, 1.0, rng);
        within[i] = pair_distance(p, q);
        const double cross = pair_distance(r, q);
        const double ratio =
            within[i] > 0.0 ? cross / within[i] : std::numeric_limits<double>::infinity();
        hits[i] = ratio >= delta - epsilon ? 1.0 : 0.0;
    });
    SeparationEstimate out;
    for (double w : within) out.max_within = std::max(out.max_within, w);
    out.fraction = summarize(hits, opt.seed,
                             dims_label("ratio", d, k) + "[delta=" + std::to_string(delta) +
                                 ",eps=" + std::to_string(epsilon) + "]");
    out.vacuous = delta <= 1.0;
    return out;
}

}  // namespace flatcluster
