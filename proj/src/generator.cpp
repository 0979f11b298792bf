#include "flatcluster/generator.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "flatcluster/errors.hpp"
#include "flatcluster/parallel.hpp"

namespace flatcluster {

namespace {

constexpr std::size_t kMaxRejections = 1'000'000;
constexpr double kSmallestUsableMass = 1e-290;

Matrix gaussian_matrix(Index rows, Index cols, double mean, double sigma, RngStream& rng) {
    std::normal_distribution<double> normal(mean, sigma);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

void check_dims(Index k, Index d) {
    if (d < 2 || k < 1 || k >= d) {
        throw ConfigError("need 0 < k < d (got k=" + std::to_string(k) +
                          ", d=" + std::to_string(d) + ")");
    }
}

}  // namespace

double sample_truncated_chi(Index dof, double sigma, double limit, RngStream& rng) {
    if (dof < 1) throw ConfigError("truncated chi needs dof >= 1");
    if (!(sigma > 0.0) || !(limit > 0.0)) throw ConfigError("sigma and limit must be > 0");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    // s = r^2 / (2 sigma^2) ~ Gamma(a, 1) truncated to [0, x].
    const double a = 0.5 * static_cast<double>(dof);
    const double x = limit * limit / (2.0 * sigma * sigma);
    const double mass = boost::math::gamma_p(a, x);

    double s = 0.0;
    if (mass >= kSmallestUsableMass) {
        const double u = uniform(rng);
        s = u == 0.0 ? 0.0 : boost::math::gamma_p_inv(a, u * mass);
        s = std::min(s, x);
    } else {
        // The truncated mass underflows. Either x << a, where the density
        // s^(a-1) e^-s piles up against x and an exponential envelope in
        // t = x - s is tight, or x is tiny, where e^-s ~ 1 on [0, x].
        const double rate = (a - 1.0) / x - 1.0;
        std::size_t tries = 0;
        for (;; ++tries) {
            if (tries >= kMaxRejections) {
                throw ConfigError("truncated chi: rejection limit exceeded (sigma too large "
                                  "relative to the radius?)");
            }
            if (rate > 0.0) {
                const double u = uniform(rng);
                const double t = -std::log1p(-u * (-std::expm1(-rate * x))) / rate;
                const double accept =
                    std::exp((a - 1.0) * (std::log1p(-t / x) + t / x));
                if (uniform(rng) <= accept) {
                    s = x - t;
                    break;
                }
            } else {
                const double cand = x * std::pow(uniform(rng), 1.0 / a);
                if (uniform(rng) <= std::exp(-cand)) {
                    s = cand;
                    break;
                }
            }
        }
    }
    return std::min(sigma * std::sqrt(2.0 * s), limit);
}

Flat sample_cluster_flat(const Vector& center, Index k, double sigma, double radius,
                         RngStream& rng, double mu) {
    const Index d = center.size();
    check_dims(k, d);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be > 0");

    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        const Matrix raw = gaussian_matrix(d, k, mu, sigma, rng);
        Eigen::HouseholderQR<Matrix> qr(raw);
        const Matrix basis = qr.householderQ() * Matrix::Identity(d, k);
        if (numerical_rank(raw) < k) continue;

        const Vector g = gaussian_matrix(d, 1, 0.0, sigma, rng).col(0);
        const Vector along = basis * (basis.transpose() * g);
        const Vector off = g - along;
        const double off_norm = off.norm();
        if (off_norm == 0.0) continue;
        const double r = sample_truncated_chi(d - k, sigma, radius, rng);
        Vector base = center + along + (r / off_norm) * off;
        return Flat(std::move(base), basis);
    }
    throw ConfigError("sample_cluster_flat: could not draw independent directions");
}

Flat sample_flat_through_point(double r, Index k, Index d, double sigma, RngStream& rng) {
    check_dims(k, d);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
    Vector base = Vector::Zero(d);
    base(0) = r;
    for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        Matrix dirs = gaussian_matrix(d, k, 0.0, sigma, rng);
        if (numerical_rank(dirs) < k) continue;
        return Flat(base, std::move(dirs));
    }
    throw ConfigError("sample_flat_through_point: could not draw independent directions");
}

void GenConfig::validate() const {
    if (d < 2) throw ConfigError("d must be at least 2");
    if (k < 1 || k > d / 2) {
        throw ConfigError("k must satisfy 1 <= k <= floor(d/2) (k=" + std::to_string(k) +
                          ", d=" + std::to_string(d) + ")");
    }
    if (centers.empty()) throw ConfigError("at least one center is required");
    if (per_cluster < 1) throw ConfigError("per_cluster must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be > 0");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be >= 0");
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (centers[i].size() != d) {
            throw ConfigError("center " + std::to_string(i) + " has length " +
                              std::to_string(centers[i].size()) + ", expected " +
                              std::to_string(d));
        }
        if (!centers[i].allFinite()) throw ConfigError("center has non-finite entries");
        for (std::size_t j = 0; j < i; ++j) {
            const double dist = (centers[i] - centers[j]).norm();
            if (dist < delta) {
                throw ConfigError("centers " + std::to_string(j) + " and " + std::to_string(i) +
                                  " are closer than delta");
            }
        }
    }
}

LabeledDataset generate_dataset(const GenConfig& cfg, std::size_t workers) {
    cfg.validate();
    const std::size_t m = cfg.centers.size();
    const std::size_t n = m * cfg.per_cluster;

    std::vector<std::optional<Flat>> drawn(n);
    parallel_for(n, workers, [&](std::size_t q) {
        RngStream rng(cfg.seed, StreamTag::flat, q);
        drawn[q] = sample_cluster_flat(cfg.centers[q / cfg.per_cluster], cfg.k, cfg.sigma,
                                       cfg.radius, rng, cfg.mu);
    });

    std::vector<std::size_t> order(n);
    for (std::size_t q = 0; q < n; ++q) order[q] = q;
    RngStream shuffle(cfg.seed, StreamTag::shuffle, 0);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_index(shuffle, i))]);
    }

    LabeledDataset out;
    out.config = cfg;
    out.flats.reserve(n);
    out.labels.reserve(n);
    for (auto q : order) {
        out.flats.push_back(std::move(*drawn[q]));
        out.labels.push_back(q / cfg.per_cluster);
    }
    return out;
}

std::vector<Vector> two_ball_centers(Index d, double delta) {
    Vector left = Vector::Zero(d);
    Vector right = Vector::Zero(d);
    left(0) = -0.5 * delta;
    right(0) = 0.5 * delta;
    return {left, right};
}

Flat sample_disk_chord_line(RngStream& rng) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    const double theta = angle(rng);
    const double u = offset(rng);
    Vector normal(2);
    normal << std::cos(theta), std::sin(theta);
    Matrix dir(2, 1);
    dir << -normal(1), normal(0);
    return Flat(u * normal, dir);
}

TangentLinePair sample_tangent_line_pair(RngStream& rng) {
    std::uniform_real_distribution<double> wedge(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);
    double phi = 0.0;
    while (phi == 0.0) phi = wedge(rng);
    const double psi = turn(rng);
    // Points of tangency sit (pi - phi)/2 either side of the meeting direction.
    const double half = 0.5 * (std::numbers::pi - phi);
    auto tangent = [](double at) {
        Vector touch(2);
        touch << std::cos(at), std::sin(at);
        Matrix dir(2, 1);
        dir << -touch(1), touch(0);
        return Flat(touch, dir);
    };
    return {tangent(psi + half), tangent(psi - half), phi};
}

}  // namespace flatcluster
