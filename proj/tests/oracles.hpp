#pragma once
// Independent reference implementations used only by the tests. None of
// them touch Eigen's decompositions.

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

#include "flatcluster/geometry.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting on a square system.
inline std::vector<double> gauss_solve(Dense a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Normal equations A^T A x = A^T b, full column rank only.
inline std::vector<double> normal_equations(const Dense& a, const std::vector<double>& b) {
    const std::size_t m = a.size();
    const std::size_t n = a.front().size();
    Dense ata(n, std::vector<double>(n, 0.0));
    std::vector<double> atb(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            atb[i] += a[r][i] * b[r];
            for (std::size_t j = 0; j < n; ++j) ata[i][j] += a[r][i] * a[r][j];
        }
    }
    auto x = gauss_solve(ata, atb);
    // Iterative refinement against the original residual recovers the
    // accuracy lost to squaring the condition number.
    for (int step = 0; step < 3; ++step) {
        std::vector<double> r(m);
        for (std::size_t row = 0; row < m; ++row) {
            double s = b[row];
            for (std::size_t i = 0; i < n; ++i) s -= a[row][i] * x[i];
            r[row] = s;
        }
        std::vector<double> atr(n, 0.0);
        for (std::size_t row = 0; row < m; ++row)
            for (std::size_t i = 0; i < n; ++i) atr[i] += a[row][i] * r[row];
        const auto dx = gauss_solve(ata, atr);
        for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    }
    return x;
}

struct PairResult {
    flatcluster::Vector on_first;
    flatcluster::Vector on_second;
    flatcluster::Vector midpoint;
    double distance = 0.0;
};

// Minimizes ||(a + U t) - (b + V s)||^2 over (t, s) in parametric coordinates:
// the least-squares problem [U, -V] (t; s) = b - a, via its normal equations.
inline PairResult pair(const flatcluster::Flat& f, const flatcluster::Flat& g) {
    const auto& u = f.directions();
    const auto& v = g.directions();
    const std::size_t d = static_cast<std::size_t>(f.ambient_dim());
    const std::size_t k1 = static_cast<std::size_t>(u.cols());
    const std::size_t k2 = static_cast<std::size_t>(v.cols());
    Dense a(d, std::vector<double>(k1 + k2));
    std::vector<double> rhs(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < k1; ++c) a[r][c] = u(r, c);
        for (std::size_t c = 0; c < k2; ++c) a[r][k1 + c] = -v(r, c);
        rhs[r] = g.base()(r) - f.base()(r);
    }
    const auto ts = normal_equations(a, rhs);
    PairResult out;
    out.on_first = f.base();
    out.on_second = g.base();
    for (std::size_t c = 0; c < k1; ++c) out.on_first += ts[c] * u.col(c);
    for (std::size_t c = 0; c < k2; ++c) out.on_second += ts[k1 + c] * v.col(c);
    out.midpoint = 0.5 * (out.on_first + out.on_second);
    out.distance = (out.on_first - out.on_second).norm();
    return out;
}

// Connected components of the graph with an edge whenever two points are
// within `link`, by breadth-first search over all pairs. Components are
// labeled in order of their smallest member.
inline std::vector<std::size_t> components(const std::vector<flatcluster::Vector>& pts,
                                           double link) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> label(n, n);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != n) continue;
        std::queue<std::size_t> q;
        q.push(s);
        label[s] = next;
        while (!q.empty()) {
            const std::size_t x = q.front();
            q.pop();
            for (std::size_t y = 0; y < n; ++y) {
                if (label[y] == n && (pts[x] - pts[y]).norm() <= link) {
                    label[y] = next;
                    q.push(y);
                }
            }
        }
        ++next;
    }
    return label;
}

}  // namespace oracle
