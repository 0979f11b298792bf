#include "flatcluster/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatcluster/errors.hpp"

namespace flatcluster {

namespace {

void require_tol(double rank_tol) {
    if (!(rank_tol > 0.0) || !std::isfinite(rank_tol)) {
        throw InvalidInput("rank_tol must be positive and finite");
    }
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

Matrix columns_to_matrix(const std::vector<Vector>& columns, Index rows) {
    Matrix m(rows, static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw InvalidInput("column length mismatch");
        m.col(static_cast<Index>(j)) = columns[j];
    }
    return m;
}

LeastSquaresSolution least_squares(const Matrix& a, const Vector& b, double rank_tol) {
    require_tol(rank_tol);
    if (a.rows() != b.size()) {
        throw InvalidInput("least_squares: A has " + std::to_string(a.rows()) +
                           " rows but b has length " + std::to_string(b.size()));
    }
    if (!all_finite(a) || !all_finite(b)) throw InvalidInput("least_squares: non-finite input");

    LeastSquaresSolution out;
    if (a.cols() == 0) {
        out.x = Vector(0);
        out.residual = b.norm();
        return out;
    }
    if (a.rows() == 0) {
        out.x = Vector::Zero(a.cols());
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(rank_tol);
    cod.compute(a);
    out.x = cod.solve(b);
    out.rank = cod.rank();
    out.residual = (a * out.x - b).norm();
    return out;
}

std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors, double rank_tol) {
    require_tol(rank_tol);
    std::vector<Vector> basis;
    if (vectors.empty()) return basis;
    const Index d = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != d) throw InvalidInput("orthonormalize: vectors differ in length");
        if (!all_finite(v)) throw InvalidInput("orthonormalize: non-finite input");
    }
    for (const auto& v : vectors) {
        const double norm = v.norm();
        if (norm == 0.0) continue;
        Vector w = v / norm;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) w -= q.dot(w) * q;
        }
        const double residual = w.norm();
        if (residual <= rank_tol) continue;
        basis.push_back(w / residual);
    }
    return basis;
}

Index numerical_rank(const Matrix& m, double rank_tol) {
    require_tol(rank_tol);
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (!all_finite(m)) throw InvalidInput("numerical_rank: non-finite input");
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rank_tol * sv(0)) ++r;
    }
    return r;
}

std::vector<Vector> nullspace_basis(const Matrix& m, double rank_tol) {
    require_tol(rank_tol);
    if (!all_finite(m)) throw InvalidInput("nullspace_basis: non-finite input");
    const Index n = m.cols();
    std::vector<Vector> out;
    if (m.rows() == 0) {
        for (Index j = 0; j < n; ++j) out.push_back(Vector::Unit(n, j));
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
        for (Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > rank_tol * sv(0)) ++rank;
        }
    }
    const Matrix& v = svd.matrixV();
    for (Index j = rank; j < n; ++j) out.push_back(v.col(j));
    return out;
}

}  // namespace flatcluster
