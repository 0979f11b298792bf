#include "flatcluster/geometry.hpp"

#include <cmath>
#include <random>
#include <string>

#include "flatcluster/errors.hpp"

namespace flatcluster {

namespace {

constexpr double kOrthoTol = 1e-10;

Matrix orthonormal_columns(const Matrix& directions, double rank_tol) {
    std::vector<Vector> cols;
    cols.reserve(static_cast<std::size_t>(directions.cols()));
    for (Index j = 0; j < directions.cols(); ++j) {
        if (directions.col(j).norm() == 0.0) {
            throw DegenerateFlat("direction " + std::to_string(j) + " is the zero vector");
        }
        cols.push_back(directions.col(j));
    }
    auto basis = orthonormalize(cols, rank_tol);
    if (static_cast<Index>(basis.size()) != directions.cols()) {
        throw DegenerateFlat("flat directions are linearly dependent");
    }
    return columns_to_matrix(basis, directions.rows());
}

}  // namespace

Flat::Flat(Vector base, Matrix directions, double rank_tol)
    : base_(std::move(base)), directions_(std::move(directions)) {
    const Index d = base_.size();
    if (directions_.rows() != d) {
        throw InvalidInput("flat directions have length " + std::to_string(directions_.rows()) +
                           ", base has length " + std::to_string(d));
    }
    const Index k = directions_.cols();
    if (k < 1 || k >= d) {
        throw InvalidInput("flat dimension k=" + std::to_string(k) +
                           " must satisfy 0 < k < d=" + std::to_string(d));
    }
    if (!all_finite(base_) || !all_finite(directions_)) {
        throw InvalidInput("flat has non-finite entries");
    }
    basis_ = orthonormal_columns(directions_, rank_tol);
}

Flat Flat::from_vectors(Vector base, const std::vector<Vector>& directions, double rank_tol) {
    const Index d = base.size();
    return Flat(std::move(base), columns_to_matrix(directions, d), rank_tol);
}

ImplicitFlat::ImplicitFlat(Matrix c_in, Vector e_in) : c(std::move(c_in)), e(std::move(e_in)) {
    if (c.rows() != e.size()) throw InvalidInput("implicit flat: C rows and e length differ");
    if (!all_finite(c) || !all_finite(e)) throw InvalidInput("implicit flat: non-finite entries");
    const Matrix gram = c * c.transpose();
    if (c.rows() > 0 &&
        (gram - Matrix::Identity(c.rows(), c.rows())).cwiseAbs().maxCoeff() > kOrthoTol) {
        throw InvalidInput("implicit flat: rows of C are not orthonormal");
    }
}

Ball::Ball(Vector center_in, double radius_in) : center(std::move(center_in)), radius(radius_in) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be > 0");
    if (!all_finite(center)) throw InvalidInput("ball center has non-finite entries");
}

Isometry::Isometry(Matrix r, Vector t) : rotation(std::move(r)), translation(std::move(t)) {
    const Index d = rotation.rows();
    if (rotation.cols() != d || translation.size() != d) {
        throw InvalidInput("isometry: rotation must be d x d and translation of length d");
    }
    if (!all_finite(rotation) || !all_finite(translation)) {
        throw InvalidInput("isometry: non-finite entries");
    }
    if ((rotation.transpose() * rotation - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() >
        kOrthoTol) {
        throw InvalidInput("isometry: rotation is not orthogonal");
    }
}

Isometry Isometry::identity(Index d) { return Isometry(Matrix::Identity(d, d), Vector::Zero(d)); }

Isometry Isometry::random(Index d, RngStream& rng, double translation_scale) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    // Sign fix makes Q Haar distributed.
    for (Index j = 0; j < d; ++j) {
        if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    Vector t(d);
    for (Index i = 0; i < d; ++i) t(i) = translation_scale * normal(rng);
    return Isometry(std::move(q), std::move(t));
}

ImplicitFlat implicitize(const Flat& f, double rank_tol) {
    const Index d = f.ambient_dim();
    const Index k = f.dim();
    if (numerical_rank(f.directions(), rank_tol) != k) {
        throw DegenerateFlat("implicitize: directions are dependent at rank_tol");
    }
    Eigen::HouseholderQR<Matrix> qr(f.basis());
    Matrix q = qr.householderQ();
    Matrix c = q.rightCols(d - k).transpose();
    Vector e = c * f.base();
    return ImplicitFlat(std::move(c), std::move(e));
}

Flat parametrize(const ImplicitFlat& g, double rank_tol) {
    const auto sol = least_squares(g.c, g.e, rank_tol);
    const double scale = 1.0 + g.e.norm();
    if (sol.residual > 1e-9 * scale) {
        throw DegenerateFlat("parametrize: equations are inconsistent");
    }
    auto dirs = nullspace_basis(g.c, rank_tol);
    if (dirs.empty()) throw DegenerateFlat("parametrize: equations determine a single point");
    return Flat::from_vectors(sol.x, dirs, rank_tol);
}

Vector project_point(const Flat& f, const Vector& p) {
    if (p.size() != f.ambient_dim()) throw InvalidInput("project_point: dimension mismatch");
    const Matrix& q = f.basis();
    return f.base() + q * (q.transpose() * (p - f.base()));
}

double distance_to_point(const Flat& f, const Vector& p) { return (p - project_point(f, p)).norm(); }

Flat apply_isometry(const Flat& f, const Isometry& iso) {
    if (iso.rotation.rows() != f.ambient_dim()) {
        throw InvalidInput("apply_isometry: dimension mismatch");
    }
    return Flat(iso.apply(f.base()), iso.rotation * f.directions());
}

bool general_position(const Flat& f, const Flat& g, double rank_tol) {
    const Index d = f.ambient_dim();
    if (g.ambient_dim() != d) throw InvalidInput("general_position: dimension mismatch");
    Matrix stacked(d, f.dim() + g.dim());
    stacked << f.basis(), g.basis();
    const Index expected = std::min<Index>(f.dim() + g.dim(), d);
    return numerical_rank(stacked, rank_tol) == expected;
}

TrivialCoordinateReduction remove_trivial_coordinates(const std::vector<Flat>& flats,
                                                      double rank_tol) {
    TrivialCoordinateReduction out;
    if (flats.empty()) return out;
    const Index d = flats.front().ambient_dim();
    std::vector<bool> trivial(static_cast<std::size_t>(d), true);
    for (const auto& f : flats) {
        if (f.ambient_dim() != d) throw InvalidInput("remove_trivial_coordinates: mixed d");
        for (Index j = 0; j < d; ++j) {
            // e_j in span(basis) iff its projection has unit norm.
            const double in_span = f.basis().row(j).norm();
            if (std::abs(in_span - 1.0) > 1e-9) trivial[static_cast<std::size_t>(j)] = false;
        }
    }
    for (Index j = 0; j < d; ++j) {
        if (!trivial[static_cast<std::size_t>(j)]) out.kept.push_back(j);
    }
    const Index dropped = d - static_cast<Index>(out.kept.size());
    if (dropped == 0) {
        out.flats = flats;
        return out;
    }
    for (const auto& f : flats) {
        // Intersect with {x_j = 0 for dropped j}: append those rows to the
        // implicit form and re-parametrize, then keep the remaining coordinates.
        const ImplicitFlat imp = implicitize(f, rank_tol);
        Matrix c(imp.c.rows() + dropped, d);
        Vector e(imp.e.size() + dropped);
        c.topRows(imp.c.rows()) = imp.c;
        e.head(imp.e.size()) = imp.e;
        Index row = imp.c.rows();
        for (Index j = 0; j < d; ++j) {
            if (trivial[static_cast<std::size_t>(j)]) {
                c.row(row) = Vector::Unit(d, j).transpose();
                e(row) = 0.0;
                ++row;
            }
        }
        const auto base = least_squares(c, e, rank_tol).x;
        const auto dirs = nullspace_basis(c, rank_tol);
        if (dirs.empty()) {
            throw InvalidInput("remove_trivial_coordinates: a flat would collapse to a point");
        }
        const Index nd = static_cast<Index>(out.kept.size());
        Vector nb(nd);
        Matrix ndirs(nd, static_cast<Index>(dirs.size()));
        for (Index r = 0; r < nd; ++r) {
            nb(r) = base(out.kept[static_cast<std::size_t>(r)]);
            for (std::size_t col = 0; col < dirs.size(); ++col) {
                ndirs(r, static_cast<Index>(col)) = dirs[col](out.kept[static_cast<std::size_t>(r)]);
            }
        }
        out.flats.emplace_back(std::move(nb), std::move(ndirs), rank_tol);
    }
    return out;
}

}  // namespace flatcluster
