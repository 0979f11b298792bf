#pragma once

#include <cstddef>
#include <vector>

#include "flatcluster/numerics.hpp"
#include "flatcluster/rng.hpp"

namespace flatcluster {

/// A k-flat {base + directions * t : t in R^k} in R^d. Directions are stored
/// as given (columns of a d x k matrix); an orthonormal basis of their span
/// is computed once at construction. Immutable.
class Flat {
public:
    /// Throws InvalidInput on non-finite entries or sizes outside 0 < k < d,
    /// DegenerateFlat when directions are dependent at rank_tol.
    Flat(Vector base, Matrix directions, double rank_tol = kDefaultRankTol);

    static Flat from_vectors(Vector base, const std::vector<Vector>& directions,
                             double rank_tol = kDefaultRankTol);

    Index ambient_dim() const { return base_.size(); }
    Index dim() const { return directions_.cols(); }

    const Vector& base() const { return base_; }
    const Matrix& directions() const { return directions_; }
    /// d x k, orthonormal columns spanning the directions.
    const Matrix& basis() const { return basis_; }

    Vector point_at(const Vector& t) const { return base_ + directions_ * t; }

private:
    Vector base_;
    Matrix directions_;
    Matrix basis_;
};

/// {x : Cx = e} with C row-orthonormal, so ||Cx - e|| is the distance from
/// x to the flat.
struct ImplicitFlat {
    Matrix c;  // (d-k) x d
    Vector e;  // d-k

    ImplicitFlat(Matrix c, Vector e);
};

struct Ball {
    Vector center;
    double radius = 1.0;

    Ball(Vector center, double radius = 1.0);
};

/// x -> rotation * x + translation.
struct Isometry {
    Matrix rotation;
    Vector translation;

    Isometry(Matrix rotation, Vector translation);

    static Isometry identity(Index d);
    /// Haar-distributed rotation and Gaussian translation of the given scale.
    static Isometry random(Index d, RngStream& rng, double translation_scale = 1.0);

    Vector apply(const Vector& x) const { return rotation * x + translation; }
};

ImplicitFlat implicitize(const Flat& f, double rank_tol = kDefaultRankTol);
Flat parametrize(const ImplicitFlat& g, double rank_tol = kDefaultRankTol);

/// Nearest point of f to p.
Vector project_point(const Flat& f, const Vector& p);
double distance_to_point(const Flat& f, const Vector& p);

Flat apply_isometry(const Flat& f, const Isometry& iso);

/// True when the direction spaces L(f), L(g) are in general position: the
/// span of their union has dimension min(k_f + k_g, d).
bool general_position(const Flat& f, const Flat& g, double rank_tol = kDefaultRankTol);

struct TrivialCoordinateReduction {
    std::vector<Flat> flats;
    /// Original indices of the coordinates that were kept.
    std::vector<Index> kept;
};

/// Drops every coordinate j such that e_j lies in the direction span of all
/// flats (no object has feature j). Each flat is intersected with x_j = 0
/// before the coordinate is removed, so k and d both shrink by one per
/// dropped coordinate.
TrivialCoordinateReduction remove_trivial_coordinates(const std::vector<Flat>& flats,
                                                      double rank_tol = kDefaultRankTol);

}  // namespace flatcluster
