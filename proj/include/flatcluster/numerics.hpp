#pragma once

#include <Eigen/Dense>
#include <vector>

namespace flatcluster {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Relative rank tolerance: a pivot / singular value counts as nonzero when it
/// exceeds rank_tol times the largest one.
inline constexpr double kDefaultRankTol = 1e-9;

struct LeastSquaresSolution {
    Vector x;
    double residual = 0.0;  // ||Ax - b||
    Index rank = 0;
};

/// Minimum-norm minimizer of ||Ax - b||^2 via a complete orthogonal
/// decomposition. Full column rank gives the unique solution of the normal
/// equations; rank-deficient systems give the minimizer of smallest norm.
LeastSquaresSolution least_squares(const Matrix& a, const Vector& b,
                                   double rank_tol = kDefaultRankTol);

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// residual falls below rank_tol times its own norm is dropped.
std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors,
                                   double rank_tol = kDefaultRankTol);

/// Orthonormal basis of {v : Mv = 0}, cols(M) - rank(M) vectors.
std::vector<Vector> nullspace_basis(const Matrix& m, double rank_tol = kDefaultRankTol);

Index numerical_rank(const Matrix& m, double rank_tol = kDefaultRankTol);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

/// Columns of the result are the given vectors.
Matrix columns_to_matrix(const std::vector<Vector>& columns, Index rows);

}  // namespace flatcluster
