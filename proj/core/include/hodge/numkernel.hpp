#pragma once

// Dense complex linear algebra used by every other module. Everything here is a
// pure function of its inputs.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hodge/errors.hpp"

namespace hodge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

namespace num {

/// Relative tolerance policy. The effective threshold for a matrix of shape
/// rows x cols is `scale * max(rows, cols)` times its spectral norm.
struct TolPolicy {
  double scale = 1e-10;
  double relative(Index rows, Index cols) const {
    return scale * static_cast<double>(std::max<Index>({rows, cols, Index{1}}));
  }
};

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, columns are eigenvectors
};

struct SvdSummary {
  RVector singular_values;  // descending
  Index rank = 0;
  double threshold = 0.0;   // absolute cut used for the rank decision
};

bool all_finite(const CMatrix& m);
void require_finite(const CMatrix& m, const char* what);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const CMatrix& m);

HermitianEigen hermitian_eigen(const CMatrix& m);

/// Orthonormal basis of ker(M) as the columns of the result (cols x d).
CMatrix nullspace(const CMatrix& m, TolPolicy tol = {});

/// Orthonormal basis of the column space of M.
CMatrix range_basis(const CMatrix& m, TolPolicy tol = {});

SvdSummary svd_summary(const CMatrix& m, TolPolicy tol = {});
Index numerical_rank(const CMatrix& m, TolPolicy tol = {});

/// Solves M x = b for square, numerically invertible M.
/// Throws SingularSystem when sigma_min <= tau * sigma_max.
CVector solve(const CMatrix& m, const CVector& b, TolPolicy tol = {});

/// Eigenvalues of the pencil (A, B) for Hermitian A and Hermitian positive
/// definite B, ascending.
RVector generalized_hermitian_eigenvalues(const CMatrix& a, const CMatrix& b);

/// sin of the largest principal angle between span(A) and span(B) measured
/// from A: max over unit x in span(A) of dist(x, span(B)). Both inputs must
/// have orthonormal columns. Returns 0 when A has no columns.
double subspace_excess(const CMatrix& a, const CMatrix& b);

}  // namespace num
}  // namespace hodge
