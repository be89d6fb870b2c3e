#include "hodge/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hodge::num {

namespace {

Eigen::JacobiSVD<CMatrix> full_svd(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}  // namespace

bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_finite(const CMatrix& m, const char* what) {
  if (!all_finite(m)) throw ContractViolation(std::string(what) + ": non-finite entry");
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

HermitianEigen hermitian_eigen(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("hermitian_eigen: matrix is not square");
  require_finite(m, "hermitian_eigen");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * scale)
    throw ContractViolation("hermitian_eigen: matrix is not Hermitian");
  if (m.size() == 0) return {};
  // Symmetrize so rounding asymmetry never leaks into the solver.
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw ContractViolation("hermitian_eigen: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

SvdSummary svd_summary(const CMatrix& m, TolPolicy tol) {
  require_finite(m, "svd_summary");
  SvdSummary out;
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<CMatrix> svd(m);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values(0);
  out.threshold = tol.relative(m.rows(), m.cols()) * smax;
  for (Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > out.threshold) ++out.rank;
  return out;
}

Index numerical_rank(const CMatrix& m, TolPolicy tol) { return svd_summary(m, tol).rank; }

CMatrix nullspace(const CMatrix& m, TolPolicy tol) {
  require_finite(m, "nullspace");
  const Index n = m.cols();
  if (n == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(n, n);
  auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const double cut = tol.relative(m.rows(), m.cols()) * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMatrix range_basis(const CMatrix& m, TolPolicy tol) {
  require_finite(m, "range_basis");
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const double cut = tol.relative(m.rows(), m.cols()) * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

CVector solve(const CMatrix& m, const CVector& b, TolPolicy tol) {
  if (m.rows() != m.cols()) throw ContractViolation("solve: matrix is not square");
  if (b.size() != m.rows()) throw ContractViolation("solve: right-hand side has wrong length");
  require_finite(m, "solve");
  require_finite(b, "solve");
  if (m.rows() == 0) return CVector(0);
  auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const double ratio = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
  if (!(ratio > tol.relative(m.rows(), m.cols()))) {
    std::ostringstream os;
    os << "solve: system is singular to tolerance (sigma_min/sigma_max = " << ratio << ")";
    throw SingularSystem(os.str(), ratio);
  }
  return svd.solve(b);
}

RVector generalized_hermitian_eigenvalues(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ContractViolation("generalized_hermitian_eigenvalues: shape mismatch");
  require_finite(a, "generalized_hermitian_eigenvalues");
  require_finite(b, "generalized_hermitian_eigenvalues");
  Eigen::LLT<CMatrix> llt(0.5 * (b + b.adjoint()));
  if (llt.info() != Eigen::Success)
    throw ContractViolation("generalized_hermitian_eigenvalues: B is not positive definite");
  const CMatrix linv = llt.matrixL().solve(CMatrix::Identity(b.rows(), b.cols()));
  const CMatrix c = linv * a * linv.adjoint();
  return hermitian_eigen(0.5 * (c + c.adjoint())).values;
}

double subspace_excess(const CMatrix& a, const CMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() != 0 && a.rows() != b.rows())
    throw ContractViolation("subspace_excess: ambient dimensions differ");
  CMatrix residual = a;
  if (b.cols() != 0) residual -= b * (b.adjoint() * a);
  return std::min(1.0, spectral_norm(residual));
}

}  // namespace hodge::num
