#include "hodge/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace hodge {

namespace {

void enumerate_subsets(int n, int size, int start, Mask current, std::vector<Mask>& out) {
  if (size == 0) {
    out.push_back(current);
    return;
  }
  for (int i = start; i <= n - size; ++i)
    enumerate_subsets(n, size - 1, i + 1, current | (Mask{1} << i), out);
}

int sign_of_parity(int swaps) { return (swaps & 1) ? -1 : 1; }

}  // namespace

int popcount(Mask m) { return std::popcount(m); }

Mask mask_of(std::span<const int> indices) {
  Mask m = 0;
  int prev = -1;
  for (int i : indices) {
    if (i <= prev) throw ContractViolation("multi-index must be strictly ascending");
    if (i < 0 || i >= ExteriorContext::kMaxDim) throw ContractViolation("multi-index entry out of range");
    m |= Mask{1} << i;
    prev = i;
  }
  return m;
}

std::vector<int> indices_of(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

int merge_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int idx = std::countr_zero(rest);
    const Mask above = ~((Mask{2} << idx) - 1);
    swaps += std::popcount(a & above);
  }
  return sign_of_parity(swaps);
}

ContextPtr ExteriorContext::make(int n) { return std::make_shared<const ExteriorContext>(n); }

ExteriorContext::ExteriorContext(int n) : n_(n) {
  if (n < 0 || n > kMaxDim) throw ContractViolation("ExteriorContext: dimension out of range");
  subsets_.resize(static_cast<std::size_t>(n) + 1);
  rank_.assign(std::size_t{1} << n, -1);
  for (int p = 0; p <= n; ++p) {
    enumerate_subsets(n, p, 0, 0, subsets_[p]);
    for (std::size_t k = 0; k < subsets_[p].size(); ++k)
      rank_[subsets_[p][k]] = static_cast<Index>(k);
  }
}

Index ExteriorContext::subset_count(int p) const {
  if (p < 0 || p > n_) return 0;
  return static_cast<Index>(subsets_[p].size());
}

Index ExteriorContext::dim(int p, int q) const { return subset_count(p) * subset_count(q); }

Index ExteriorContext::position(Mask i, Mask j) const {
  return rank_[i] * subset_count(std::popcount(j)) + rank_[j];
}

std::pair<Mask, Mask> ExteriorContext::pair_at(int p, int q, Index pos) const {
  const Index cq = subset_count(q);
  return {subsets_[p][static_cast<std::size_t>(pos / cq)], subsets_[q][static_cast<std::size_t>(pos % cq)]};
}

std::span<const Mask> ExteriorContext::subsets(int p) const { return subsets_.at(p); }

void require_same_context(const ContextPtr& a, const ContextPtr& b, const char* what) {
  if (a != b && (!a || !b || a->n() != b->n()))
    throw ContextMismatch(std::string(what) + ": forms live on different spaces");
}

// ---------------------------------------------------------------------------
// Form

Form::Form(ContextPtr ctx, int p, int q) : ctx_(std::move(ctx)), p_(p), q_(q) {
  if (!ctx_) throw ContractViolation("Form: null context");
  if (!ctx_->valid_bidegree(p, q)) throw BidegreeError("Form: bidegree out of range");
  coeffs_ = CVector::Zero(ctx_->dim(p, q));
}

Form::Form(ContextPtr ctx, int p, int q, CVector coeffs) : Form(std::move(ctx), p, q) {
  if (coeffs.size() != coeffs_.size()) throw ContractViolation("Form: coefficient length mismatch");
  num::require_finite(coeffs, "Form");
  coeffs_ = std::move(coeffs);
}

Form Form::monomial(ContextPtr ctx, std::span<const int> i, std::span<const int> j, Complex c) {
  const Mask mi = mask_of(i);
  const Mask mj = mask_of(j);
  if (!i.empty() && i.back() >= ctx->n()) throw ContractViolation("Form::monomial: index exceeds n");
  if (!j.empty() && j.back() >= ctx->n()) throw ContractViolation("Form::monomial: index exceeds n");
  Form f(ctx, static_cast<int>(i.size()), static_cast<int>(j.size()));
  f.coeffs_(ctx->position(mi, mj)) = c;
  return f;
}

Form Form::scalar(ContextPtr ctx, Complex c) {
  Form f(std::move(ctx), 0, 0);
  f.coeffs_(0) = c;
  return f;
}

Complex Form::coefficient(Mask i, Mask j) const {
  if (std::popcount(i) != p_ || std::popcount(j) != q_) return 0.0;
  return coeffs_(ctx_->position(i, j));
}

void Form::require_same_space(const Form& other) const {
  require_same_context(ctx_, other.ctx_, "Form arithmetic");
  if (p_ != other.p_ || q_ != other.q_) throw BidegreeError("Form arithmetic: bidegrees differ");
}

Form& Form::operator+=(const Form& other) {
  require_same_space(other);
  coeffs_ += other.coeffs_;
  return *this;
}

Form& Form::operator-=(const Form& other) {
  require_same_space(other);
  coeffs_ -= other.coeffs_;
  return *this;
}

Form& Form::operator*=(Complex c) {
  coeffs_ *= c;
  return *this;
}

// ---------------------------------------------------------------------------
// PositiveForm

PositiveForm::PositiveForm(ContextPtr ctx, CMatrix h, PositivityKind kind)
    : ctx_(std::move(ctx)), h_(std::move(h)), kind_(kind) {
  if (!ctx_) throw ContractViolation("PositiveForm: null context");
  if (h_.rows() != ctx_->n() || h_.cols() != ctx_->n())
    throw ContractViolation("PositiveForm: coefficient matrix must be n x n");
  num::require_finite(h_, "PositiveForm");
  if ((h_ - h_.adjoint()).norm() > 1e-12 * std::max(1.0, h_.norm()))
    throw ContractViolation("PositiveForm: coefficient matrix is not Hermitian");
  h_ = 0.5 * (h_ + h_.adjoint());
  const auto eig = num::hermitian_eigen(h_);
  if (ctx_->n() == 0) return;
  const double lmin = eig.values(0);
  if (kind_ == PositivityKind::Strict) {
    if (!(lmin > 0.0)) {
      std::ostringstream os;
      os << "PositiveForm: smallest eigenvalue " << lmin << " is not positive";
      throw NotStrictlyPositive(os.str());
    }
  } else {
    const double tau = num::TolPolicy{}.relative(h_.rows(), h_.cols());
    const double scale = eig.values.cwiseAbs().maxCoeff();
    if (lmin < -tau * scale) throw ContractViolation("PositiveForm: pullback matrix is not semidefinite");
  }
}

PositiveForm PositiveForm::standard(ContextPtr ctx) {
  const int n = ctx->n();
  return PositiveForm(std::move(ctx), CMatrix::Identity(n, n));
}

PositiveForm PositiveForm::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw ContractViolation("PositiveForm::scaled: factor must be positive");
  return PositiveForm(ctx_, lambda * h_, kind_);
}

PositiveForm PositiveForm::operator+(const PositiveForm& other) const {
  require_same_context(ctx_, other.ctx_, "PositiveForm sum");
  const auto kind = (strictly_positive() || other.strictly_positive()) ? PositivityKind::Strict
                                                                        : PositivityKind::SemidefinitePullback;
  return PositiveForm(ctx_, h_ + other.h_, kind);
}

// ---------------------------------------------------------------------------
// Products

Form wedge(const Form& a, const Form& b) {
  require_same_context(a.context(), b.context(), "wedge");
  const auto& ctx = a.context();
  const int n = ctx->n();
  const int p = a.p() + b.p();
  const int q = a.q() + b.q();
  if (p > n || q > n) return Form(ctx, std::min(p, n), std::min(q, n));

  Form out(ctx, p, q);
  CVector acc = CVector::Zero(ctx->dim(p, q));
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  for (Index x = 0; x < ca.size(); ++x) {
    if (ca(x) == Complex(0.0)) continue;
    const auto [i1, j1] = ctx->pair_at(a.p(), a.q(), x);
    for (Index y = 0; y < cb.size(); ++y) {
      if (cb(y) == Complex(0.0)) continue;
      const auto [i2, j2] = ctx->pair_at(b.p(), b.q(), y);
      if ((i1 & i2) || (j1 & j2)) continue;
      // dz^I1 dzbar^J1 dz^I2 dzbar^J2: move dz^I2 across dzbar^J1, then merge.
      int sign = ((a.q() * b.p()) & 1) ? -1 : 1;
      sign *= merge_sign(i1, i2) * merge_sign(j1, j2);
      acc(ctx->position(i1 | i2, j1 | j2)) += static_cast<double>(sign) * ca(x) * cb(y);
    }
  }
  return Form(ctx, p, q, std::move(acc));
}

Form wedge_all(std::span<const Form> factors, const ContextPtr& ctx) {
  Form acc = Form::scalar(ctx, 1.0);
  for (const auto& f : factors) acc = wedge(acc, f);
  return acc;
}

Form power(const Form& a, int k) {
  if (k < 0) throw ContractViolation("power: negative exponent");
  Form acc = Form::scalar(a.context(), 1.0);
  for (int i = 0; i < k; ++i) acc = wedge(acc, a);
  return acc;
}

Form conjugate(const Form& a) {
  const auto& ctx = a.context();
  CVector out = CVector::Zero(ctx->dim(a.q(), a.p()));
  const int sign = ((a.p() * a.q()) & 1) ? -1 : 1;
  for (Index x = 0; x < a.coeffs().size(); ++x) {
    const auto [i, j] = ctx->pair_at(a.p(), a.q(), x);
    out(ctx->position(j, i)) = static_cast<double>(sign) * std::conj(a.coeffs()(x));
  }
  return Form(ctx, a.q(), a.p(), std::move(out));
}

bool is_real(const Form& a) {
  if (a.p() != a.q()) throw BidegreeError("is_real: form is not of bidegree (r,r)");
  const double scale = a.coeff_norm();
  return (conjugate(a).coeffs() - a.coeffs()).norm() <= 1e-12 * scale;
}

Form positive_form_to_form(const PositiveForm& omega) {
  const auto& ctx = omega.context();
  const int n = ctx->n();
  if (n == 0) return Form(ctx, 0, 0);
  CVector c = CVector::Zero(ctx->dim(1, 1));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      c(ctx->position(Mask{1} << j, Mask{1} << k)) = kI * omega.hermitian()(j, k);
  return Form(ctx, 1, 1, std::move(c));
}

CMatrix compound_matrix(const CMatrix& m, int p) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<Mask> row_sets;
  std::vector<Mask> col_sets;
  if (p <= rows) enumerate_subsets(rows, p, 0, 0, row_sets);
  if (p <= cols) enumerate_subsets(cols, p, 0, 0, col_sets);
  CMatrix out(static_cast<Index>(row_sets.size()), static_cast<Index>(col_sets.size()));
  for (std::size_t a = 0; a < row_sets.size(); ++a) {
    const auto ri = indices_of(row_sets[a]);
    for (std::size_t b = 0; b < col_sets.size(); ++b) {
      const auto ci = indices_of(col_sets[b]);
      if (p == 0) {
        out(static_cast<Index>(a), static_cast<Index>(b)) = 1.0;
        continue;
      }
      CMatrix minor(p, p);
      for (int s = 0; s < p; ++s)
        for (int t = 0; t < p; ++t) minor(s, t) = m(ri[s], ci[t]);
      out(static_cast<Index>(a), static_cast<Index>(b)) = minor.determinant();
    }
  }
  return out;
}

Form pullback_form(const Form& a, const CMatrix& p, const ContextPtr& target) {
  const auto& src = a.context();
  if (p.rows() != src->n() || p.cols() != target->n())
    throw ContractViolation("pullback_form: map matrix must be m x n");
  if (a.p() > target->n() || a.q() > target->n()) return Form(target, std::min(a.p(), target->n()), std::min(a.q(), target->n()));
  const CMatrix cp = compound_matrix(p, a.p());
  const CMatrix cq = compound_matrix(p.conjugate(), a.q());
  // Reshape row-major coefficients into a (subsets_p x subsets_q) matrix.
  const Index sp = src->subset_count(a.p());
  const Index sq = src->subset_count(a.q());
  CMatrix coeff(sp, sq);
  for (Index x = 0; x < sp; ++x)
    for (Index y = 0; y < sq; ++y) coeff(x, y) = a.coeffs()(x * sq + y);
  const CMatrix moved = cp.transpose() * coeff * cq;
  CVector out(moved.size());
  for (Index x = 0; x < moved.rows(); ++x)
    for (Index y = 0; y < moved.cols(); ++y) out(x * moved.cols() + y) = moved(x, y);
  return Form(target, a.p(), a.q(), std::move(out));
}

PositiveForm pullback(const CMatrix& p, const PositiveForm& omega_w, const ContextPtr& target) {
  if (p.rows() != omega_w.n() || p.cols() != target->n())
    throw ContractViolation("pullback: map matrix must be m x n");
  const CMatrix h = p.transpose() * omega_w.hermitian() * p.conjugate();
  return PositiveForm(target, h, PositivityKind::SemidefinitePullback);
}

Complex volume_coefficient(const PositiveForm& omega) {
  const int n = omega.n();
  if (n == 0) return 1.0;
  Complex ipow = 1.0;
  for (int k = 0; k < n; ++k) ipow *= kI;
  const int swaps = n * (n - 1) / 2;
  const Complex det = omega.hermitian().determinant();
  return ipow * static_cast<double>(sign_of_parity(swaps)) * det;
}

double norm_omega(const Form& a, const PositiveForm& omega) {
  require_same_context(a.context(), omega.context(), "norm_omega");
  if (!omega.strictly_positive()) throw NotStrictlyPositive("norm_omega: omega is only semidefinite");
  const int n = omega.n();
  if (n == 0) return a.coeff_norm();
  // H^T = conj(H) = L L^*; dz = T theta with T = L^{-*} makes omega standard.
  Eigen::LLT<CMatrix> llt(omega.hermitian().conjugate());
  if (llt.info() != Eigen::Success) throw NotStrictlyPositive("norm_omega: Cholesky factorization failed");
  const CMatrix linv = llt.matrixL().solve(CMatrix::Identity(n, n));
  const CMatrix t = linv.adjoint();
  return pullback_form(a, t, a.context()).coeff_norm();
}

Complex integrate(const Form& gamma, const PositiveForm& omega) {
  require_same_context(gamma.context(), omega.context(), "integrate");
  const int n = gamma.n();
  if (gamma.p() != n || gamma.q() != n) throw BidegreeError("integrate: form is not of top bidegree (n,n)");
  if (!omega.strictly_positive()) throw NotStrictlyPositive("integrate: omega is only semidefinite");
  return gamma.coeffs()(0) / volume_coefficient(omega);
}

double comparability_constant(std::span<const PositiveForm> forms, const PositiveForm& omega) {
  if (!omega.strictly_positive()) throw NotStrictlyPositive("comparability_constant: omega is only semidefinite");
  double best = 1.0;
  for (const auto& f : forms) {
    require_same_context(f.context(), omega.context(), "comparability_constant");
    if (f.n() == 0) continue;
    const RVector ev = num::generalized_hermitian_eigenvalues(f.hermitian(), omega.hermitian());
    best = std::max(best, ev(ev.size() - 1));
  }
  return best;
}

}  // namespace hodge
