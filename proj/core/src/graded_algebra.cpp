#include "hodge/graded_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hodge {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

namespace {

Complex i_power(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double minus_one_power(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

// ---------------------------------------------------------------------------
// GradedAlgebra defaults

CMatrix GradedAlgebra::multiplication_matrix(const Graded& phi, int p, int q) const {
  const Index cols = dim(p, q);
  const int tp = p + phi.p;
  const int tq = q + phi.q;
  if (!in_range(tp, tq)) return CMatrix(0, cols);
  CMatrix m(dim(tp, tq), cols);
  Graded e{p, q, CVector::Zero(cols)};
  for (Index j = 0; j < cols; ++j) {
    e.coeffs.setZero();
    e.coeffs(j) = 1.0;
    m.col(j) = multiply(e, phi);
  }
  return m;
}

CMatrix GradedAlgebra::conjugation_matrix(int p, int q) const {
  const Index cols = dim(p, q);
  CMatrix k(dim(q, p), cols);
  Graded e{p, q, CVector::Zero(cols)};
  for (Index j = 0; j < cols; ++j) {
    e.coeffs.setZero();
    e.coeffs(j) = 1.0;
    k.col(j) = conjugate(e);
  }
  return k;
}

CMatrix GradedAlgebra::pairing_matrix(int p, int q) const {
  const int n = top();
  const Index rows = dim(p, q);
  const Index cols = dim(n - p, n - q);
  CMatrix z(rows, cols);
  Graded a{p, q, CVector::Zero(rows)};
  Graded b{n - p, n - q, CVector::Zero(cols)};
  for (Index i = 0; i < rows; ++i) {
    a.coeffs.setZero();
    a.coeffs(i) = 1.0;
    for (Index j = 0; j < cols; ++j) {
      b.coeffs.setZero();
      b.coeffs(j) = 1.0;
      z(i, j) = integrate(multiply(a, b));
    }
  }
  return z;
}

Graded GradedAlgebra::unit() const {
  Graded u = zero(0, 0);
  if (u.coeffs.size() != 1) throw ContractViolation("GradedAlgebra: degree-zero component must be one-dimensional");
  u.coeffs(0) = 1.0;
  return u;
}

Graded GradedAlgebra::product(const Graded& a, const Graded& b) const {
  const int p = a.p + b.p;
  const int q = a.q + b.q;
  if (!in_range(p, q)) return {p, q, CVector(0)};
  return {p, q, multiply(a, b)};
}

Graded GradedAlgebra::power(const Graded& a, int k) const {
  Graded acc = unit();
  for (int i = 0; i < k; ++i) acc = product(acc, a);
  return acc;
}

bool GradedAlgebra::is_real(const Graded& a, double rel_tol) const {
  if (a.p != a.q) return false;
  return (conjugate(a) - a.coeffs).norm() <= rel_tol * a.coeffs.norm();
}

// ---------------------------------------------------------------------------
// Certificate

double Certificate::min_sigma_ratio() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.sigma_ratio);
  return m;
}

double Certificate::min_positivity_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.positivity_margin);
  return m;
}

// ---------------------------------------------------------------------------
// HodgeRiemannStructure

HodgeRiemannStructure::HodgeRiemannStructure(std::shared_ptr<const GradedAlgebra> algebra, Graded nu,
                                             Graded omega)
    : alg_(std::move(algebra)), n_(alg_->top()), r_(nu.p), nu_(std::move(nu)), omega_(std::move(omega)) {
  if (nu_.p != nu_.q) throw BidegreeError("Hodge-Riemann pair: nu must have bidegree (r,r)");
  if (r_ < 0 || r_ > n_) throw BidegreeError("Hodge-Riemann pair: r out of range");
  if (omega_.p != 1 || omega_.q != 1) {
    if (n_ != 0) throw BidegreeError("Hodge-Riemann pair: omega must have bidegree (1,1)");
  }
  if (nu_.coeffs.size() != alg_->dim(r_, r_)) throw ContractViolation("Hodge-Riemann pair: nu has wrong length");
  if (!alg_->is_real(nu_, 1e-10)) throw ContractViolation("Hodge-Riemann pair: nu is not real");
  if (n_ > 0 && !alg_->is_real(omega_, 1e-10)) throw ContractViolation("Hodge-Riemann pair: omega is not real");

  omega_pow_.push_back(alg_->unit());
  for (int j = 1; j <= n_; ++j) omega_pow_.push_back(alg_->product(omega_pow_.back(), omega_));
  for (int j = 0; j <= n_ - r_; ++j) nu_omega_pow_.push_back(alg_->product(nu_, omega_pow_[static_cast<std::size_t>(j)]));

  const int band = n_ - r_;
  primitive_.resize(static_cast<std::size_t>((band + 1) * (band + 1)));
  gram_full_.resize(primitive_.size());

  cert_.n = n_;
  cert_.r = r_;
  cert_.verified = true;
  for (int p = 0; p <= band; ++p) {
    for (int q = 0; p + q <= band; ++q) {
      const int k = band - p - q;
      CertificateEntry e;
      e.p = p;
      e.q = q;
      e.k = k;
      e.dim = alg_->dim(p, q);

      const CMatrix w = lefschetz_matrix(p, q, k);
      const auto svd = num::svd_summary(w);
      e.rank = svd.rank;
      if (svd.singular_values.size() > 0) {
        e.sigma_min = svd.singular_values(svd.singular_values.size() - 1);
        e.sigma_ratio = svd.singular_values(0) > 0.0 ? e.sigma_min / svd.singular_values(0) : 0.0;
      }
      e.full = (w.rows() == w.cols()) && svd.rank == e.dim;
      if (e.dim == 0) {
        e.full = true;
        e.sigma_ratio = 1.0;
      }

      const auto slot = low_slot(p, q);
      primitive_[slot] = num::nullspace(lefschetz_matrix(p, q, k + 1));
      e.primitive_dim = primitive_[slot].cols();

      // <x,y> = c (W x)^T Z (K conj(y)) = y^* (c K^T Z^T W) x
      const CMatrix z = alg_->pairing_matrix(n_ - q, n_ - p);
      const CMatrix kc = alg_->conjugation_matrix(p, q);
      gram_full_[slot] = hermitian_sign(p, q) * (kc.transpose() * z.transpose() * w);

      if (e.primitive_dim == 0) {
        e.positive = true;
        e.positivity_margin = std::numeric_limits<double>::infinity();
      } else {
        const CMatrix& basis = primitive_[slot];
        const CMatrix gram = basis.adjoint() * gram_full_[slot] * basis;
        const auto eig = num::hermitian_eigen(gram);
        const double lmin = eig.values(0);
        const double scale = eig.values.cwiseAbs().maxCoeff();
        e.lambda_min_primitive = lmin;
        e.positivity_margin = scale > 0.0 ? lmin / scale : 0.0;
        e.positive = scale > 0.0 && lmin > kPositivityTolerance * scale;
      }

      if ((!e.full || !e.positive) && !cert_.first_failure) {
        cert_.verified = false;
        cert_.first_failure = cert_.entries.size();
        std::ostringstream os;
        os << "(p,q,k)=(" << p << "," << q << "," << k << "): ";
        if (!e.full)
          os << "-^nu omega^k has rank " << e.rank << " < " << e.dim << " (sigma_min/sigma_max=" << e.sigma_ratio << ")";
        else
          os << "primitive Hermitian form not positive definite (margin " << e.positivity_margin << ")";
        cert_.failure_reason = os.str();
      }
      cert_.entries.push_back(e);
    }
  }
}

std::size_t HodgeRiemannStructure::low_slot(int p, int q) const {
  const int band = n_ - r_;
  if (p < 0 || q < 0 || p + q > band) throw DegreeOutOfRange("bidegree outside the low range p+q <= n-r");
  return static_cast<std::size_t>(p * (band + 1) + q);
}

void HodgeRiemannStructure::require_verified(const char* what) const {
  if (!cert_.verified)
    throw UnverifiedPair(std::string(what) + ": pair is not a verified Hodge-Riemann pair (" + cert_.failure_reason + ")");
}

Side HodgeRiemannStructure::side_of(int p, int q) const {
  if (!alg_->in_range(p, q)) throw BidegreeError("bidegree outside the algebra");
  if (p + q <= n_ - r_) return Side::Low;
  if (p + q >= n_ + r_) return Side::High;
  std::ostringstream os;
  os << "bidegree (" << p << "," << q << ") lies in the middle band n-r < p+q < n+r";
  throw DegreeOutOfRange(os.str());
}

CMatrix HodgeRiemannStructure::lefschetz_matrix(int p, int q, int k) const {
  if (k < 0 || r_ + k > n_) return CMatrix(0, alg_->dim(p, q));
  return alg_->multiplication_matrix(nu_omega_pow_[static_cast<std::size_t>(k)], p, q);
}

const CMatrix& HodgeRiemannStructure::hermitian_form_matrix(int p, int q) const {
  return gram_full_[low_slot(p, q)];
}

const CMatrix& HodgeRiemannStructure::primitive_basis(int p, int q) const { return primitive_[low_slot(p, q)]; }

Complex HodgeRiemannStructure::hermitian_sign(int p, int q) {
  return minus_one_power(q) * i_power((p + q) * (p + q));
}

Complex HodgeRiemannStructure::hermitian_form(const Graded& a, const Graded& b, int k) const {
  if (a.p != b.p || a.q != b.q) throw BidegreeError("hermitian_form: arguments have different bidegrees");
  if (a.p + a.q + k + r_ != n_) throw BidegreeError("hermitian_form: need p+q+k+r = n");
  if (k < 0) throw BidegreeError("hermitian_form: negative power");
  const Graded prod = alg_->product(alg_->product(a, alg_->conj(b)), nu_omega_pow_[static_cast<std::size_t>(k)]);
  return hermitian_sign(a.p, a.q) * alg_->integrate(prod.coeffs);
}

Complex HodgeRiemannStructure::star_coefficient(int p, int q, int k, int i) {
  return std::conj(i_power((p + q) * (p + q))) * minus_one_power(q - i) * factorial(i) / factorial(k + i);
}

CMatrix HodgeRiemannStructure::decomposition_matrix(int p, int q, Side side) const {
  // (p,q) is the low-side bidegree; blocks are the images of P^{p-i,q-i}.
  const int k = n_ - r_ - p - q;
  const int imax = std::min(p, q);
  const int tp = side == Side::Low ? p : n_ - q;
  const int tq = side == Side::Low ? q : n_ - p;
  const Index rows = alg_->dim(tp, tq);
  Index cols = 0;
  for (int i = 0; i <= imax; ++i) cols += primitive_basis(p - i, q - i).cols();
  CMatrix a(rows, cols);
  Index at = 0;
  for (int i = 0; i <= imax; ++i) {
    const CMatrix& basis = primitive_basis(p - i, q - i);
    const Graded& factor = side == Side::Low ? omega_pow_[static_cast<std::size_t>(i)]
                                             : nu_omega_pow_[static_cast<std::size_t>(k + i)];
    const CMatrix m = alg_->multiplication_matrix(factor, p - i, q - i);
    a.middleCols(at, basis.cols()) = m * basis;
    at += basis.cols();
  }
  return a;
}

PrimitiveDecomposition HodgeRiemannStructure::decompose(const Graded& a) const {
  require_verified("decompose");
  const Side side = side_of(a.p, a.q);
  PrimitiveDecomposition d;
  d.p = a.p;
  d.q = a.q;
  d.side = side;
  const int lp = side == Side::Low ? a.p : n_ - a.q;
  const int lq = side == Side::Low ? a.q : n_ - a.p;
  d.k = n_ - r_ - lp - lq;

  const CMatrix m = decomposition_matrix(lp, lq, side);
  if (m.rows() != m.cols())
    throw ContractViolation("decompose: primitive dimensions do not add up; certificate is inconsistent");
  CVector c;
  try {
    c = num::solve(m, a.coeffs);
  } catch (const SingularSystem& ex) {
    throw ContractViolation(std::string("decompose: block system singular; certificate is inconsistent: ") + ex.what());
  }
  Index at = 0;
  for (int i = 0; i <= std::min(lp, lq); ++i) {
    const CMatrix& basis = primitive_basis(lp - i, lq - i);
    d.components.push_back({lp - i, lq - i, basis * c.segment(at, basis.cols())});
    at += basis.cols();
  }
  const double scale = a.coeffs.norm();
  const CVector diff = m * c - a.coeffs;
  d.residual = scale > 0.0 ? diff.norm() / scale : diff.norm();
  return d;
}

Graded HodgeRiemannStructure::reconstruct(const PrimitiveDecomposition& d) const {
  Graded out = alg_->zero(d.p, d.q);
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const Graded& factor =
        d.side == Side::Low ? omega_pow_[ii] : nu_omega_pow_[static_cast<std::size_t>(d.k) + ii];
    out.coeffs += alg_->product(d.components[i], factor).coeffs;
  }
  return out;
}

Graded HodgeRiemannStructure::lefschetz_L(const Graded& a) const { return alg_->product(a, omega_); }

Graded HodgeRiemannStructure::lefschetz_lambda(const Graded& a) const {
  require_verified("lambda");
  if (a.p + a.q > n_ - r_) throw DegreeOutOfRange("lambda: defined only for p+q <= n-r");
  const auto d = decompose(a);
  Graded out = alg_->zero(a.p - 1, a.q - 1);
  for (std::size_t i = 1; i < d.components.size(); ++i) {
    const int ii = static_cast<int>(i);
    const double w = ii * (d.k + ii + 1);
    out.coeffs += w * alg_->product(d.components[i], omega_pow_[i - 1]).coeffs;
  }
  return out;
}

Graded HodgeRiemannStructure::star(const Graded& a) const {
  require_verified("star");
  const auto d = decompose(a);
  const int lp = d.side == Side::Low ? a.p : n_ - a.q;
  const int lq = d.side == Side::Low ? a.q : n_ - a.p;
  if (d.side == Side::Low) {
    Graded out = alg_->zero(n_ - a.q, n_ - a.p);
    for (std::size_t i = 0; i < d.components.size(); ++i) {
      const int ii = static_cast<int>(i);
      const Complex c = star_coefficient(lp, lq, d.k, ii);
      out.coeffs += c * alg_->product(d.components[i], nu_omega_pow_[static_cast<std::size_t>(d.k + ii)]).coeffs;
    }
    return out;
  }
  // High side: the inverse of the low-side star, signed so that ** = (-1)^{p+q}.
  Graded out = alg_->zero(lp, lq);
  const double sign = minus_one_power(a.p + a.q);
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const int ii = static_cast<int>(i);
    const Complex c = star_coefficient(lp, lq, d.k, ii);
    out.coeffs += (sign / c) * alg_->product(d.components[i], omega_pow_[i]).coeffs;
  }
  return out;
}

double HodgeRiemannStructure::metric_squared(const Graded& a) const {
  require_verified("metric");
  const auto d = decompose(a);
  double total = 0.0;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const int ii = static_cast<int>(i);
    const Graded& ai = d.components[i];
    const CMatrix& g = hermitian_form_matrix(ai.p, ai.q);
    const double h = (ai.coeffs.adjoint() * g * ai.coeffs)(0, 0).real();
    const double weight = d.side == Side::Low ? factorial(ii) / factorial(d.k + ii) : factorial(d.k + ii) / factorial(ii);
    total += weight * h;
  }
  return total;
}

Complex HodgeRiemannStructure::inner_product_via_star(const Graded& a, const Graded& b) const {
  if (a.p != b.p || a.q != b.q) throw BidegreeError("inner product: arguments have different bidegrees");
  const Graded sb = star(alg_->conj(b));
  return alg_->integrate(alg_->product(a, sb).coeffs);
}

}  // namespace hodge
