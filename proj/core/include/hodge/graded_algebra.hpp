#pragma once

// Hodge-Riemann machinery over an abstract finite-dimensional bigraded algebra
// with conjugation and a top-degree integral. The exterior algebra of a vector
// space and an abstract cohomology ring both plug in through GradedAlgebra, so
// L, Lambda, *, the primitive decomposition and the induced metrics are written
// once.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hodge/numkernel.hpp"

namespace hodge {

/// Homogeneous element: bidegree plus coefficients over the algebra's basis of
/// that component.
struct Graded {
  int p = 0;
  int q = 0;
  CVector coeffs;

  int degree() const noexcept { return p + q; }
};

class GradedAlgebra {
 public:
  virtual ~GradedAlgebra() = default;

  /// Complex dimension n; components live in bidegrees 0 <= p,q <= n.
  virtual int top() const = 0;
  virtual Index dim(int p, int q) const = 0;
  /// Product a*b expressed in the (pa+pb, qa+qb) component, which must exist.
  virtual CVector multiply(const Graded& a, const Graded& b) const = 0;
  /// Coefficients of conj(a) in the (q,p) component.
  virtual CVector conjugate(const Graded& a) const = 0;
  virtual Complex integrate(const CVector& top_coeffs) const = 0;

  bool in_range(int p, int q) const { return p >= 0 && q >= 0 && p <= top() && q <= top(); }

  /// Matrix of x -> x * phi on the (p,q) component. Has zero rows when the
  /// target bidegree falls outside the algebra.
  virtual CMatrix multiplication_matrix(const Graded& phi, int p, int q) const;
  /// K with conj(x) = K * conj_entrywise(x), mapping (p,q) to (q,p).
  virtual CMatrix conjugation_matrix(int p, int q) const;
  /// Z(a,b) = integral of e_a * e_b for e_a in (p,q), e_b in (n-p,n-q).
  virtual CMatrix pairing_matrix(int p, int q) const;

  Graded zero(int p, int q) const { return {p, q, CVector::Zero(in_range(p, q) ? dim(p, q) : 0)}; }
  Graded unit() const;
  Graded product(const Graded& a, const Graded& b) const;
  Graded power(const Graded& a, int k) const;
  Graded conj(const Graded& a) const { return {a.q, a.p, conjugate(a)}; }
  bool is_real(const Graded& a, double rel_tol = 1e-12) const;
};

enum class Side { Low, High };

struct CertificateEntry {
  int p = 0;
  int q = 0;
  int k = 0;
  Index dim = 0;
  Index rank = 0;
  bool full = false;
  double sigma_min = 0.0;
  double sigma_ratio = 0.0;  // sigma_min / sigma_max
  Index primitive_dim = 0;
  std::optional<double> lambda_min_primitive;  // empty when P^{p,q} = 0
  double positivity_margin = 0.0;              // lambda_min / |Gram|, +inf when P^{p,q} = 0
  bool positive = false;
};

struct Certificate {
  int n = 0;
  int r = 0;
  bool verified = false;
  std::vector<CertificateEntry> entries;  // ordered by p, then q
  std::optional<std::size_t> first_failure;
  std::string failure_reason;

  double min_sigma_ratio() const;
  double min_positivity_margin() const;
};

struct PrimitiveDecomposition {
  int p = 0;  // bidegree of the decomposed element
  int q = 0;
  Side side = Side::Low;
  int k = 0;  // n - r - p' - q' for the low-side partner (p',q')
  std::vector<Graded> components;  // components[i] in P^{p'-i, q'-i}
  double residual = 0.0;           // relative reconstruction residual
};

/// Positivity threshold on primitive Gram matrices, relative to their norm.
inline constexpr double kPositivityTolerance = 1e-8;

/// A pair (nu, omega) over a graded algebra together with its verification
/// certificate. Immutable after construction; every method is const and
/// thread-safe.
class HodgeRiemannStructure {
 public:
  HodgeRiemannStructure(std::shared_ptr<const GradedAlgebra> algebra, Graded nu, Graded omega);

  const GradedAlgebra& algebra() const { return *alg_; }
  const std::shared_ptr<const GradedAlgebra>& algebra_ptr() const { return alg_; }
  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  const Graded& nu() const noexcept { return nu_; }
  const Graded& omega() const noexcept { return omega_; }
  const Certificate& certificate() const noexcept { return cert_; }
  bool verified() const noexcept { return cert_.verified; }

  const Graded& omega_power(int j) const { return omega_pow_.at(static_cast<std::size_t>(j)); }
  const Graded& nu_omega_power(int j) const { return nu_omega_pow_.at(static_cast<std::size_t>(j)); }

  /// Low when p+q <= n-r, High when p+q >= n+r; throws DegreeOutOfRange in between.
  Side side_of(int p, int q) const;

  /// Matrix of -^ nu omega^k on the (p,q) component.
  CMatrix lefschetz_matrix(int p, int q, int k) const;
  /// G with <x,y>_{nu omega^k} = y^* G x on the (p,q) component, k = n-r-p-q.
  const CMatrix& hermitian_form_matrix(int p, int q) const;
  Complex hermitian_form(const Graded& a, const Graded& b, int k) const;
  /// Orthonormal basis of P^{p,q} as columns, p+q <= n-r.
  const CMatrix& primitive_basis(int p, int q) const;

  PrimitiveDecomposition decompose(const Graded& a) const;
  Graded reconstruct(const PrimitiveDecomposition& d) const;

  Graded lefschetz_L(const Graded& a) const;
  Graded lefschetz_lambda(const Graded& a) const;
  Graded star(const Graded& a) const;

  /// Squared metric by the primitive-component formula.
  double metric_squared(const Graded& a) const;
  /// (a, a) = integral of a ^ *conj(a), computed through the star operator.
  Complex inner_product_via_star(const Graded& a, const Graded& b) const;

 private:
  void require_verified(const char* what) const;
  std::size_t low_slot(int p, int q) const;
  CMatrix decomposition_matrix(int p, int q, Side side) const;
  static Complex hermitian_sign(int p, int q);
  static Complex star_coefficient(int p, int q, int k, int i);

  std::shared_ptr<const GradedAlgebra> alg_;
  int n_;
  int r_;
  Graded nu_;
  Graded omega_;
  std::vector<Graded> omega_pow_;
  std::vector<Graded> nu_omega_pow_;
  Certificate cert_;
  // Indexed by low_slot(p,q) for p+q <= n-r.
  std::vector<CMatrix> primitive_;
  std::vector<CMatrix> gram_full_;
};

double factorial(int k);

}  // namespace hodge
