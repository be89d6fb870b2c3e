#pragma once

// Finite-dimensional bigraded rings with conjugation and a top-degree
// integral: the cohomology-ring side of Hodge-Riemann theory. Constructors for
// tori, Kunneth products and projective bundles, plus the numerical checks
// that run on them.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hodge/exterior.hpp"
#include "hodge/graded_algebra.hpp"

namespace hodge {

struct BasisElement {
  std::string name;
  int p = 0;
  int q = 0;
};

/// c * e_k
struct Term {
  Index k = 0;
  Complex c = 0.0;
};

/// How a ring was built. Freeness over a base ring is only trusted for
/// Kunneth products and projective bundles.
struct RingProvenance {
  std::string kind = "arbitrary";  // point, projective_space, torus, kunneth, projbundle, arbitrary
  // Basis indices x_j of (1,0) classes; i * sum H_jk x_j conj(x_k) is positive for H > 0.
  std::vector<Index> generators;
  // The subset of generators pulled back from the base ring.
  std::vector<Index> base_generators;
  std::optional<Index> fiber_class;  // w for projective bundles
};

class GradedRing;
using RingPtr = std::shared_ptr<const GradedRing>;

class GradedRing {
 public:
  /// mult has dim*dim entries: mult[i*dim + j] lists e_i * e_j. conj[i] lists
  /// conj(e_i); conjugation is extended antilinearly. integral[k] = integral of e_k.
  GradedRing(int n, std::vector<BasisElement> basis, std::vector<std::vector<Term>> mult,
             std::vector<std::vector<Term>> conj, CVector integral, Index unit, RingProvenance provenance = {});

  int n() const noexcept { return n_; }
  Index dim() const noexcept { return static_cast<Index>(basis_.size()); }
  const std::vector<BasisElement>& basis() const noexcept { return basis_; }
  const BasisElement& element(Index i) const { return basis_.at(static_cast<std::size_t>(i)); }
  Index unit_index() const noexcept { return unit_; }
  const RingProvenance& provenance() const noexcept { return provenance_; }

  const std::vector<Term>& product_terms(Index i, Index j) const { return mult_[static_cast<std::size_t>(i * dim() + j)]; }
  const std::vector<Term>& conj_terms(Index i) const { return conj_[static_cast<std::size_t>(i)]; }
  const CVector& integral_functional() const noexcept { return integral_; }

  /// Basis indices of the (p,q) component in increasing order; empty outside 0..n.
  const std::vector<Index>& component(int p, int q) const;
  Index component_dim(int p, int q) const { return static_cast<Index>(component(p, q).size()); }
  /// Position of basis index i inside its component.
  Index local_index(Index i) const { return local_[static_cast<std::size_t>(i)]; }

  CVector multiply(const CVector& a, const CVector& b) const;
  CVector conjugate(const CVector& a) const;
  Complex integrate(const CVector& a) const { return (integral_.transpose() * a)(0); }

 private:
  int n_;
  std::vector<BasisElement> basis_;
  std::vector<std::vector<Term>> mult_;
  std::vector<std::vector<Term>> conj_;
  CVector integral_;
  Index unit_;
  RingProvenance provenance_;
  std::vector<std::vector<Index>> components_;
  std::vector<Index> local_;
};

class RingElement {
 public:
  RingElement(RingPtr ring, CVector coeffs);

  static RingElement zero(RingPtr ring);
  static RingElement unit(RingPtr ring);
  static RingElement basis(RingPtr ring, Index i, Complex c = 1.0);
  /// Element of the (p,q) component from coefficients over that component.
  static RingElement from_component(RingPtr ring, int p, int q, const CVector& local);

  const RingPtr& ring() const noexcept { return ring_; }
  const CVector& coeffs() const noexcept { return coeffs_; }

  /// Bidegree of the support; empty for the zero element and for mixed elements.
  std::optional<std::pair<int, int>> bidegree(double rel_tol = 0.0) const;
  bool is_zero() const { return coeffs_.isZero(0.0); }
  /// Coefficients over the (p,q) component.
  CVector component(int p, int q) const;

  RingElement& operator+=(const RingElement& o);
  RingElement& operator-=(const RingElement& o);
  RingElement& operator*=(Complex c);
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator*(Complex c, RingElement a) { return a *= c; }
  friend RingElement operator*(const RingElement& a, const RingElement& b);

 private:
  void require_same_ring(const RingElement& o) const;
  RingPtr ring_;
  CVector coeffs_;
};

RingElement conjugate(const RingElement& a);
Complex integral(const RingElement& a);
bool is_real(const RingElement& a, double rel_tol = 1e-12);
RingElement power(const RingElement& a, int k);
/// Homogeneous element in engine form; throws BidegreeError on mixed input.
Graded to_graded(const RingElement& a);
/// Same, for an element known to live in (p,q) (the zero element included).
Graded to_graded(const RingElement& a, int p, int q);
RingElement from_graded(const RingPtr& ring, const Graded& g);

// ---------------------------------------------------------------------------
// Validation

struct RingCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
  std::string detail;
};

struct PairingInfo {
  int p = 0;
  int q = 0;
  Index dim = 0;
  double sigma_ratio = 0.0;  // smallest / largest singular value
  bool nondegenerate = false;
};

struct RingDiagnostics {
  std::vector<RingCheck> checks;
  std::vector<PairingInfo> pairing;
  bool pass = false;
  const RingCheck* find(const std::string& name) const;
};

inline constexpr double kRingTolerance = 1e-10;

RingDiagnostics ring_validate(const GradedRing& ring);

// ---------------------------------------------------------------------------
// Constructors

RingPtr point_ring();
/// R[h]/h^{k+1}, h of bidegree (1,1), integral of h^k equal to 1.
RingPtr projective_space_ring(int k);

/// Cohomology of a complex torus identified with the exterior algebra of one
/// cotangent fibre, integral normalized by omega0.
class TorusRing {
 public:
  TorusRing(int n, const PositiveForm& omega0);

  const RingPtr& ring() const noexcept { return ring_; }
  const ContextPtr& context() const noexcept { return ctx_; }
  const PositiveForm& omega0() const noexcept { return omega0_; }

  RingElement from_form(const Form& f) const;
  /// Inverse of from_form on homogeneous elements (the zero element maps to the (p,q) zero form).
  Form to_form(const RingElement& a, int p, int q) const;
  Form to_form(const RingElement& a) const;
  RingElement from_positive(const PositiveForm& w) const { return from_form(positive_form_to_form(w)); }

 private:
  ContextPtr ctx_;
  PositiveForm omega0_;
  RingPtr ring_;
  std::vector<Index> offset_;  // (p,q) -> first global index
};

TorusRing torus_ring(int n, const PositiveForm& omega0);

struct KunnethProduct {
  RingPtr ring;
  RingPtr first;
  RingPtr second;
  RingElement embed_first(const RingElement& a) const;   // a (x) 1
  RingElement embed_second(const RingElement& b) const;  // 1 (x) b
  RingElement tensor(const RingElement& a, const RingElement& b) const;
};

/// (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd; the first factor is the base.
KunnethProduct kunneth_product(const RingPtr& first, const RingPtr& second);

struct ProjectiveBundle {
  RingPtr ring;
  RingPtr base;
  int rank = 1;
  std::vector<RingElement> chern;  // c_1..c_e on the base
  RingElement pullback(const RingElement& a) const;
  RingElement w() const;
};

/// Free module with basis b * w^j, 0 <= j < e, and w^e = sum_j (-1)^{j+1} c_j w^{e-j}.
ProjectiveBundle projective_bundle_ring(const RingPtr& base, const std::vector<RingElement>& chern, int e);

/// Norm of w^e - c_1 w^{e-1} + ... + (-1)^e c_e, relative to the largest term.
double grothendieck_residual(const ProjectiveBundle& bundle);
/// Largest mismatch between integral(pi^*a * w^{e-1+j}) and integral over the base of a * s_j.
double integral_consistency_residual(const ProjectiveBundle& bundle);

/// Elementary symmetric polynomials c_1..c_e of (1,1) classes.
std::vector<RingElement> chern_from_roots(std::span<const RingElement> roots);

/// i * sum_jk H_jk x_j conj(x_k) over the given (1,0) generators.
RingElement positive_class(const RingPtr& ring, std::span<const Index> generators, const CMatrix& h);

// ---------------------------------------------------------------------------
// Hodge-Riemann pairs inside a ring

/// GradedAlgebra view of a ring, with matrices assembled from the structure constants.
class RingAlgebra final : public GradedAlgebra {
 public:
  explicit RingAlgebra(RingPtr ring) : ring_(std::move(ring)) {}
  const RingPtr& ring() const noexcept { return ring_; }

  int top() const override { return ring_->n(); }
  Index dim(int p, int q) const override { return ring_->component_dim(p, q); }
  CVector multiply(const Graded& a, const Graded& b) const override;
  CVector conjugate(const Graded& a) const override;
  Complex integrate(const CVector& top_coeffs) const override;
  CMatrix multiplication_matrix(const Graded& phi, int p, int q) const override;
  CMatrix conjugation_matrix(int p, int q) const override;
  CMatrix pairing_matrix(int p, int q) const override;

 private:
  RingPtr ring_;
};

class UnverifiedGlobalPair : public UnverifiedPair {
 public:
  UnverifiedGlobalPair(const std::string& what, Certificate cert) : UnverifiedPair(what), cert_(std::move(cert)) {}
  const Certificate& certificate() const noexcept { return cert_; }

 private:
  Certificate cert_;
};

class HRPairGlobal {
 public:
  const RingElement& v() const noexcept { return v_; }
  const RingElement& w() const noexcept { return w_; }
  const Certificate& certificate() const noexcept { return structure_->certificate(); }
  bool verified() const noexcept { return structure_->verified(); }
  const HodgeRiemannStructure& structure() const noexcept { return *structure_; }

 private:
  friend HRPairGlobal verify_hr_pair_global(const RingElement& v, const RingElement& w);
  HRPairGlobal(RingElement v, RingElement w, std::shared_ptr<const HodgeRiemannStructure> s)
      : v_(std::move(v)), w_(std::move(w)), structure_(std::move(s)) {}
  RingElement v_;
  RingElement w_;
  std::shared_ptr<const HodgeRiemannStructure> structure_;
};

HRPairGlobal verify_hr_pair_global(const RingElement& v, const RingElement& w);
/// ||a||_{(v,w)}; throws UnverifiedGlobalPair when the pair failed verification.
double global_metric(const RingElement& a, const HRPairGlobal& pair);
/// ||a||_w, the pair (1, w); defined in every degree.
double classical_metric(const RingElement& a, const RingElement& w);

// ---------------------------------------------------------------------------
// Kernel containment and top Chern class checks

struct ContainmentReport {
  int p = 0;
  int q = 0;
  int s = 0;
  int r = 0;
  Index dim = 0;
  Index kernel_u_dim = 0;
  Index kernel_v_dim = 0;
  double angle = 0.0;  // largest principal angle from ker(u) into ker(v), radians
  bool contained = false;
};

inline constexpr double kContainmentAngle = 1e-8;

/// ker(-^u) inside ker(-^v) at (p,q), with v the product of the pulled-back
/// classes and u = v times the remaining classes. Refuses rings whose freeness
/// over a base is not guaranteed by construction.
ContainmentReport theorem2_check(const RingPtr& y, std::span<const RingElement> pulled_back,
                                 std::span<const RingElement> own, int p, int q);

struct TopChernReport {
  int p = 0;
  int q = 0;
  int e = 0;
  int k = 0;
  double grothendieck_residual = 0.0;
  double integral_residual = 0.0;
  double identity_residual = 0.0;  // max over the sampled a
  int samples = 0;
  Index dim = 0;
  Index rank = 0;
  bool full_rank = false;
  double sigma_ratio = 0.0;
  bool pass = false;  // residuals within tolerance (rank reported separately)
};

/// Builds the projective bundle of the given Chern data over X and checks
/// (pi^*a * gamma) * w * pi^*(w_1...w_k) = pi^*(a c_e w_1...w_k) for random a,
/// then reports the rank of -^ c_e w_1...w_k : H^{p,q} -> H^{n-q,n-p}.
TopChernReport theorem3_check(const RingPtr& x, const std::vector<RingElement>& chern,
                              std::span<const RingElement> classes, int p, int q, std::uint64_t seed = 1,
                              int samples = 8);

enum class PointwiseVerdict { Holds, NotApplicable };

struct PointwiseReport {
  double product_residual = 0.0;
  PointwiseVerdict verdict = PointwiseVerdict::NotApplicable;
};

/// On a torus the constant form a represents its own class; when a * w_1...w_r
/// vanishes, a is the representative whose pointwise product vanishes.
PointwiseReport pointwise_zero_check(const TorusRing& torus, const RingElement& a,
                                     std::span<const RingElement> classes);

}  // namespace hodge
