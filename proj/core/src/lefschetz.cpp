#include "hodge/lefschetz.hpp"

#include <algorithm>
#include <cmath>

namespace hodge {

// ---------------------------------------------------------------------------
// ExteriorAlgebra

ExteriorAlgebra::ExteriorAlgebra(ContextPtr ctx, PositiveForm omega)
    : ctx_(std::move(ctx)), omega_(std::move(omega)), volume_(1.0) {
  require_same_context(ctx_, omega_.context(), "ExteriorAlgebra");
  if (!omega_.strictly_positive()) throw NotStrictlyPositive("ExteriorAlgebra: omega must be strictly positive");
  volume_ = volume_coefficient(omega_);
}

Graded to_graded(const Form& f) { return {f.p(), f.q(), f.coeffs()}; }

Form to_form(const ContextPtr& ctx, const Graded& g) {
  const int n = ctx->n();
  if (g.p < 0 || g.q < 0 || g.p > n || g.q > n) return Form(ctx, std::clamp(g.p, 0, n), std::clamp(g.q, 0, n));
  return Form(ctx, g.p, g.q, g.coeffs);
}

CVector ExteriorAlgebra::multiply(const Graded& a, const Graded& b) const {
  return wedge(to_form(ctx_, a), to_form(ctx_, b)).coeffs();
}

CVector ExteriorAlgebra::conjugate(const Graded& a) const { return hodge::conjugate(to_form(ctx_, a)).coeffs(); }

Complex ExteriorAlgebra::integrate(const CVector& top_coeffs) const {
  if (top_coeffs.size() != 1) throw BidegreeError("ExteriorAlgebra::integrate: expected a top-degree form");
  return top_coeffs(0) / volume_;
}

CMatrix ExteriorAlgebra::multiplication_matrix(const Graded& phi, int p, int q) const {
  const Index cols = dim(p, q);
  const int tp = p + phi.p;
  const int tq = q + phi.q;
  if (!in_range(tp, tq)) return CMatrix(0, cols);
  CMatrix m = CMatrix::Zero(ctx_->dim(tp, tq), cols);
  // e_x ^ phi: move dz^{I2} across dzbar^{J1}, then merge both index sets.
  const double cross = ((q * phi.p) & 1) ? -1.0 : 1.0;
  for (Index y = 0; y < phi.coeffs.size(); ++y) {
    const Complex c = phi.coeffs(y);
    if (c == Complex(0.0)) continue;
    const auto [i2, j2] = ctx_->pair_at(phi.p, phi.q, y);
    for (Index x = 0; x < cols; ++x) {
      const auto [i1, j1] = ctx_->pair_at(p, q, x);
      if ((i1 & i2) || (j1 & j2)) continue;
      const double s = cross * merge_sign(i1, i2) * merge_sign(j1, j2);
      m(ctx_->position(i1 | i2, j1 | j2), x) += s * c;
    }
  }
  return m;
}

CMatrix ExteriorAlgebra::conjugation_matrix(int p, int q) const {
  const Index d = dim(p, q);
  CMatrix k = CMatrix::Zero(dim(q, p), d);
  const double s = ((p * q) & 1) ? -1.0 : 1.0;
  for (Index x = 0; x < d; ++x) {
    const auto [i, j] = ctx_->pair_at(p, q, x);
    k(ctx_->position(j, i), x) = s;
  }
  return k;
}

CMatrix ExteriorAlgebra::pairing_matrix(int p, int q) const {
  const int n = ctx_->n();
  const Mask full = (n == 0) ? 0 : ((Mask{1} << n) - 1);
  CMatrix z = CMatrix::Zero(dim(p, q), dim(n - p, n - q));
  const double cross = ((q * (n - p)) & 1) ? -1.0 : 1.0;
  for (Index x = 0; x < z.rows(); ++x) {
    const auto [i, j] = ctx_->pair_at(p, q, x);
    const Mask ic = full & ~i;
    const Mask jc = full & ~j;
    const double s = cross * merge_sign(i, ic) * merge_sign(j, jc);
    z(x, ctx_->position(ic, jc)) = s / volume_;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Pairs

HRPairLocal verify_hr_pair(const Form& nu, const PositiveForm& omega) {
  require_same_context(nu.context(), omega.context(), "verify_hr_pair");
  if (nu.p() != nu.q()) throw BidegreeError("verify_hr_pair: nu must have bidegree (r,r)");
  if (!is_real(nu)) throw ContractViolation("verify_hr_pair: nu is not real");
  auto alg = std::make_shared<const ExteriorAlgebra>(nu.context(), omega);
  auto s = std::make_shared<const HodgeRiemannStructure>(alg, to_graded(nu),
                                                         to_graded(positive_form_to_form(omega)));
  return HRPairLocal(nu, omega, std::move(s));
}

Form product_of_positive(std::span<const PositiveForm> factors, const ContextPtr& ctx) {
  Form acc = Form::scalar(ctx, 1.0);
  for (const auto& f : factors) acc = wedge(acc, positive_form_to_form(f));
  return acc;
}

namespace {

void require_pair_context(const Form& a, const HRPairLocal& pair, const char* what) {
  require_same_context(a.context(), pair.context(), what);
}

}  // namespace

Form lefschetz_L(const Form& a, const PositiveForm& omega) {
  require_same_context(a.context(), omega.context(), "L");
  return wedge(a, positive_form_to_form(omega));
}

Form lefschetz_lambda(const Form& a, const HRPairLocal& pair) {
  require_pair_context(a, pair, "lambda");
  return to_form(pair.context(), pair.structure().lefschetz_lambda(to_graded(a)));
}

Complex hermitian_form(const Form& a, const Form& b, const HRPairLocal& pair, int k) {
  require_pair_context(a, pair, "hermitian_form");
  require_pair_context(b, pair, "hermitian_form");
  return pair.structure().hermitian_form(to_graded(a), to_graded(b), k);
}

CMatrix primitive_subspace(const HRPairLocal& pair, int p, int q) {
  return pair.structure().primitive_basis(p, q);
}

LocalDecomposition decompose(const Form& a, const HRPairLocal& pair) {
  require_pair_context(a, pair, "decompose");
  const auto d = pair.structure().decompose(to_graded(a));
  LocalDecomposition out;
  out.p = d.p;
  out.q = d.q;
  out.side = d.side;
  out.k = d.k;
  out.residual = d.residual;
  for (const auto& c : d.components) out.components.push_back(to_form(pair.context(), c));
  return out;
}

Form reconstruct(const LocalDecomposition& d, const HRPairLocal& pair) {
  PrimitiveDecomposition g;
  g.p = d.p;
  g.q = d.q;
  g.side = d.side;
  g.k = d.k;
  for (const auto& c : d.components) g.components.push_back(to_graded(c));
  return to_form(pair.context(), pair.structure().reconstruct(g));
}

Form hodge_star(const Form& a, const HRPairLocal& pair) {
  require_pair_context(a, pair, "hodge_star");
  return to_form(pair.context(), pair.structure().star(to_graded(a)));
}

double local_metric(const Form& a, const HRPairLocal& pair) {
  require_pair_context(a, pair, "local_metric");
  return std::sqrt(std::max(0.0, pair.structure().metric_squared(to_graded(a))));
}

Complex inner_product(const Form& a, const Form& b, const HRPairLocal& pair) {
  require_pair_context(a, pair, "inner_product");
  require_pair_context(b, pair, "inner_product");
  return pair.structure().inner_product_via_star(to_graded(a), to_graded(b));
}

RescalingReport metric_rescaling_check(const HRPairLocal& pair, double lambda, const Form& a, double rel_tol) {
  if (!(lambda > 0.0)) throw ContractViolation("metric_rescaling_check: lambda must be positive");
  RescalingReport rep;
  rep.lambda = lambda;
  rep.p = a.p();
  rep.q = a.q();
  rep.side = pair.structure().side_of(a.p(), a.q());
  const int n = pair.n();
  const int r = pair.r();

  rep.base_squared = pair.structure().metric_squared(to_graded(a));

  const auto scaled_nu = verify_hr_pair(lambda * pair.nu(), pair.omega());
  const double s1 = scaled_nu.structure().metric_squared(to_graded(a));
  rep.nu_scaling_ratio = s1 / rep.base_squared;
  rep.nu_scaling_expected = rep.side == Side::Low ? lambda : 1.0 / lambda;

  const auto joint = verify_hr_pair(std::pow(lambda, r) * pair.nu(), pair.omega().scaled(lambda));
  const double s2 = joint.structure().metric_squared(to_graded(a));
  rep.joint_scaling_raw_ratio = s2 / rep.base_squared;
  const double volume_ratio = std::pow(lambda, n);
  rep.joint_scaling_ratio = rep.joint_scaling_raw_ratio * volume_ratio;
  rep.joint_scaling_expected = std::pow(lambda, n - a.p() - a.q());

  const double e1 = std::abs(rep.nu_scaling_ratio - rep.nu_scaling_expected) / rep.nu_scaling_expected;
  const double e2 = std::abs(rep.joint_scaling_ratio - rep.joint_scaling_expected) / rep.joint_scaling_expected;
  rep.max_relative_error = std::max(e1, e2);
  rep.pass = std::isfinite(rep.max_relative_error) && rep.max_relative_error <= rel_tol;
  return rep;
}

}  // namespace hodge
