#include <doctest.h>

#include "hodge/lefschetz.hpp"
#include "hodge/random.hpp"
#include "support.hpp"

using namespace hodge;

namespace {

struct Sample {
  ContextPtr ctx;
  PositiveForm omega;
  HRPairLocal pair;
};

Sample random_pair(rnd::Rng& rng, int n, int r) {
  auto ctx = ExteriorContext::make(n);
  const PositiveForm omega = rnd::random_positive_form(rng, ctx, 10.0);
  std::vector<PositiveForm> factors;
  for (int i = 0; i < r; ++i) factors.push_back(rnd::random_positive_form(rng, ctx, 10.0));
  auto pair = verify_hr_pair(product_of_positive(factors, ctx), omega);
  return {ctx, omega, pair};
}

}  // namespace

TEST_CASE("classical pairs verify with positive margins") {
  for (int n = 1; n <= 4; ++n) {
    rnd::Rng rng(100 + static_cast<std::uint64_t>(n));
    auto s = random_pair(rng, n, 0);
    REQUIRE(s.pair.verified());
    CHECK(s.pair.certificate().min_positivity_margin() > 1e-8);
    CHECK_FALSE(s.pair.certificate().first_failure.has_value());
  }
}

TEST_CASE("certificate entries cover every (p,q,k) with p+q+k+r = n") {
  rnd::Rng rng(3);
  auto s = random_pair(rng, 3, 1);
  const auto& c = s.pair.certificate();
  CHECK(c.n == 3);
  CHECK(c.r == 1);
  CHECK(c.entries.size() == 6);  // (0,0),(0,1),(0,2),(1,0),(1,1),(2,0)
  for (const auto& e : c.entries) {
    CHECK(e.p + e.q + e.k + 1 == 3);
    CHECK(e.full);
    CHECK(e.positive);
  }
}

TEST_CASE("a degenerate (1,1)-form fails hard Lefschetz and reports where") {
  auto ctx = ExteriorContext::make(3);
  const int i[] = {0};
  const Form nu = Form::monomial(ctx, i, i, kI);
  const auto pair = verify_hr_pair(nu, PositiveForm::standard(ctx));
  CHECK_FALSE(pair.verified());
  REQUIRE(pair.certificate().first_failure.has_value());
  const auto& e = pair.certificate().entries[*pair.certificate().first_failure];
  CHECK_FALSE(e.full);
  CHECK(e.rank < e.dim);
  CHECK_FALSE(pair.certificate().failure_reason.empty());
  const Form a = Form::scalar(ctx, 1.0);
  CHECK_THROWS_AS(local_metric(a, pair), UnverifiedPair);
}

TEST_CASE("verify rejects non-real or wrongly graded nu") {
  auto ctx = ExteriorContext::make(2);
  const int i[] = {0};
  const int j[] = {1};
  CHECK_THROWS_AS(verify_hr_pair(Form::monomial(ctx, i, j), PositiveForm::standard(ctx)), ContractViolation);
  const int none[] = {0};
  CHECK_THROWS_AS(verify_hr_pair(Form::monomial(ctx, i, std::span<const int>(none, 0)), PositiveForm::standard(ctx)),
                  BidegreeError);
}

TEST_CASE("the (0,0) hermitian form on a curve is the area") {
  auto ctx = ExteriorContext::make(1);
  CMatrix h(1, 1);
  h(0, 0) = 2.5;
  const PositiveForm w(ctx, h);
  const auto pair = verify_hr_pair(Form::scalar(ctx, 1.0), w);
  const Form one = Form::scalar(ctx, 1.0);
  CHECK(hermitian_form(one, one, pair, 1).real() == doctest::Approx(1.0));
  CHECK(local_metric(one, pair) == doctest::Approx(1.0));
}

TEST_CASE("star squares to (-1)^(p+q) and is an isometry") {
  rnd::Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.uniform_int(1, 4);
    const int r = rng.uniform_int(0, n);
    auto s = random_pair(rng, n, r);
    REQUIRE(s.pair.verified());
    const int deg = rng.uniform_int(0, n - r);
    const int p = rng.uniform_int(std::max(0, deg - n), std::min(deg, n));
    const Form a = rnd::random_form(rng, s.ctx, p, deg - p);
    const Form sa = hodge_star(a, s.pair);
    CHECK(sa.p() == n - a.q());
    CHECK(sa.q() == n - a.p());
    const Form ssa = hodge_star(sa, s.pair);
    const double sign = (a.degree() % 2 == 0) ? 1.0 : -1.0;
    CHECK((ssa.coeffs() - sign * a.coeffs()).norm() <= 1e-10 * a.coeffs().norm());
    CHECK(testsupport::rel_err(local_metric(sa, s.pair), local_metric(a, s.pair)) <= 1e-9);
  }
}

TEST_CASE("Lambda and L satisfy the commutator identity on low degrees") {
  rnd::Rng rng(43);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = rng.uniform_int(2, 4);
    const int r = rng.uniform_int(0, n - 2);
    const int deg = rng.uniform_int(0, n - r - 2);
    auto s = random_pair(rng, n, r);
    REQUIRE(s.pair.verified());
    const int p = rng.uniform_int(std::max(0, deg - n), std::min(deg, n));
    const Form a = rnd::random_form(rng, s.ctx, p, deg - p);
    const Form la = lefschetz_lambda(lefschetz_L(a, s.omega), s.pair);
    // Lambda on (0,q) or (p,0) is zero, and so is L Lambda a
    const Form al = (a.p() == 0 || a.q() == 0) ? Form(s.ctx, a.p(), a.q())
                                                : lefschetz_L(lefschetz_lambda(a, s.pair), s.omega);
    const Form comm = la - al;
    const double factor = n - r - a.degree();
    CHECK((comm.coeffs() - factor * a.coeffs()).norm() <= 1e-10 * a.coeffs().norm() * std::max(1.0, factor));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("Lambda kills primitive forms and lowers at the edges") {
  rnd::Rng rng(44);
  auto s = random_pair(rng, 3, 1);
  const CMatrix prim = primitive_subspace(s.pair, 1, 0);
  REQUIRE(prim.cols() > 0);
  const Form a(s.ctx, 1, 0, prim.col(0));
  const Form la = lefschetz_lambda(a, s.pair);
  CHECK(la.p() == 0);
  CHECK(la.q() == 0);
  CHECK(la.coeffs().norm() <= 1e-12);
  CHECK_THROWS_AS(lefschetz_lambda(rnd::random_form(rng, s.ctx, 2, 1), s.pair), DegreeOutOfRange);
}

TEST_CASE("decomposition reconstructs and its pieces are orthogonal") {
  rnd::Rng rng(45);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.uniform_int(1, 4);
    const int r = rng.uniform_int(0, n);
    auto s = random_pair(rng, n, r);
    REQUIRE(s.pair.verified());
    const bool high = rng.uniform_int(0, 1) == 1;
    const int deg = high ? rng.uniform_int(n + r, 2 * n) : rng.uniform_int(0, n - r);
    const int p = rng.uniform_int(std::max(0, deg - n), std::min(deg, n));
    const Form a = rnd::random_form(rng, s.ctx, p, deg - p);
    const auto d = decompose(a, s.pair);
    CHECK(d.side == (deg <= n - r ? Side::Low : Side::High));
    const Form back = reconstruct(d, s.pair);
    CHECK((back.coeffs() - a.coeffs()).norm() <= 1e-9 * a.coeffs().norm());
    CHECK(d.residual <= 1e-9);
    // L^i a_i are mutually orthogonal for the metric inner product
    if (d.side == Side::Low) {
      std::vector<Form> pieces;
      for (std::size_t i = 0; i < d.components.size(); ++i) {
        Form piece = d.components[i];
        for (std::size_t j = 0; j < i; ++j) piece = lefschetz_L(piece, s.omega);
        pieces.push_back(piece);
      }
      for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
          const double scale = local_metric(pieces[i], s.pair) * local_metric(pieces[j], s.pair);
          if (scale == 0.0) continue;
          CHECK(std::abs(inner_product(pieces[i], pieces[j], s.pair)) <= 1e-9 * scale);
        }
    }
  }
}

TEST_CASE("formula metric equals the integral of a wedge star conj a") {
  rnd::Rng rng(46);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.uniform_int(1, 4);
    const int r = rng.uniform_int(0, n);
    auto s = random_pair(rng, n, r);
    const bool high = rng.uniform_int(0, 1) == 1;
    const int deg = high ? rng.uniform_int(n + r, 2 * n) : rng.uniform_int(0, n - r);
    const int p = rng.uniform_int(std::max(0, deg - n), std::min(deg, n));
    const Form a = rnd::random_form(rng, s.ctx, p, deg - p);
    const double m2 = std::pow(local_metric(a, s.pair), 2);
    const Complex ip = inner_product(a, a, s.pair);
    CHECK(std::abs(ip.imag()) <= 1e-9 * m2);
    CHECK(testsupport::rel_err(ip.real(), m2) <= 1e-9);
  }
}

TEST_CASE("classical metric agrees with the pointwise norm") {
  rnd::Rng rng(47);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.uniform_int(1, 4);
    auto s = random_pair(rng, n, 0);
    const int p = rng.uniform_int(0, n);
    const int q = rng.uniform_int(0, n);
    const Form a = rnd::random_form(rng, s.ctx, p, q);
    CHECK(testsupport::rel_err(local_metric(a, s.pair), norm_omega(a, s.omega)) <= 1e-9);
  }
}

TEST_CASE("metric is undefined in the middle band") {
  rnd::Rng rng(48);
  auto s = random_pair(rng, 3, 2);
  CHECK_THROWS_AS(local_metric(rnd::random_form(rng, s.ctx, 1, 1), s.pair), DegreeOutOfRange);
  CHECK_NOTHROW(local_metric(rnd::random_form(rng, s.ctx, 1, 0), s.pair));
  CHECK_NOTHROW(local_metric(rnd::random_form(rng, s.ctx, 3, 2), s.pair));
}

TEST_CASE("rescaling laws hold exactly") {
  rnd::Rng rng(49);
  for (double lambda : {0.5, 2.0, 3.0}) {
    for (int t = 0; t < 10; ++t) {
      const int n = rng.uniform_int(1, 4);
      const int r = rng.uniform_int(0, n);
      auto s = random_pair(rng, n, r);
      const int deg = rng.uniform_int(0, n - r);
      const int p = rng.uniform_int(std::max(0, deg - n), std::min(deg, n));
      const Form a = rnd::random_form(rng, s.ctx, p, deg - p);
      const auto rep = metric_rescaling_check(s.pair, lambda, a);
      CHECK(rep.pass);
      CHECK(rep.max_relative_error <= 1e-10);
      CHECK(rep.joint_scaling_raw_ratio * std::pow(lambda, n) == doctest::Approx(rep.joint_scaling_ratio));
    }
  }
  auto s = random_pair(rng, 2, 1);
  CHECK_THROWS_AS(metric_rescaling_check(s.pair, -1.0, Form::scalar(s.ctx, 1.0)), ContractViolation);
}

TEST_CASE("pointwise norm scales as lambda^{(n-p-q)/2} once weighted by the volume") {
  rnd::Rng rng(50);
  auto ctx = ExteriorContext::make(3);
  const PositiveForm w = rnd::random_positive_form(rng, ctx, 5.0);
  const Form a = rnd::random_form(rng, ctx, 1, 0);
  const double lambda = 2.0;
  // |.|_omega is pointwise; the integral of |a|^2 omega^n/n! carries lambda^n.
  const double base = std::pow(norm_omega(a, w), 2);
  const double scaled = std::pow(norm_omega(a, w.scaled(lambda)), 2) * std::pow(lambda, 3);
  CHECK(scaled / base == doctest::Approx(std::pow(lambda, 3 - 1)).epsilon(1e-12));
}
