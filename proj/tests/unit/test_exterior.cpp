#include <doctest.h>

#include "hodge/exterior.hpp"
#include "hodge/random.hpp"
#include "support.hpp"

using namespace hodge;
using testsupport::binom;

TEST_CASE("component dimensions are products of binomials") {
  for (int n = 0; n <= 5; ++n) {
    auto ctx = ExteriorContext::make(n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) CHECK(ctx->dim(p, q) == static_cast<Index>(binom(n, p) * binom(n, q)));
  }
}

TEST_CASE("position and pair_at are inverse") {
  auto ctx = ExteriorContext::make(4);
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; q <= 4; ++q)
      for (Index x = 0; x < ctx->dim(p, q); ++x) {
        const auto [i, j] = ctx->pair_at(p, q, x);
        CHECK(popcount(i) == p);
        CHECK(popcount(j) == q);
        CHECK(ctx->position(i, j) == x);
      }
}

TEST_CASE("monomial wedge signs match brute-force permutation parity") {
  const int n = 3;
  auto ctx = ExteriorContext::make(n);
  for (int p1 = 0; p1 <= 2; ++p1)
    for (int q1 = 0; q1 <= 2; ++q1)
      for (int p2 = 0; p2 + p1 <= n; ++p2)
        for (int q2 = 0; q2 + q1 <= n; ++q2)
          for (Index x = 0; x < ctx->dim(p1, q1); ++x)
            for (Index y = 0; y < ctx->dim(p2, q2); ++y) {
              const auto [i1, j1] = ctx->pair_at(p1, q1, x);
              const auto [i2, j2] = ctx->pair_at(p2, q2, y);
              CVector a = CVector::Zero(ctx->dim(p1, q1));
              a(x) = 1.0;
              CVector b = CVector::Zero(ctx->dim(p2, q2));
              b(y) = 1.0;
              const Form w = wedge(Form(ctx, p1, q1, a), Form(ctx, p2, q2, b));
              const Complex want = testsupport::monomial_wedge_sign(i1, j1, i2, j2, n);
              CHECK(w.coefficient(i1 | i2, j1 | j2) == want);
              CHECK(w.coeffs().cwiseAbs().sum() == doctest::Approx(std::abs(want)));
            }
}

TEST_CASE("merge_sign of a single swap") {
  CHECK(merge_sign(0b10, 0b01) == -1);
  CHECK(merge_sign(0b01, 0b10) == 1);
  CHECK(merge_sign(0b100, 0b011) == 1);
  CHECK(merge_sign(0b010, 0b101) == -1);
}

TEST_CASE("wedge is graded commutative and associative") {
  rnd::Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(1, 4);
    auto ctx = ExteriorContext::make(n);
    auto pick = [&] {
      const int p = rng.uniform_int(0, n);
      const int q = rng.uniform_int(0, n);
      return rnd::random_form(rng, ctx, p, q);
    };
    const Form a = pick();
    const Form b = pick();
    const Form c = pick();
    if (a.p() + b.p() <= n && a.q() + b.q() <= n) {
      const double sign = ((a.degree() * b.degree()) % 2 == 0) ? 1.0 : -1.0;
      const Form ab = wedge(a, b);
      const Form ba = wedge(b, a);
      CHECK((ab.coeffs() - sign * ba.coeffs()).norm() <= 1e-12 * (1.0 + ab.coeffs().norm()));
    }
    if (a.p() + b.p() + c.p() <= n && a.q() + b.q() + c.q() <= n) {
      const Form l = wedge(wedge(a, b), c);
      const Form r = wedge(a, wedge(b, c));
      CHECK((l.coeffs() - r.coeffs()).norm() <= 1e-12 * (1.0 + l.coeffs().norm()));
    }
  }
}

TEST_CASE("conjugation is an involutive antilinear algebra map") {
  rnd::Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.uniform_int(1, 4);
    auto ctx = ExteriorContext::make(n);
    const Form a = rnd::random_form(rng, ctx, rng.uniform_int(0, n), rng.uniform_int(0, n));
    const Form back = conjugate(conjugate(a));
    CHECK((back.coeffs() - a.coeffs()).norm() <= 1e-14 * (1.0 + a.coeffs().norm()));
    const Form b = rnd::random_form(rng, ctx, rng.uniform_int(0, n - a.p()), rng.uniform_int(0, n - a.q()));
    const Form l = conjugate(wedge(a, b));
    const Form r = wedge(conjugate(a), conjugate(b));
    CHECK((l.coeffs() - r.coeffs()).norm() <= 1e-12 * (1.0 + l.coeffs().norm()));
    const Form s = conjugate(Complex(0.0, 2.0) * a);
    CHECK((s.coeffs() - Complex(0.0, -2.0) * conjugate(a).coeffs()).norm() <= 1e-12 * (1.0 + s.coeffs().norm()));
  }
}

TEST_CASE("conjugate of dz0 dzbar1 is -dz1 dzbar0") {
  auto ctx = ExteriorContext::make(2);
  const int i[] = {0};
  const int j[] = {1};
  const Form a = Form::monomial(ctx, i, j);
  const Form c = conjugate(a);
  CHECK(c.coefficient(0b10, 0b01) == Complex(-1.0));
}

TEST_CASE("positive forms are real and their top power gives the volume coefficient") {
  for (int n = 1; n <= 4; ++n) {
    auto ctx = ExteriorContext::make(n);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const PositiveForm w = rnd::gen_positive_form(seed, ctx, 30.0);
      const Form f = positive_form_to_form(w);
      CHECK(is_real(f));
      const Complex top = power(f, n).coeffs()(0) / testsupport::factorial(n);
      // omega^n/n! = i^n det(H) dz^1 dzbar^1 ... dz^n dzbar^n, reordered into dz^I dzbar^J.
      const double reorder = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      const Complex want = std::pow(kI, n) * reorder * w.hermitian().determinant();
      CHECK(testsupport::rel_err(top, want) <= 1e-12);
      CHECK(testsupport::rel_err(volume_coefficient(w), want) <= 1e-12);
      CHECK(integrate(power(f, n), w).real() == doctest::Approx(testsupport::factorial(n)));
    }
  }
}

TEST_CASE("positive form construction rejects non-Hermitian and indefinite input") {
  auto ctx = ExteriorContext::make(2);
  CMatrix h = CMatrix::Identity(2, 2);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(PositiveForm(ctx, h), ContractViolation);
  CMatrix indefinite = CMatrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(PositiveForm(ctx, indefinite), NotStrictlyPositive);
}

TEST_CASE("compound matrices are multiplicative") {
  rnd::Rng rng(9);
  const CMatrix a = rnd::gaussian_matrix(rng, 4, 3);
  const CMatrix b = rnd::gaussian_matrix(rng, 3, 5);
  for (int k = 0; k <= 3; ++k) {
    const CMatrix l = compound_matrix(a * b, k);
    const CMatrix r = compound_matrix(a, k) * compound_matrix(b, k);
    CHECK((l - r).norm() <= 1e-11 * (1.0 + l.norm()));
  }
  const CMatrix sq = rnd::gaussian_matrix(rng, 3, 3);
  CHECK(testsupport::rel_err(compound_matrix(sq, 3)(0, 0), sq.determinant()) <= 1e-12);
}

TEST_CASE("pullback of positive forms agrees with the form-level pullback") {
  rnd::Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(2, 4);
    const int m = rng.uniform_int(1, n);
    auto v = ExteriorContext::make(n);
    auto w = ExteriorContext::make(m);
    const CMatrix p = rnd::gaussian_matrix(rng, m, n);
    const PositiveForm ow = rnd::random_positive_form(rng, w, 10.0);
    const PositiveForm pulled = pullback(p, ow, v);
    const Form direct = positive_form_to_form(pulled);
    const Form via = pullback_form(positive_form_to_form(ow), p, v);
    CHECK((direct.coeffs() - via.coeffs()).norm() <= 1e-11 * (1.0 + direct.coeffs().norm()));
    CHECK_FALSE(pulled.strictly_positive());
    // pullback commutes with wedge
    const Form a = rnd::random_form(rng, w, rng.uniform_int(0, m), 0);
    const Form b = rnd::random_form(rng, w, 0, rng.uniform_int(0, m));
    const Form l = pullback_form(wedge(a, b), p, v);
    const Form r = wedge(pullback_form(a, p, v), pullback_form(b, p, v));
    CHECK((l.coeffs() - r.coeffs()).norm() <= 1e-10 * (1.0 + l.coeffs().norm()));
  }
}

TEST_CASE("norm for a diagonal omega scales each factor by 1/sqrt(h)") {
  const int n = 3;
  auto ctx = ExteriorContext::make(n);
  CMatrix h = CMatrix::Zero(n, n);
  h.diagonal() << 2.0, 0.5, 3.0;
  const PositiveForm w(ctx, h);
  const int i[] = {0, 2};
  const int j[] = {1};
  const Form a = Form::monomial(ctx, i, j, Complex(1.0, 1.0));
  const double want = std::sqrt(2.0 / (2.0 * 3.0 * 0.5));
  CHECK(norm_omega(a, w) == doctest::Approx(want).epsilon(1e-12));
  CHECK(norm_omega(a, PositiveForm::standard(ctx)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("comparability constant is the top generalized eigenvalue, clamped at 1") {
  auto ctx = ExteriorContext::make(3);
  const PositiveForm w = rnd::gen_positive_form(4, ctx, 5.0);
  const PositiveForm big = w.scaled(7.0);
  const PositiveForm small = w.scaled(0.25);
  std::vector<PositiveForm> forms{big};
  CHECK(comparability_constant(forms, w) == doctest::Approx(7.0));
  std::vector<PositiveForm> tiny{small};
  CHECK(comparability_constant(tiny, w) == 1.0);
  std::vector<PositiveForm> none;
  CHECK(comparability_constant(none, w) == 1.0);
}

TEST_CASE("mismatched contexts are rejected") {
  auto a = ExteriorContext::make(2);
  auto b = ExteriorContext::make(3);
  const Form x = Form::scalar(a, 1.0);
  const Form y = Form::scalar(b, 1.0);
  CHECK_THROWS_AS(wedge(x, y), ContextMismatch);
}

TEST_CASE("wedge beyond the top degree is zero") {
  auto ctx = ExteriorContext::make(2);
  const int i[] = {0, 1};
  const int none[] = {0};
  const Form a = Form::monomial(ctx, i, std::span<const int>(none, 0));
  const int k[] = {1};
  const Form b = Form::monomial(ctx, k, std::span<const int>(none, 0));
  const Form c = wedge(a, b);
  CHECK(c.p() == 2);
  CHECK(c.coeffs().isZero(0.0));
}
