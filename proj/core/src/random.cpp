#include "hodge/random.hpp"

#include <cmath>
#include <numbers>

namespace hodge::rnd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(splitmix64(base ^ splitmix64(stream)) + counter);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

CMatrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMatrix random_unitary(Rng& rng, int n) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

CMatrix random_positive_hermitian(Rng& rng, int n, double conditioning) {
  if (!(conditioning >= 1.0)) throw ContractViolation("random_positive_hermitian: conditioning must be >= 1");
  const CMatrix u = random_unitary(rng, n);
  RVector lambda(n);
  const double log_c = std::log(conditioning);
  for (int i = 0; i < n; ++i) lambda(i) = std::exp(-log_c * rng.uniform());
  CMatrix h = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

PositiveForm random_positive_form(Rng& rng, const ContextPtr& ctx, double conditioning) {
  return PositiveForm(ctx, random_positive_hermitian(rng, ctx->n(), conditioning));
}

PositiveForm gen_positive_form(std::uint64_t seed, const ContextPtr& ctx, double conditioning) {
  Rng rng(seed);
  return random_positive_form(rng, ctx, conditioning);
}

Form random_form(Rng& rng, const ContextPtr& ctx, int p, int q) {
  CVector c(ctx->dim(p, q));
  for (Index i = 0; i < c.size(); ++i) c(i) = rng.complex_normal();
  return Form(ctx, p, q, std::move(c));
}

CVector random_unit_in_span(Rng& rng, const CMatrix& basis) {
  if (basis.cols() == 0) throw ContractViolation("random_unit_in_span: empty basis");
  CVector g(basis.cols());
  for (Index i = 0; i < g.size(); ++i) g(i) = rng.complex_normal();
  g /= g.norm();
  return basis * g;
}

}  // namespace hodge::rnd
