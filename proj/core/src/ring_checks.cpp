#include <algorithm>
#include <cmath>
#include <sstream>

#include "hodge/random.hpp"
#include "hodge/ring.hpp"

namespace hodge {

namespace {

/// Dense scratch vector that remembers which slots were written.
class SparseAccumulator {
 public:
  explicit SparseAccumulator(Index d) : values_(static_cast<std::size_t>(d), 0.0), seen_(static_cast<std::size_t>(d), 0) {}

  void add(Index k, Complex c) {
    auto ku = static_cast<std::size_t>(k);
    if (!seen_[ku]) {
      seen_[ku] = 1;
      touched_.push_back(k);
    }
    values_[ku] += c;
  }
  void add(const std::vector<Term>& ts, Complex scale) {
    for (const auto& t : ts) add(t.k, scale * t.c);
  }
  void subtract(const std::vector<Term>& ts, Complex scale) { add(ts, -scale); }
  void add(const CVector& v, Complex scale) {
    for (Index k = 0; k < v.size(); ++k)
      if (v(k) != Complex(0.0)) add(k, scale * v(k));
  }

  /// Max modulus over touched slots, then reset.
  double take_max() {
    double m = 0.0;
    for (Index k : touched_) {
      auto ku = static_cast<std::size_t>(k);
      m = std::max(m, std::abs(values_[ku]));
      values_[ku] = 0.0;
      seen_[ku] = 0;
    }
    touched_.clear();
    return m;
  }

 private:
  std::vector<Complex> values_;
  std::vector<char> seen_;
  std::vector<Index> touched_;
};

RingCheck make_check(std::string name, double residual, double scale, std::string detail = {}) {
  RingCheck c;
  c.name = std::move(name);
  c.residual = residual / std::max(1.0, scale);
  c.pass = std::isfinite(c.residual) && c.residual <= kRingTolerance;
  c.detail = std::move(detail);
  return c;
}

std::string bidegree_str(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

void require_class_11(const RingElement& c, const RingPtr& ring, const char* what) {
  if (c.ring() != ring) throw ContextMismatch(std::string(what) + ": class from another ring");
  const auto deg = c.bidegree();
  if (!deg || deg->first != 1 || deg->second != 1) throw BidegreeError(std::string(what) + ": classes must have bidegree (1,1)");
  if (!is_real(c)) throw ContractViolation(std::string(what) + ": classes must be real");
}

RingElement product_of(const RingPtr& ring, std::span<const RingElement> factors) {
  RingElement acc = RingElement::unit(ring);
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

}  // namespace

const RingCheck* RingDiagnostics::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

RingDiagnostics ring_validate(const GradedRing& ring) {
  RingDiagnostics diag;
  const Index d = ring.dim();
  const int n = ring.n();
  const auto& basis = ring.basis();
  auto deg = [&](Index i) { return basis[static_cast<std::size_t>(i)].p + basis[static_cast<std::size_t>(i)].q; };

  double scale = 0.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (const auto& t : ring.product_terms(i, j)) scale = std::max(scale, std::abs(t.c));

  // Structure constants must respect the grading.
  {
    double bad = 0.0;
    std::string where;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        for (const auto& t : ring.product_terms(i, j)) {
          const auto& a = basis[static_cast<std::size_t>(i)];
          const auto& b = basis[static_cast<std::size_t>(j)];
          const auto& c = basis[static_cast<std::size_t>(t.k)];
          if (c.p != a.p + b.p || c.q != a.q + b.q) {
            if (std::abs(t.c) > bad) where = a.name + "*" + b.name + " -> " + c.name;
            bad = std::max(bad, std::abs(t.c));
          }
        }
    for (Index i = 0; i < d; ++i)
      for (const auto& t : ring.conj_terms(i)) {
        const auto& a = basis[static_cast<std::size_t>(i)];
        const auto& c = basis[static_cast<std::size_t>(t.k)];
        if (c.p != a.q || c.q != a.p) {
          if (std::abs(t.c) > bad) where = "conj(" + a.name + ") -> " + c.name;
          bad = std::max(bad, std::abs(t.c));
        }
      }
    for (Index i = 0; i < d; ++i) {
      const auto& a = basis[static_cast<std::size_t>(i)];
      const double v = std::abs(ring.integral_functional()(i));
      if ((a.p != n || a.q != n) && v > 0.0) {
        if (v > bad) where = "integral of " + a.name;
        bad = std::max(bad, v);
      }
    }
    diag.checks.push_back(make_check("grading", bad, scale, where));
  }

  SparseAccumulator acc(d);

  {
    const Index u = ring.unit_index();
    double bad = (basis[static_cast<std::size_t>(u)].p == 0 && basis[static_cast<std::size_t>(u)].q == 0) ? 0.0 : 1.0;
    for (Index i = 0; i < d; ++i) {
      acc.add(ring.product_terms(u, i), 1.0);
      acc.add(i, -1.0);
      bad = std::max(bad, acc.take_max());
      acc.add(ring.product_terms(i, u), 1.0);
      acc.add(i, -1.0);
      bad = std::max(bad, acc.take_max());
    }
    diag.checks.push_back(make_check("unit", bad, 1.0));
  }

  {
    double bad = 0.0;
    std::string where;
    for (Index i = 0; i < d; ++i)
      for (Index j = i; j < d; ++j) {
        const double s = ((deg(i) * deg(j)) & 1) ? -1.0 : 1.0;
        acc.add(ring.product_terms(i, j), 1.0);
        acc.subtract(ring.product_terms(j, i), s);
        const double r = acc.take_max();
        if (r > bad) where = basis[static_cast<std::size_t>(i)].name + ", " + basis[static_cast<std::size_t>(j)].name;
        bad = std::max(bad, r);
      }
    diag.checks.push_back(make_check("graded_commutativity", bad, scale, where));
  }

  {
    double bad = 0.0;
    std::string where;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const auto& ij = ring.product_terms(i, j);
        for (Index k = 0; k < d; ++k) {
          const auto& jk = ring.product_terms(j, k);
          if (ij.empty() && jk.empty()) continue;
          for (const auto& t : ij) acc.add(ring.product_terms(t.k, k), t.c);
          for (const auto& t : jk) acc.subtract(ring.product_terms(i, t.k), t.c);
          const double r = acc.take_max();
          if (r > bad)
            where = basis[static_cast<std::size_t>(i)].name + ", " + basis[static_cast<std::size_t>(j)].name + ", " +
                    basis[static_cast<std::size_t>(k)].name;
          bad = std::max(bad, r);
        }
      }
    diag.checks.push_back(make_check("associativity", bad, scale * scale, where));
  }

  {
    double bad = 0.0;
    for (Index i = 0; i < d; ++i) {
      for (const auto& t : ring.conj_terms(i)) acc.add(ring.conj_terms(t.k), std::conj(t.c));
      acc.add(i, -1.0);
      bad = std::max(bad, acc.take_max());
    }
    diag.checks.push_back(make_check("conjugation_involution", bad, 1.0));
  }

  {
    double bad = 0.0;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        for (const auto& t : ring.product_terms(i, j)) acc.add(ring.conj_terms(t.k), std::conj(t.c));
        for (const auto& a : ring.conj_terms(i))
          for (const auto& b : ring.conj_terms(j)) acc.subtract(ring.product_terms(a.k, b.k), a.c * b.c);
        bad = std::max(bad, acc.take_max());
      }
    diag.checks.push_back(make_check("conjugation_multiplicative", bad, scale));
  }

  {
    double bad = 0.0;
    double fscale = 0.0;
    const CVector& f = ring.integral_functional();
    for (Index i = 0; i < d; ++i) {
      fscale = std::max(fscale, std::abs(f(i)));
      Complex c = 0.0;
      for (const auto& t : ring.conj_terms(i)) c += t.c * f(t.k);
      bad = std::max(bad, std::abs(c - std::conj(f(i))));
    }
    diag.checks.push_back(make_check("integral_real", bad, fscale));
  }

  {
    const RingAlgebra alg(std::shared_ptr<const GradedRing>(&ring, [](const GradedRing*) {}));
    double worst = 1.0;
    std::string failed;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        PairingInfo info;
        info.p = p;
        info.q = q;
        info.dim = ring.component_dim(p, q);
        const Index dual = ring.component_dim(n - p, n - q);
        if (info.dim == 0 && dual == 0) {
          info.sigma_ratio = 1.0;
          info.nondegenerate = true;
        } else if (info.dim != dual) {
          info.sigma_ratio = 0.0;
        } else {
          const auto svd = num::svd_summary(alg.pairing_matrix(p, q));
          const double smax = svd.singular_values(0);
          info.sigma_ratio = smax > 0.0 ? svd.singular_values(svd.singular_values.size() - 1) / smax : 0.0;
          info.nondegenerate = info.sigma_ratio > kRingTolerance;
        }
        if (!info.nondegenerate) failed += (failed.empty() ? "" : " ") + bidegree_str(p, q);
        worst = std::min(worst, info.sigma_ratio);
        diag.pairing.push_back(info);
      }
    RingCheck c;
    c.name = "poincare_pairing";
    c.residual = 1.0 - worst;
    c.pass = failed.empty();
    std::ostringstream s;
    s << "min sigma ratio " << worst;
    if (!failed.empty()) s << "; degenerate at " << failed;
    c.detail = s.str();
    diag.checks.push_back(c);
  }

  diag.pass = std::all_of(diag.checks.begin(), diag.checks.end(), [](const RingCheck& c) { return c.pass; });
  return diag;
}

// ---------------------------------------------------------------------------
// Projective bundle diagnostics

double grothendieck_residual(const ProjectiveBundle& b) {
  const RingElement w = b.w();
  RingElement sum = power(w, b.rank);
  double scale = sum.coeffs().norm();
  for (int j = 1; j <= b.rank; ++j) {
    const RingElement term = b.pullback(b.chern[static_cast<std::size_t>(j - 1)]) * power(w, b.rank - j);
    scale = std::max(scale, term.coeffs().norm());
    sum += ((j % 2 == 0) ? 1.0 : -1.0) * term;
  }
  return scale > 0.0 ? sum.coeffs().norm() / scale : 0.0;
}

double integral_consistency_residual(const ProjectiveBundle& b) {
  const RingPtr& base = b.base;
  const int e = b.rank;
  const int n = base->n();
  // s_j: coefficient of w^{e-1} after reducing w^{e-1+j}
  std::vector<RingElement> s{RingElement::unit(base)};
  for (int j = 1; j <= n; ++j) {
    RingElement sj = RingElement::zero(base);
    for (int i = 1; i <= std::min(j, e); ++i)
      sj += ((i % 2 == 1) ? 1.0 : -1.0) * (b.chern[static_cast<std::size_t>(i - 1)] * s[static_cast<std::size_t>(j - i)]);
    s.push_back(sj);
  }
  const RingElement w = b.w();
  double worst = 0.0;
  for (Index i = 0; i < base->dim(); ++i) {
    const RingElement a = RingElement::basis(base, i);
    for (int j = 0; j <= n; ++j) {
      const Complex lhs = integral(b.pullback(a) * power(w, e - 1 + j));
      const Complex rhs = integral(a * s[static_cast<std::size_t>(j)]);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Kernel containment and top Chern class checks

ContainmentReport theorem2_check(const RingPtr& y, std::span<const RingElement> pulled_back,
                                 std::span<const RingElement> own, int p, int q) {
  const std::string& kind = y->provenance().kind;
  if (kind != "kunneth" && kind != "projbundle")
    throw RefusedPrecondition("theorem2_check: ring of kind '" + kind +
                              "' is not known to be a free module over a base ring; only Kunneth products and "
                              "projective bundles are accepted");
  for (const auto& c : pulled_back) require_class_11(c, y, "theorem2_check");
  for (const auto& c : own) require_class_11(c, y, "theorem2_check");
  ContainmentReport rep;
  rep.p = p;
  rep.q = q;
  rep.s = static_cast<int>(pulled_back.size());
  rep.r = rep.s + static_cast<int>(own.size());
  if (p < 0 || q < 0 || p + q + rep.r != y->n())
    throw BidegreeError("theorem2_check: need p+q+r = n (p=" + std::to_string(p) + ", q=" + std::to_string(q) +
                        ", r=" + std::to_string(rep.r) + ", n=" + std::to_string(y->n()) + ")");
  const RingElement v = product_of(y, pulled_back);
  const RingElement u = v * product_of(y, own);
  const RingAlgebra alg(y);
  const CMatrix ku = num::nullspace(alg.multiplication_matrix(to_graded(u, rep.r, rep.r), p, q));
  const CMatrix kv = num::nullspace(alg.multiplication_matrix(to_graded(v, rep.s, rep.s), p, q));
  rep.dim = y->component_dim(p, q);
  rep.kernel_u_dim = ku.cols();
  rep.kernel_v_dim = kv.cols();
  rep.angle = std::asin(std::clamp(num::subspace_excess(ku, kv), 0.0, 1.0));
  rep.contained = rep.angle <= kContainmentAngle;
  return rep;
}

TopChernReport theorem3_check(const RingPtr& x, const std::vector<RingElement>& chern,
                              std::span<const RingElement> classes, int p, int q, std::uint64_t seed, int samples) {
  TopChernReport rep;
  rep.p = p;
  rep.q = q;
  rep.e = static_cast<int>(chern.size());
  rep.k = static_cast<int>(classes.size());
  if (rep.e < 1) throw BidegreeError("theorem3_check: at least one Chern class is required");
  if (p < 0 || q < 0 || p + q + rep.e + rep.k != x->n())
    throw BidegreeError("theorem3_check: need p+q+e+k = n");
  for (const auto& c : classes) require_class_11(c, x, "theorem3_check");

  const ProjectiveBundle bundle = projective_bundle_ring(x, chern, rep.e);
  rep.grothendieck_residual = grothendieck_residual(bundle);
  rep.integral_residual = integral_consistency_residual(bundle);

  const RingElement w = bundle.w();
  const RingElement wx = product_of(x, classes);
  RingElement wy = RingElement::unit(bundle.ring);
  for (const auto& c : classes) wy = wy * bundle.pullback(c);
  RingElement gamma = RingElement::zero(bundle.ring);
  for (int j = 0; j < rep.e; ++j) {
    const RingElement cj = j == 0 ? RingElement::unit(x) : chern[static_cast<std::size_t>(j - 1)];
    const double sign = ((rep.e - 1 - j) % 2 == 0) ? 1.0 : -1.0;
    gamma += sign * (bundle.pullback(cj) * power(w, rep.e - 1 - j));
  }
  const RingElement& ce = chern.back();
  const RingElement cew = ce * wx;

  double scale = ce.coeffs().norm();
  for (const auto& c : classes) scale *= c.coeffs().norm();
  rnd::Rng rng(seed);
  const Index dpq = x->component_dim(p, q);
  rep.samples = dpq == 0 ? 0 : samples;
  for (int t = 0; t < rep.samples; ++t) {
    CVector local(dpq);
    for (Index i = 0; i < dpq; ++i) local(i) = rng.complex_normal();
    const RingElement a = RingElement::from_component(x, p, q, local);
    const RingElement lhs = (bundle.pullback(a) * gamma) * w * wy;
    const RingElement rhs = bundle.pullback(a * cew);
    const double denom = std::max(local.norm() * scale, 1e-300);
    rep.identity_residual = std::max(rep.identity_residual, (lhs - rhs).coeffs().norm() / denom);
  }

  const RingAlgebra alg(x);
  const CMatrix m = alg.multiplication_matrix(to_graded(cew, rep.e + rep.k, rep.e + rep.k), p, q);
  rep.dim = dpq;
  if (dpq == 0) {
    rep.rank = 0;
    rep.full_rank = true;
    rep.sigma_ratio = 1.0;
  } else {
    const auto svd = num::svd_summary(m);
    rep.rank = svd.rank;
    rep.full_rank = svd.rank == dpq && m.rows() == dpq;
    const double smax = svd.singular_values.size() ? svd.singular_values(0) : 0.0;
    rep.sigma_ratio = smax > 0.0 ? svd.singular_values(svd.singular_values.size() - 1) / smax : 0.0;
  }
  rep.pass = rep.grothendieck_residual <= kRingTolerance && rep.integral_residual <= kRingTolerance &&
             rep.identity_residual <= kRingTolerance;
  return rep;
}

PointwiseReport pointwise_zero_check(const TorusRing& torus, const RingElement& a, std::span<const RingElement> classes) {
  if (a.ring() != torus.ring()) throw ContextMismatch("pointwise_zero_check: element of another ring");
  PointwiseReport rep;
  if (a.is_zero()) {
    rep.verdict = PointwiseVerdict::Holds;
    return rep;
  }
  RingElement prod = a;
  double scale = a.coeffs().norm();
  for (const auto& c : classes) {
    if (c.ring() != torus.ring()) throw ContextMismatch("pointwise_zero_check: class of another ring");
    prod = prod * c;
    scale *= c.coeffs().norm();
  }
  rep.product_residual = scale > 0.0 ? prod.coeffs().norm() / scale : 0.0;
  rep.verdict = rep.product_residual <= kRingTolerance ? PointwiseVerdict::Holds : PointwiseVerdict::NotApplicable;
  return rep;
}

}  // namespace hodge
