#include "hodge/ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hodge/lefschetz.hpp"

namespace hodge {

namespace {

const std::vector<Index> kEmptyComponent;

int total_degree(const BasisElement& b) { return b.p + b.q; }

void accumulate(CVector& out, const std::vector<Term>& terms, Complex scale) {
  for (const auto& t : terms) out(t.k) += scale * t.c;
}

/// Drop exact zeros and merge repeated targets.
std::vector<Term> compress(const CVector& v) {
  std::vector<Term> out;
  for (Index k = 0; k < v.size(); ++k)
    if (v(k) != Complex(0.0)) out.push_back({k, v(k)});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// GradedRing

GradedRing::GradedRing(int n, std::vector<BasisElement> basis, std::vector<std::vector<Term>> mult,
                       std::vector<std::vector<Term>> conj, CVector integral, Index unit, RingProvenance provenance)
    : n_(n),
      basis_(std::move(basis)),
      mult_(std::move(mult)),
      conj_(std::move(conj)),
      integral_(std::move(integral)),
      unit_(unit),
      provenance_(std::move(provenance)) {
  const Index d = dim();
  if (n_ < 0) throw ContractViolation("GradedRing: n must be nonnegative");
  if (d == 0) throw ContractViolation("GradedRing: empty basis");
  if (static_cast<Index>(mult_.size()) != d * d) throw ContractViolation("GradedRing: mult table must have dim^2 entries");
  if (static_cast<Index>(conj_.size()) != d) throw ContractViolation("GradedRing: conj table must have dim entries");
  if (integral_.size() != d) throw ContractViolation("GradedRing: integral must have dim entries");
  if (unit_ < 0 || unit_ >= d) throw ContractViolation("GradedRing: unit index out of range");
  for (const auto& b : basis_)
    if (b.p < 0 || b.q < 0 || b.p > n_ || b.q > n_)
      throw ContractViolation("GradedRing: basis element '" + b.name + "' has bidegree outside 0..n");
  auto check_terms = [d](const std::vector<Term>& ts) {
    for (const auto& t : ts)
      if (t.k < 0 || t.k >= d) throw ContractViolation("GradedRing: structure constant target out of range");
  };
  for (const auto& ts : mult_) check_terms(ts);
  for (const auto& ts : conj_) check_terms(ts);
  for (const auto& gen : {provenance_.generators, provenance_.base_generators})
    for (Index g : gen)
      if (g < 0 || g >= d) throw ContractViolation("GradedRing: generator index out of range");

  components_.assign(static_cast<std::size_t>((n_ + 1) * (n_ + 1)), {});
  local_.resize(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    auto& comp = components_[static_cast<std::size_t>(basis_[i].p * (n_ + 1) + basis_[i].q)];
    local_[static_cast<std::size_t>(i)] = static_cast<Index>(comp.size());
    comp.push_back(i);
  }
}

const std::vector<Index>& GradedRing::component(int p, int q) const {
  if (p < 0 || q < 0 || p > n_ || q > n_) return kEmptyComponent;
  return components_[static_cast<std::size_t>(p * (n_ + 1) + q)];
}

CVector GradedRing::multiply(const CVector& a, const CVector& b) const {
  const Index d = dim();
  if (a.size() != d || b.size() != d) throw ContractViolation("GradedRing::multiply: length mismatch");
  CVector out = CVector::Zero(d);
  for (Index i = 0; i < d; ++i) {
    if (a(i) == Complex(0.0)) continue;
    for (Index j = 0; j < d; ++j) {
      if (b(j) == Complex(0.0)) continue;
      accumulate(out, product_terms(i, j), a(i) * b(j));
    }
  }
  return out;
}

CVector GradedRing::conjugate(const CVector& a) const {
  const Index d = dim();
  if (a.size() != d) throw ContractViolation("GradedRing::conjugate: length mismatch");
  CVector out = CVector::Zero(d);
  for (Index i = 0; i < d; ++i)
    if (a(i) != Complex(0.0)) accumulate(out, conj_terms(i), std::conj(a(i)));
  return out;
}

// ---------------------------------------------------------------------------
// RingElement

RingElement::RingElement(RingPtr ring, CVector coeffs) : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  if (!ring_) throw ContractViolation("RingElement: null ring");
  if (coeffs_.size() != ring_->dim()) throw ContractViolation("RingElement: coefficient length does not match the ring");
}

RingElement RingElement::zero(RingPtr ring) {
  const Index d = ring->dim();
  return {std::move(ring), CVector::Zero(d)};
}

RingElement RingElement::unit(RingPtr ring) {
  const Index u = ring->unit_index();
  return basis(std::move(ring), u);
}

RingElement RingElement::basis(RingPtr ring, Index i, Complex c) {
  RingElement e = zero(std::move(ring));
  if (i < 0 || i >= e.coeffs_.size()) throw ContractViolation("RingElement::basis: index out of range");
  e.coeffs_(i) = c;
  return e;
}

RingElement RingElement::from_component(RingPtr ring, int p, int q, const CVector& local) {
  const auto& comp = ring->component(p, q);
  if (static_cast<Index>(comp.size()) != local.size())
    throw BidegreeError("RingElement::from_component: coefficient count does not match the component");
  RingElement e = zero(std::move(ring));
  for (std::size_t i = 0; i < comp.size(); ++i) e.coeffs_(comp[i]) = local(static_cast<Index>(i));
  return e;
}

std::optional<std::pair<int, int>> RingElement::bidegree(double rel_tol) const {
  const double cut = rel_tol * coeffs_.cwiseAbs().maxCoeff();
  std::optional<std::pair<int, int>> deg;
  for (Index i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_(i)) <= cut) continue;
    const auto& b = ring_->element(i);
    if (!deg) deg = std::pair{b.p, b.q};
    else if (deg->first != b.p || deg->second != b.q) return std::nullopt;
  }
  return deg;
}

CVector RingElement::component(int p, int q) const {
  const auto& comp = ring_->component(p, q);
  CVector out(static_cast<Index>(comp.size()));
  for (std::size_t i = 0; i < comp.size(); ++i) out(static_cast<Index>(i)) = coeffs_(comp[i]);
  return out;
}

void RingElement::require_same_ring(const RingElement& o) const {
  if (ring_ != o.ring_) throw ContextMismatch("ring elements belong to different rings");
}

RingElement& RingElement::operator+=(const RingElement& o) {
  require_same_ring(o);
  coeffs_ += o.coeffs_;
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) {
  require_same_ring(o);
  coeffs_ -= o.coeffs_;
  return *this;
}

RingElement& RingElement::operator*=(Complex c) {
  coeffs_ *= c;
  return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  a.require_same_ring(b);
  return {a.ring_, a.ring_->multiply(a.coeffs_, b.coeffs_)};
}

RingElement conjugate(const RingElement& a) { return {a.ring(), a.ring()->conjugate(a.coeffs())}; }

Complex integral(const RingElement& a) { return a.ring()->integrate(a.coeffs()); }

bool is_real(const RingElement& a, double rel_tol) {
  return (conjugate(a).coeffs() - a.coeffs()).norm() <= rel_tol * a.coeffs().norm();
}

RingElement power(const RingElement& a, int k) {
  if (k < 0) throw ContractViolation("power: negative exponent");
  RingElement acc = RingElement::unit(a.ring());
  for (int i = 0; i < k; ++i) acc = acc * a;
  return acc;
}

Graded to_graded(const RingElement& a) {
  const auto deg = a.bidegree();
  if (!deg) throw BidegreeError(a.is_zero() ? "zero ring element has no bidegree" : "ring element is not homogeneous");
  return to_graded(a, deg->first, deg->second);
}

Graded to_graded(const RingElement& a, int p, int q) {
  const auto deg = a.bidegree();
  if (deg && (deg->first != p || deg->second != q)) throw BidegreeError("ring element does not live in the requested bidegree");
  if (!deg && !a.is_zero()) throw BidegreeError("ring element is not homogeneous");
  return {p, q, a.component(p, q)};
}

RingElement from_graded(const RingPtr& ring, const Graded& g) {
  if (g.coeffs.size() == 0) return RingElement::zero(ring);
  return RingElement::from_component(ring, g.p, g.q, g.coeffs);
}

// ---------------------------------------------------------------------------
// Constructors

RingPtr point_ring() {
  RingProvenance prov;
  prov.kind = "point";
  return std::make_shared<const GradedRing>(0, std::vector<BasisElement>{{"1", 0, 0}},
                                            std::vector<std::vector<Term>>{{{0, 1.0}}},
                                            std::vector<std::vector<Term>>{{{0, 1.0}}}, CVector::Ones(1), 0,
                                            std::move(prov));
}

RingPtr projective_space_ring(int k) {
  if (k < 0) throw ContractViolation("projective_space_ring: k must be nonnegative");
  const Index d = k + 1;
  std::vector<BasisElement> basis;
  for (int j = 0; j <= k; ++j) basis.push_back({j == 0 ? "1" : "h^" + std::to_string(j), j, j});
  std::vector<std::vector<Term>> mult(static_cast<std::size_t>(d * d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (i + j <= k) mult[static_cast<std::size_t>(i * d + j)].push_back({i + j, 1.0});
  std::vector<std::vector<Term>> conj;
  for (Index i = 0; i < d; ++i) conj.push_back({{i, 1.0}});
  CVector integral = CVector::Zero(d);
  integral(k) = 1.0;
  RingProvenance prov;
  prov.kind = "projective_space";
  return std::make_shared<const GradedRing>(k, std::move(basis), std::move(mult), std::move(conj), std::move(integral), 0,
                                            std::move(prov));
}

namespace {

std::string index_list(Mask m, const char* prefix) {
  std::string s;
  for (int i : indices_of(m)) s += std::string(prefix) + std::to_string(i);
  return s;
}

std::string torus_name(Mask i, Mask j) {
  if (i == 0 && j == 0) return "1";
  return index_list(i, "dz") + index_list(j, "dzb");
}

}  // namespace

TorusRing::TorusRing(int n, const PositiveForm& omega0)
    : ctx_(omega0.context()), omega0_(omega0), offset_(static_cast<std::size_t>((n + 1) * (n + 1)), 0) {
  if (ctx_->n() != n) throw ContextMismatch("torus_ring: omega0 lives on a space of different dimension");
  if (!omega0.strictly_positive()) throw NotStrictlyPositive("torus_ring: omega0 must be strictly positive");

  std::vector<BasisElement> basis;
  std::vector<std::pair<Mask, Mask>> pairs;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      offset_[static_cast<std::size_t>(p * (n + 1) + q)] = static_cast<Index>(basis.size());
      for (Index pos = 0; pos < ctx_->dim(p, q); ++pos) {
        const auto [i, j] = ctx_->pair_at(p, q, pos);
        basis.push_back({torus_name(i, j), p, q});
        pairs.emplace_back(i, j);
      }
    }
  const Index d = static_cast<Index>(basis.size());
  auto global = [&](Mask i, Mask j) {
    return offset_[static_cast<std::size_t>(popcount(i) * (n + 1) + popcount(j))] + ctx_->position(i, j);
  };

  std::vector<std::vector<Term>> mult(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d; ++a) {
    const auto [i1, j1] = pairs[static_cast<std::size_t>(a)];
    for (Index b = 0; b < d; ++b) {
      const auto [i2, j2] = pairs[static_cast<std::size_t>(b)];
      if ((i1 & i2) || (j1 & j2)) continue;
      const int cross = (popcount(j1) * popcount(i2)) & 1;
      const double s = (cross ? -1.0 : 1.0) * merge_sign(i1, i2) * merge_sign(j1, j2);
      mult[static_cast<std::size_t>(a * d + b)].push_back({global(i1 | i2, j1 | j2), s});
    }
  }
  std::vector<std::vector<Term>> conj(static_cast<std::size_t>(d));
  for (Index a = 0; a < d; ++a) {
    const auto [i, j] = pairs[static_cast<std::size_t>(a)];
    const double s = ((popcount(i) * popcount(j)) & 1) ? -1.0 : 1.0;
    conj[static_cast<std::size_t>(a)].push_back({global(j, i), s});
  }
  CVector integral = CVector::Zero(d);
  integral(d - 1) = 1.0 / volume_coefficient(omega0);

  RingProvenance prov;
  prov.kind = "torus";
  for (int j = 0; j < n; ++j) prov.generators.push_back(global(Mask{1} << j, 0));
  ring_ = std::make_shared<const GradedRing>(n, std::move(basis), std::move(mult), std::move(conj), std::move(integral),
                                             0, std::move(prov));
}

RingElement TorusRing::from_form(const Form& f) const {
  require_same_context(f.context(), ctx_, "TorusRing::from_form");
  return RingElement::from_component(ring_, f.p(), f.q(), f.coeffs());
}

Form TorusRing::to_form(const RingElement& a, int p, int q) const {
  if (a.ring() != ring_) throw ContextMismatch("TorusRing::to_form: element of another ring");
  const Graded g = to_graded(a, p, q);
  return Form(ctx_, p, q, g.coeffs);
}

Form TorusRing::to_form(const RingElement& a) const {
  const auto deg = a.bidegree();
  if (!deg) throw BidegreeError("TorusRing::to_form: element is zero or not homogeneous; pass the bidegree");
  return to_form(a, deg->first, deg->second);
}

TorusRing torus_ring(int n, const PositiveForm& omega0) { return TorusRing(n, omega0); }

// ---------------------------------------------------------------------------
// Kunneth

RingElement KunnethProduct::tensor(const RingElement& a, const RingElement& b) const {
  if (a.ring() != first || b.ring() != second) throw ContextMismatch("KunnethProduct::tensor: factor ring mismatch");
  const Index d2 = second->dim();
  CVector c = CVector::Zero(ring->dim());
  for (Index i = 0; i < first->dim(); ++i)
    for (Index j = 0; j < d2; ++j) c(i * d2 + j) = a.coeffs()(i) * b.coeffs()(j);
  return {ring, std::move(c)};
}

RingElement KunnethProduct::embed_first(const RingElement& a) const { return tensor(a, RingElement::unit(second)); }
RingElement KunnethProduct::embed_second(const RingElement& b) const { return tensor(RingElement::unit(first), b); }

KunnethProduct kunneth_product(const RingPtr& first, const RingPtr& second) {
  if (!first || !second) throw ContractViolation("kunneth_product: null ring");
  const Index d1 = first->dim();
  const Index d2 = second->dim();
  const Index d = d1 * d2;
  std::vector<BasisElement> basis;
  basis.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d2; ++j) {
      const auto& a = first->element(i);
      const auto& b = second->element(j);
      basis.push_back({a.name + "|" + b.name, a.p + b.p, a.q + b.q});
    }
  std::vector<std::vector<Term>> mult(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d2; ++b)
      for (Index c = 0; c < d1; ++c)
        for (Index e = 0; e < d2; ++e) {
          const auto& ac = first->product_terms(a, c);
          const auto& be = second->product_terms(b, e);
          if (ac.empty() || be.empty()) continue;
          const int koszul = (total_degree(second->element(b)) * total_degree(first->element(c))) & 1;
          const double s = koszul ? -1.0 : 1.0;
          CVector acc = CVector::Zero(d);
          for (const auto& t1 : ac)
            for (const auto& t2 : be) acc(t1.k * d2 + t2.k) += s * t1.c * t2.c;
          mult[static_cast<std::size_t>((a * d2 + b) * d + (c * d2 + e))] = compress(acc);
        }
  std::vector<std::vector<Term>> conj(static_cast<std::size_t>(d));
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d2; ++b) {
      auto& out = conj[static_cast<std::size_t>(a * d2 + b)];
      for (const auto& t1 : first->conj_terms(a))
        for (const auto& t2 : second->conj_terms(b)) out.push_back({t1.k * d2 + t2.k, t1.c * t2.c});
    }
  CVector integral(d);
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d2; ++b) integral(a * d2 + b) = first->integral_functional()(a) * second->integral_functional()(b);

  RingProvenance prov;
  prov.kind = "kunneth";
  const Index u1 = first->unit_index();
  const Index u2 = second->unit_index();
  for (Index g : first->provenance().generators) {
    prov.generators.push_back(g * d2 + u2);
    prov.base_generators.push_back(g * d2 + u2);
  }
  for (Index g : second->provenance().generators) prov.generators.push_back(u1 * d2 + g);

  KunnethProduct out{std::make_shared<const GradedRing>(first->n() + second->n(), std::move(basis), std::move(mult),
                                                        std::move(conj), std::move(integral), u1 * d2 + u2,
                                                        std::move(prov)),
                     first, second};
  return out;
}

// ---------------------------------------------------------------------------
// Projective bundles

RingElement ProjectiveBundle::pullback(const RingElement& a) const {
  if (a.ring() != base) throw ContextMismatch("ProjectiveBundle::pullback: element of another ring");
  CVector c = CVector::Zero(ring->dim());
  c.head(base->dim()) = a.coeffs();
  return {ring, std::move(c)};
}

RingElement ProjectiveBundle::w() const {
  if (rank == 1) return pullback(chern.front());  // the relation reads w = c_1
  return RingElement::basis(ring, base->dim() + base->unit_index());
}

ProjectiveBundle projective_bundle_ring(const RingPtr& base, const std::vector<RingElement>& chern, int e) {
  if (!base) throw ContractViolation("projective_bundle_ring: null base");
  if (e < 1) throw ContractViolation("projective_bundle_ring: rank must be positive");
  if (static_cast<int>(chern.size()) != e)
    throw BidegreeError("projective_bundle_ring: expected " + std::to_string(e) + " Chern classes, got " +
                        std::to_string(chern.size()));
  for (int i = 0; i < e; ++i) {
    const auto& c = chern[static_cast<std::size_t>(i)];
    if (c.ring() != base) throw ContextMismatch("projective_bundle_ring: Chern class from another ring");
    if (c.is_zero()) continue;
    const auto deg = c.bidegree();
    if (!deg || deg->first != i + 1 || deg->second != i + 1)
      throw BidegreeError("projective_bundle_ring: c_" + std::to_string(i + 1) + " must have bidegree (" +
                          std::to_string(i + 1) + "," + std::to_string(i + 1) + ")");
    if (!is_real(c)) throw ContractViolation("projective_bundle_ring: c_" + std::to_string(i + 1) + " is not real");
  }

  const Index db = base->dim();
  const Index d = db * e;
  // reduce[J][i]: base coefficient vector of w^i in w^J, for J < 2e-1.
  const int jmax = 2 * e - 1;
  std::vector<std::vector<CVector>> reduce(static_cast<std::size_t>(jmax),
                                           std::vector<CVector>(static_cast<std::size_t>(e), CVector::Zero(db)));
  const CVector one = RingElement::unit(base).coeffs();
  for (int j = 0; j < std::min(e, jmax); ++j) reduce[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = one;
  for (int j = e; j < jmax; ++j) {
    const auto& prev = reduce[static_cast<std::size_t>(j - 1)];
    auto& cur = reduce[static_cast<std::size_t>(j)];
    // w * sum_i prev[i] w^i; the w^e term expands through the relation.
    for (int i = 0; i + 1 < e; ++i) cur[static_cast<std::size_t>(i + 1)] += prev[static_cast<std::size_t>(i)];
    const CVector& top = prev[static_cast<std::size_t>(e - 1)];
    for (int t = 1; t <= e; ++t) {
      const double sign = (t % 2 == 1) ? 1.0 : -1.0;
      cur[static_cast<std::size_t>(e - t)] += sign * base->multiply(top, chern[static_cast<std::size_t>(t - 1)].coeffs());
    }
  }

  std::vector<BasisElement> basis;
  for (int j = 0; j < e; ++j)
    for (Index b = 0; b < db; ++b) {
      const auto& be = base->element(b);
      std::string name = be.name;
      if (j > 0) name = (be.name == "1" ? "" : be.name + "*") + (j == 1 ? "w" : "w^" + std::to_string(j));
      basis.push_back({name, be.p + j, be.q + j});
    }

  std::vector<std::vector<Term>> mult(static_cast<std::size_t>(d * d));
  for (int j1 = 0; j1 < e; ++j1)
    for (Index b1 = 0; b1 < db; ++b1)
      for (int j2 = 0; j2 < e; ++j2)
        for (Index b2 = 0; b2 < db; ++b2) {
          const auto& bb = base->product_terms(b1, b2);
          if (bb.empty()) continue;
          CVector prod = CVector::Zero(db);
          accumulate(prod, bb, 1.0);
          CVector acc = CVector::Zero(d);
          const auto& red = reduce[static_cast<std::size_t>(j1 + j2)];
          for (int i = 0; i < e; ++i) {
            if (red[static_cast<std::size_t>(i)].isZero(0.0)) continue;
            acc.segment(i * db, db) += base->multiply(prod, red[static_cast<std::size_t>(i)]);
          }
          mult[static_cast<std::size_t>((j1 * db + b1) * d + (j2 * db + b2))] = compress(acc);
        }
  std::vector<std::vector<Term>> conj(static_cast<std::size_t>(d));
  for (int j = 0; j < e; ++j)
    for (Index b = 0; b < db; ++b)
      for (const auto& t : base->conj_terms(b)) conj[static_cast<std::size_t>(j * db + b)].push_back({j * db + t.k, t.c});
  CVector integral = CVector::Zero(d);
  integral.segment((e - 1) * db, db) = base->integral_functional();

  RingProvenance prov;
  prov.kind = "projbundle";
  prov.generators = base->provenance().generators;
  prov.base_generators = base->provenance().generators;
  if (e > 1) prov.fiber_class = db + base->unit_index();

  ProjectiveBundle out{std::make_shared<const GradedRing>(base->n() + e - 1, std::move(basis), std::move(mult),
                                                          std::move(conj), std::move(integral), base->unit_index(),
                                                          std::move(prov)),
                       base, e, chern};
  return out;
}

std::vector<RingElement> chern_from_roots(std::span<const RingElement> roots) {
  if (roots.empty()) return {};
  const RingPtr& ring = roots.front().ring();
  // elementary symmetric polynomials by the usual one-root-at-a-time update
  std::vector<RingElement> e(roots.size() + 1, RingElement::zero(ring));
  e[0] = RingElement::unit(ring);
  for (std::size_t t = 0; t < roots.size(); ++t)
    for (std::size_t j = t + 1; j >= 1; --j) e[j] += e[j - 1] * roots[t];
  return {e.begin() + 1, e.end()};
}

RingElement positive_class(const RingPtr& ring, std::span<const Index> generators, const CMatrix& h) {
  const auto m = static_cast<Index>(generators.size());
  if (h.rows() != m || h.cols() != m) throw ContractViolation("positive_class: H must be square of generator count");
  RingElement acc = RingElement::zero(ring);
  for (Index j = 0; j < m; ++j) {
    const RingElement xj = RingElement::basis(ring, generators[static_cast<std::size_t>(j)]);
    for (Index k = 0; k < m; ++k) {
      if (h(j, k) == Complex(0.0)) continue;
      const RingElement xk = RingElement::basis(ring, generators[static_cast<std::size_t>(k)]);
      acc += (kI * h(j, k)) * (xj * conjugate(xk));
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// RingAlgebra

CVector RingAlgebra::multiply(const Graded& a, const Graded& b) const {
  const RingElement x = from_graded(ring_, a);
  const RingElement y = from_graded(ring_, b);
  return (x * y).component(a.p + b.p, a.q + b.q);
}

CVector RingAlgebra::conjugate(const Graded& a) const {
  return hodge::conjugate(from_graded(ring_, a)).component(a.q, a.p);
}

Complex RingAlgebra::integrate(const CVector& top_coeffs) const {
  const auto& comp = ring_->component(ring_->n(), ring_->n());
  if (static_cast<Index>(comp.size()) != top_coeffs.size())
    throw BidegreeError("RingAlgebra::integrate: expected a top-degree element");
  Complex s = 0.0;
  for (std::size_t i = 0; i < comp.size(); ++i)
    s += ring_->integral_functional()(comp[i]) * top_coeffs(static_cast<Index>(i));
  return s;
}

CMatrix RingAlgebra::multiplication_matrix(const Graded& phi, int p, int q) const {
  const auto& src = ring_->component(p, q);
  const auto& fac = ring_->component(phi.p, phi.q);
  const Index cols = static_cast<Index>(src.size());
  if (!in_range(p + phi.p, q + phi.q)) return CMatrix(0, cols);
  CMatrix m = CMatrix::Zero(ring_->component_dim(p + phi.p, q + phi.q), cols);
  for (std::size_t y = 0; y < fac.size(); ++y) {
    const Complex c = phi.coeffs(static_cast<Index>(y));
    if (c == Complex(0.0)) continue;
    for (Index x = 0; x < cols; ++x)
      for (const auto& t : ring_->product_terms(src[static_cast<std::size_t>(x)], fac[y]))
        m(ring_->local_index(t.k), x) += c * t.c;
  }
  return m;
}

CMatrix RingAlgebra::conjugation_matrix(int p, int q) const {
  const auto& src = ring_->component(p, q);
  CMatrix k = CMatrix::Zero(ring_->component_dim(q, p), static_cast<Index>(src.size()));
  for (std::size_t x = 0; x < src.size(); ++x)
    for (const auto& t : ring_->conj_terms(src[x])) k(ring_->local_index(t.k), static_cast<Index>(x)) += t.c;
  return k;
}

CMatrix RingAlgebra::pairing_matrix(int p, int q) const {
  const int n = ring_->n();
  const auto& a = ring_->component(p, q);
  const auto& b = ring_->component(n - p, n - q);
  const CVector& f = ring_->integral_functional();
  CMatrix z = CMatrix::Zero(static_cast<Index>(a.size()), static_cast<Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      for (const auto& t : ring_->product_terms(a[i], b[j])) z(static_cast<Index>(i), static_cast<Index>(j)) += t.c * f(t.k);
  return z;
}

// ---------------------------------------------------------------------------
// Global pairs

HRPairGlobal verify_hr_pair_global(const RingElement& v, const RingElement& w) {
  if (v.ring() != w.ring()) throw ContextMismatch("verify_hr_pair_global: v and w belong to different rings");
  const auto wdeg = w.bidegree();
  if (!wdeg || wdeg->first != 1 || wdeg->second != 1) throw BidegreeError("verify_hr_pair_global: w must have bidegree (1,1)");
  const auto vdeg = v.bidegree();
  if (!vdeg || vdeg->first != vdeg->second) throw BidegreeError("verify_hr_pair_global: v must have bidegree (r,r)");
  if (!is_real(v)) throw ContractViolation("verify_hr_pair_global: v is not real");
  if (!is_real(w)) throw ContractViolation("verify_hr_pair_global: w is not real");
  auto alg = std::make_shared<const RingAlgebra>(v.ring());
  auto s = std::make_shared<const HodgeRiemannStructure>(alg, to_graded(v), to_graded(w));
  return HRPairGlobal(v, w, std::move(s));
}

double global_metric(const RingElement& a, const HRPairGlobal& pair) {
  if (a.ring() != pair.v().ring()) throw ContextMismatch("global_metric: element of another ring");
  if (!pair.verified())
    throw UnverifiedGlobalPair("global_metric: pair is not Hodge-Riemann: " + pair.certificate().failure_reason,
                               pair.certificate());
  if (a.is_zero()) return 0.0;
  return std::sqrt(std::max(0.0, pair.structure().metric_squared(to_graded(a))));
}

double classical_metric(const RingElement& a, const RingElement& w) {
  return global_metric(a, verify_hr_pair_global(RingElement::unit(w.ring()), w));
}

}  // namespace hodge
