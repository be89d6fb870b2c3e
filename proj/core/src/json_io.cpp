#include "hodge/json_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hodge::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ParseError(path + ": " + msg); }

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

int get_int(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "non-finite number");
  return x;
}

double optional_number(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? 0.0 : get_number(*it, path + "." + key);
}

const Json& get_array(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_array()) fail(path + "." + key, "expected an array");
  return v;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Mask index_set(const Json& v, int n, int expected, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of indices");
  Mask m = 0;
  int prev = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) fail(at(path, i), "expected an integer index");
    const int x = v[i].get<int>();
    if (x < 0 || x >= n) fail(at(path, i), "index " + std::to_string(x) + " outside 0.." + std::to_string(n - 1));
    if (x <= prev) fail(path, "indices must be strictly ascending");
    prev = x;
    m |= Mask{1} << x;
  }
  if (static_cast<int>(v.size()) != expected)
    fail(path, "expected " + std::to_string(expected) + " indices, got " + std::to_string(v.size()));
  return m;
}

Json index_json(Mask m) {
  Json a = Json::array();
  for (int i : indices_of(m)) a.push_back(i);
  return a;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

}  // namespace

Json to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with re/im");
  return {optional_number(j, "re", path), optional_number(j, "im", path)};
}

Json to_json(const Form& f) {
  Json coeffs = Json::array();
  for (Index pos = 0; pos < f.coeffs().size(); ++pos) {
    const Complex c = f.coeffs()(pos);
    if (c == Complex(0.0)) continue;
    const auto [i, j] = f.context()->pair_at(f.p(), f.q(), pos);
    coeffs.push_back(Json{{"I", index_json(i)}, {"J", index_json(j)}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"n", f.n()}, {"p", f.p()}, {"q", f.q()}, {"coeffs", coeffs}};
}

Form form_from_json(const Json& j, ContextPtr ctx) {
  const std::string path = "form";
  const int n = get_int(j, "n", path);
  const int p = get_int(j, "p", path);
  const int q = get_int(j, "q", path);
  if (n < 0 || n > ExteriorContext::kMaxDim) fail(path + ".n", "dimension out of range");
  if (p < 0 || q < 0 || p > n || q > n) fail(path, "bidegree outside 0..n");
  if (!ctx) ctx = ExteriorContext::make(n);
  if (ctx->n() != n) fail(path + ".n", "dimension does not match the surrounding data");
  Form f(ctx, p, q);
  CVector c = CVector::Zero(ctx->dim(p, q));
  std::vector<char> seen(static_cast<std::size_t>(c.size()), 0);
  const Json& arr = get_array(j, "coeffs", path);
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const std::string tp = at(path + ".coeffs", t);
    const Mask mi = index_set(field(arr[t], "I", tp), n, p, tp + ".I");
    const Mask mj = index_set(field(arr[t], "J", tp), n, q, tp + ".J");
    const Index pos = ctx->position(mi, mj);
    if (seen[static_cast<std::size_t>(pos)]) fail(tp, "duplicate multi-index pair");
    seen[static_cast<std::size_t>(pos)] = 1;
    c(pos) = complex_from_json(arr[t], tp);
  }
  return Form(ctx, p, q, std::move(c));
}

Json to_json(const PositiveForm& w) {
  Json out = to_json(positive_form_to_form(w));
  Json rows = Json::array();
  const CMatrix& h = w.hermitian();
  for (Index i = 0; i < h.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < h.cols(); ++k) row.push_back(Json::array({h(i, k).real(), h(i, k).imag()}));
    rows.push_back(row);
  }
  out["hermitian"] = rows;
  return out;
}

PositiveForm positive_form_from_json(const Json& j, ContextPtr ctx) {
  const std::string path = "positive_form";
  const int n = get_int(j, "n", path);
  if (n < 0 || n > ExteriorContext::kMaxDim) fail(path + ".n", "dimension out of range");
  if (!ctx) ctx = ExteriorContext::make(n);
  if (ctx->n() != n) fail(path + ".n", "dimension does not match the surrounding data");
  CMatrix h(n, n);
  if (j.contains("hermitian")) {
    const Json& rows = get_array(j, "hermitian", path);
    if (static_cast<int>(rows.size()) != n) fail(path + ".hermitian", "expected n rows");
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) fail(at(path + ".hermitian", i), "expected n entries");
      for (int k = 0; k < n; ++k) {
        const auto& e = row[static_cast<std::size_t>(k)];
        const std::string ep = at(at(path + ".hermitian", i), k);
        if (e.is_array() && e.size() == 2) h(i, k) = {get_number(e[0], ep), get_number(e[1], ep)};
        else if (e.is_number()) h(i, k) = get_number(e, ep);
        else h(i, k) = complex_from_json(e, ep);
      }
    }
  } else {
    const Form f = form_from_json(j, ctx);
    if (f.p() != 1 || f.q() != 1) fail(path, "a positive form must have bidegree (1,1)");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) h(a, b) = -kI * f.coefficient(Mask{1} << a, Mask{1} << b);
  }
  if ((h - h.adjoint()).norm() > 1e-10 * std::max(1.0, h.norm())) fail(path, "coefficient matrix is not Hermitian (form is not real)");
  try {
    return PositiveForm(ctx, 0.5 * (h + h.adjoint()));
  } catch (const NotStrictlyPositive& e) {
    fail(path, e.what());
  }
}

Json to_json(const CertificateEntry& e) {
  Json j{{"p", e.p},
         {"q", e.q},
         {"k", e.k},
         {"dim", e.dim},
         {"rank", e.rank},
         {"full", e.full},
         {"sigma_min", e.sigma_min},
         {"sigma_ratio", e.sigma_ratio},
         {"primitive_dim", e.primitive_dim}};
  j["lambda_min_primitive"] = e.lambda_min_primitive ? Json(*e.lambda_min_primitive) : Json(nullptr);
  j["positivity_margin"] = number_or_null(e.positivity_margin);
  j["positive"] = e.positive;
  return j;
}

Json to_json(const Certificate& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) entries.push_back(to_json(e));
  Json j{{"n", c.n}, {"r", c.r}, {"verified", c.verified}};
  if (c.first_failure) {
    const auto& e = c.entries[*c.first_failure];
    j["first_failure"] = Json{{"p", e.p}, {"q", e.q}, {"k", e.k}};
    j["failure_reason"] = c.failure_reason;
  } else {
    j["first_failure"] = nullptr;
  }
  j["min_sigma_ratio"] = number_or_null(c.min_sigma_ratio());
  j["min_positivity_margin"] = number_or_null(c.min_positivity_margin());
  j["entries"] = entries;
  return j;
}

// ---------------------------------------------------------------------------
// Rings

Json to_json(const GradedRing& ring) {
  Json basis = Json::array();
  for (const auto& b : ring.basis()) basis.push_back(Json{{"name", b.name}, {"p", b.p}, {"q", b.q}});
  Json mult = Json::array();
  for (Index i = 0; i < ring.dim(); ++i)
    for (Index k = 0; k < ring.dim(); ++k)
      for (const auto& t : ring.product_terms(i, k))
        mult.push_back(Json{{"i", i}, {"j", k}, {"k", t.k}, {"re", t.c.real()}, {"im", t.c.imag()}});
  Json conj = Json::array();
  for (Index i = 0; i < ring.dim(); ++i)
    for (const auto& t : ring.conj_terms(i)) conj.push_back(Json{{"i", i}, {"k", t.k}, {"re", t.c.real()}, {"im", t.c.imag()}});
  Json integral = Json::array();
  for (Index k = 0; k < ring.dim(); ++k) {
    const Complex c = ring.integral_functional()(k);
    if (c != Complex(0.0)) integral.push_back(Json{{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  Json j{{"n", ring.n()}, {"basis", basis}, {"mult", mult}, {"conj", conj}, {"integral", integral}, {"unit", ring.unit_index()}};
  const auto& prov = ring.provenance();
  Json c{{"kind", prov.kind}, {"generators", prov.generators}, {"base_generators", prov.base_generators}};
  if (prov.fiber_class) c["fiber_class"] = *prov.fiber_class;
  j["construction"] = c;
  return j;
}

RingPtr ring_from_json(const Json& j) {
  const std::string path = "ring";
  const int n = get_int(j, "n", path);
  if (n < 0) fail(path + ".n", "must be nonnegative");
  const Json& jb = get_array(j, "basis", path);
  std::vector<BasisElement> basis;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string bp = at(path + ".basis", i);
    const Json& name = field(jb[i], "name", bp);
    if (!name.is_string()) fail(bp + ".name", "expected a string");
    basis.push_back({name.get<std::string>(), get_int(jb[i], "p", bp), get_int(jb[i], "q", bp)});
    if (basis.back().p < 0 || basis.back().q < 0 || basis.back().p > n || basis.back().q > n)
      fail(bp, "bidegree outside 0..n");
  }
  const auto d = static_cast<Index>(basis.size());
  if (d == 0) fail(path + ".basis", "empty basis");
  auto index = [&](const Json& e, const char* key, const std::string& ep) {
    const int x = get_int(e, key, ep);
    if (x < 0 || x >= d) fail(ep + "." + key, "basis index out of range");
    return static_cast<Index>(x);
  };

  std::vector<std::map<Index, Complex>> mult_acc(static_cast<std::size_t>(d * d));
  const Json& jm = get_array(j, "mult", path);
  for (std::size_t t = 0; t < jm.size(); ++t) {
    const std::string ep = at(path + ".mult", t);
    const Index a = index(jm[t], "i", ep);
    const Index b = index(jm[t], "j", ep);
    const Index k = index(jm[t], "k", ep);
    mult_acc[static_cast<std::size_t>(a * d + b)][k] += complex_from_json(jm[t], ep);
  }
  std::vector<std::vector<Term>> mult(static_cast<std::size_t>(d * d));
  for (std::size_t s = 0; s < mult.size(); ++s)
    for (const auto& [k, c] : mult_acc[s]) mult[s].push_back({k, c});

  std::vector<std::map<Index, Complex>> conj_acc(static_cast<std::size_t>(d));
  const Json& jc = get_array(j, "conj", path);
  for (std::size_t t = 0; t < jc.size(); ++t) {
    const std::string ep = at(path + ".conj", t);
    conj_acc[static_cast<std::size_t>(index(jc[t], "i", ep))][index(jc[t], "k", ep)] += complex_from_json(jc[t], ep);
  }
  std::vector<std::vector<Term>> conj(static_cast<std::size_t>(d));
  for (std::size_t s = 0; s < conj.size(); ++s)
    for (const auto& [k, c] : conj_acc[s]) conj[s].push_back({k, c});

  CVector integral = CVector::Zero(d);
  const Json& ji = get_array(j, "integral", path);
  for (std::size_t t = 0; t < ji.size(); ++t) {
    const std::string ep = at(path + ".integral", t);
    integral(index(ji[t], "k", ep)) += complex_from_json(ji[t], ep);
  }
  const Index unit = index(j, "unit", path);

  RingProvenance prov;
  if (auto it = j.find("construction"); it != j.end()) {
    const std::string cp = path + ".construction";
    const Json& kind = field(*it, "kind", cp);
    if (!kind.is_string()) fail(cp + ".kind", "expected a string");
    prov.kind = kind.get<std::string>();
    for (const char* key : {"generators", "base_generators"}) {
      if (!it->contains(key)) continue;
      const Json& arr = get_array(*it, key, cp);
      auto& dst = std::string(key) == "generators" ? prov.generators : prov.base_generators;
      for (std::size_t t = 0; t < arr.size(); ++t) {
        if (!arr[t].is_number_integer()) fail(at(cp + "." + key, t), "expected an integer");
        const auto g = arr[t].get<Index>();
        if (g < 0 || g >= d) fail(at(cp + "." + key, t), "basis index out of range");
        dst.push_back(g);
      }
    }
    if (it->contains("fiber_class")) prov.fiber_class = index(*it, "fiber_class", cp);
  }
  try {
    return std::make_shared<const GradedRing>(n, std::move(basis), std::move(mult), std::move(conj), std::move(integral),
                                              unit, std::move(prov));
  } catch (const ContractViolation& e) {
    fail(path, e.what());
  }
}

Json to_json(const RingElement& a) {
  Json terms = Json::array();
  for (Index k = 0; k < a.coeffs().size(); ++k) {
    const Complex c = a.coeffs()(k);
    if (c == Complex(0.0)) continue;
    terms.push_back(Json{{"k", k}, {"name", a.ring()->element(k).name}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"terms", terms}};
}

RingElement ring_element_from_json(const Json& j, const RingPtr& ring) {
  const std::string path = "element";
  const Json& arr = get_array(j, "terms", path);
  CVector c = CVector::Zero(ring->dim());
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const std::string ep = at(path + ".terms", t);
    Index k = -1;
    if (arr[t].contains("k")) {
      k = get_int(arr[t], "k", ep);
      if (k < 0 || k >= ring->dim()) fail(ep + ".k", "basis index out of range");
    } else {
      const Json& name = field(arr[t], "name", ep);
      if (!name.is_string()) fail(ep + ".name", "expected a string");
      for (Index i = 0; i < ring->dim(); ++i)
        if (ring->element(i).name == name.get<std::string>()) k = i;
      if (k < 0) fail(ep + ".name", "no basis element named '" + name.get<std::string>() + "'");
    }
    c(k) += complex_from_json(arr[t], ep);
  }
  return {ring, std::move(c)};
}

Json to_json(const RingDiagnostics& d) {
  Json checks = Json::array();
  for (const auto& c : d.checks)
    checks.push_back(Json{{"name", c.name}, {"residual", number_or_null(c.residual)}, {"pass", c.pass}, {"detail", c.detail}});
  Json pairing = Json::array();
  for (const auto& p : d.pairing)
    pairing.push_back(Json{{"p", p.p},
                           {"q", p.q},
                           {"dim", p.dim},
                           {"sigma_ratio", p.sigma_ratio},
                           {"condition", p.sigma_ratio > 0.0 ? Json(1.0 / p.sigma_ratio) : Json(nullptr)},
                           {"nondegenerate", p.nondegenerate}});
  return Json{{"pass", d.pass}, {"checks", checks}, {"pairing", pairing}};
}

Json to_json(const ContainmentReport& r) {
  return Json{{"p", r.p},
              {"q", r.q},
              {"s", r.s},
              {"r", r.r},
              {"dim", r.dim},
              {"kernel_u_dim", r.kernel_u_dim},
              {"kernel_v_dim", r.kernel_v_dim},
              {"angle", r.angle},
              {"contained", r.contained}};
}

Json to_json(const TopChernReport& r) {
  return Json{{"p", r.p},
              {"q", r.q},
              {"e", r.e},
              {"k", r.k},
              {"grothendieck_residual", r.grothendieck_residual},
              {"integral_residual", r.integral_residual},
              {"identity_residual", r.identity_residual},
              {"samples", r.samples},
              {"dim", r.dim},
              {"rank", r.rank},
              {"full_rank", r.full_rank},
              {"sigma_ratio", r.sigma_ratio},
              {"pass", r.pass}};
}

Json to_json(const PointwiseReport& r) {
  return Json{{"product_residual", r.product_residual},
              {"verdict", r.verdict == PointwiseVerdict::Holds ? "holds" : "not-applicable"}};
}

Json to_json(const RescalingReport& r) {
  return Json{{"lambda", r.lambda},
              {"p", r.p},
              {"q", r.q},
              {"side", r.side == Side::Low ? "low" : "high"},
              {"nu_scaling_ratio", r.nu_scaling_ratio},
              {"nu_scaling_expected", r.nu_scaling_expected},
              {"joint_scaling_ratio", r.joint_scaling_ratio},
              {"joint_scaling_expected", r.joint_scaling_expected},
              {"joint_scaling_raw_ratio", r.joint_scaling_raw_ratio},
              {"max_relative_error", r.max_relative_error},
              {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// Sweeps

Json to_json(const SweepConfig& c) {
  return Json{{"n", c.n},
              {"r", c.r},
              {"s", c.s},
              {"m", c.m},
              {"seed", c.seed},
              {"samples", c.samples},
              {"eps_grid", c.eps_grid},
              {"conditioning", c.conditioning},
              {"comparability", c.comparability},
              {"threads", c.threads}};
}

Json to_json(const SweepRecord& r, SweepKind kind) {
  Json j{{"seed", r.seed},
         {"index", r.index},
         {"p", r.p},
         {"q", r.q},
         {"N", number_or_null(r.N)},
         {"ratio", number_or_null(r.ratio)},
         {"normalized", number_or_null(r.normalized)},
         {"margin", number_or_null(r.margin)},
         {"skipped", r.skipped},
         {"violation", r.violation}};
  if (!r.note.empty()) j["note"] = r.note;
  if (kind == SweepKind::Local2) {
    j["attempts"] = r.attempts;
    j["eps_floor"] = r.eps_floor;
    j["measured"] = vector_json(r.measured);
    j["rho"] = vector_json(r.rho);
    j["slope"] = number_or_null(r.slope);
    j["bounded"] = r.bounded;
    j["monotone"] = r.monotone;
  }
  return j;
}

Json to_json(const SweepReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec, r.kind));
  Json j{{"kind", to_string(r.kind)},
         {"config", to_json(r.config)},
         {"pass", r.pass},
         {"verdict", r.verdict},
         {"max_ratio", number_or_null(r.max_ratio)},
         {"median_ratio", number_or_null(r.median_ratio)},
         {"empirical_constant", number_or_null(r.empirical_constant)},
         {"empirical_constant_half", number_or_null(r.empirical_constant_half)},
         {"stability_change", number_or_null(r.stability_change)}};
  if (r.kind == SweepKind::Local2) j["min_slope"] = number_or_null(r.min_slope);
  j["skipped"] = r.skipped;
  j["violations"] = r.violations;
  j["eps_floor"] = r.eps_floor;
  if (r.kind == SweepKind::Local2) j["eps_floor_effective"] = r.eps_floor_effective;
  j["records"] = records;
  return j;
}

// ---------------------------------------------------------------------------
// Files

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace hodge::io
