#include "hodgekit/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "hodge/ineqlab.hpp"
#include "hodge/json_io.hpp"
#include "hodge/lefschetz.hpp"
#include "hodge/random.hpp"
#include "hodge/ring.hpp"

namespace hodgekit {

namespace {

namespace fs = std::filesystem;
using hodge::io::Json;

fs::path default_out_dir() {
  if (const char* d = std::getenv("HODGEKIT_OUT_DIR"); d && *d) return d;
  return ".";
}

fs::path resolve_out(const std::string& explicit_path, const std::string& default_name) {
  if (!explicit_path.empty()) return explicit_path;
  return default_out_dir() / default_name;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;

  void begin(std::string command, Json config, std::uint64_t seed) {
    manifest.command = std::move(command);
    manifest.config = std::move(config);
    manifest.seed = seed;
    manifest.tool_version = tool_version();
    manifest.started = timestamp_now();
  }
  void finish(const std::string& outcome) {
    manifest.outcome = outcome;
    manifest.finished = timestamp_now();
  }
  /// Writes {"manifest", key: payload}.
  void write_report(const fs::path& path, const char* key, Json payload) const {
    Json doc{{"manifest", manifest.to_json()}, {key, std::move(payload)}};
    hodge::io::write_text_file(path, hodge::io::dump(doc));
  }
  /// Writes a ring file: the ring encoding with the manifest as an extra field.
  void write_ring(const fs::path& path, const hodge::GradedRing& ring) const {
    Json doc{{"manifest", manifest.to_json()}};
    const Json body = hodge::io::to_json(ring);
    for (const auto& [k, v] : body.items()) doc[k] = v;
    hodge::io::write_text_file(path, hodge::io::dump(doc));
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

const char* outcome_label(int code) {
  switch (code) {
    case kExitPass: return "pass";
    case kExitCheckFailed: return "fail";
    case kExitRefused: return "refused";
    default: return "input-error";
  }
}

std::vector<hodge::RingElement> elements_from(const Json& arr, const hodge::RingPtr& ring, const std::string& what) {
  if (!arr.is_array()) throw hodge::ParseError(what + ": expected an array of ring elements");
  std::vector<hodge::RingElement> out;
  for (const auto& e : arr) out.push_back(hodge::io::ring_element_from_json(e, ring));
  return out;
}

hodge::RingElement random_class(hodge::rnd::Rng& rng, const hodge::RingPtr& ring, const std::vector<hodge::Index>& gens,
                                double conditioning) {
  if (gens.empty()) throw hodge::ContractViolation("ring has no recorded (1,0) generators to build positive classes from");
  const auto m = static_cast<int>(gens.size());
  return hodge::positive_class(ring, gens, hodge::rnd::random_positive_hermitian(rng, m, conditioning));
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  int n = 3;
  int r = 1;
  std::uint64_t seed = 1;
  double conditioning = 10.0;
  std::string nu_file;
  std::string omega_file;
  std::string ring_file;
  std::string v_file;
  std::string w_file;
  std::string out;
};

void print_certificate(std::ostream& out, const hodge::Certificate& c) {
  if (c.verified) {
    out << "verified: Hodge-Riemann pair (n=" << c.n << ", r=" << c.r << "), min sigma ratio " << fmt(c.min_sigma_ratio())
        << ", min positivity margin " << fmt(c.min_positivity_margin()) << "\n";
    return;
  }
  out << "NOT verified (n=" << c.n << ", r=" << c.r << ")";
  if (c.first_failure) {
    const auto& e = c.entries[*c.first_failure];
    out << ": failing (p,q,k) = (" << e.p << "," << e.q << "," << e.k << ")";
  }
  out << "\n  " << c.failure_reason << "\n";
}

int cmd_verify(Context& ctx, const VerifyOpts& o) {
  Json config{{"n", o.n}, {"r", o.r}, {"seed", o.seed}, {"conditioning", o.conditioning}, {"nu_file", o.nu_file},
              {"omega_file", o.omega_file}, {"ring_file", o.ring_file}, {"v_file", o.v_file}, {"w_file", o.w_file}};
  ctx.begin("verify", config, o.seed);

  hodge::Certificate cert;
  if (!o.ring_file.empty()) {
    const auto ring = hodge::io::ring_from_json(hodge::io::read_json_file(o.ring_file));
    if (o.w_file.empty()) throw hodge::ParseError("verify --ring needs --w-file");
    const auto w = hodge::io::ring_element_from_json(hodge::io::read_json_file(o.w_file), ring);
    const auto v = o.v_file.empty() ? hodge::RingElement::unit(ring)
                                    : hodge::io::ring_element_from_json(hodge::io::read_json_file(o.v_file), ring);
    cert = hodge::verify_hr_pair_global(v, w).certificate();
  } else if (!o.nu_file.empty()) {
    const auto nu = hodge::io::form_from_json(hodge::io::read_json_file(o.nu_file));
    const auto omega = o.omega_file.empty()
                           ? hodge::PositiveForm::standard(nu.context())
                           : hodge::io::positive_form_from_json(hodge::io::read_json_file(o.omega_file), nu.context());
    cert = hodge::verify_hr_pair(nu, omega).certificate();
  } else {
    if (o.n < 1 || o.n > hodge::kMaxSweepDim)
      throw hodge::ContractViolation("verify: n must lie in 1.." + std::to_string(hodge::kMaxSweepDim));
    if (o.r < 0 || o.r > o.n) throw hodge::ContractViolation("verify: r must satisfy 0 <= r <= n");
    if (!(o.conditioning >= 1.0)) throw hodge::ContractViolation("verify: conditioning must be >= 1");
    auto space = hodge::ExteriorContext::make(o.n);
    hodge::rnd::Rng rng(o.seed);
    std::vector<hodge::PositiveForm> factors;
    for (int i = 0; i < o.r; ++i) factors.push_back(hodge::rnd::random_positive_form(rng, space, o.conditioning));
    const auto omega = hodge::rnd::random_positive_form(rng, space, o.conditioning);
    cert = hodge::verify_hr_pair(hodge::product_of_positive(factors, space), omega).certificate();
  }

  print_certificate(ctx.out, cert);
  const int code = cert.verified ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));
  const fs::path path = resolve_out(o.out, "certificate.json");
  ctx.write_report(path, "certificate", hodge::io::to_json(cert));
  ctx.out << "certificate written to " << path.string() << "\n";
  return code;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  hodge::SweepConfig config;
  std::vector<double> eps;
  std::string out_dir;
  std::string name;
};

void add_sweep_options(CLI::App* sub, SweepOpts& o) {
  sub->add_option("--n", o.config.n, "complex dimension (at most 6)");
  sub->add_option("--r", o.config.r, "number of positive factors in nu");
  sub->add_option("--s", o.config.s, "eliminate: factors kept in nu");
  sub->add_option("--m", o.config.m, "local2: dimension of the projection target");
  sub->add_option("--seed", o.config.seed, "base seed");
  sub->add_option("--samples", o.config.samples, "number of samples");
  sub->add_option("--conditioning", o.config.conditioning, "eigenvalue spread of random positive forms");
  sub->add_option("--comparability", o.config.comparability, "eliminate: comparability bound for the dropped factors");
  sub->add_option("--eps", o.eps, "local2: strictly decreasing eps grid")->delimiter(',');
  sub->add_option("--threads", o.config.threads, "worker threads");
  sub->add_option("--out-dir", o.out_dir, "output directory (default $HODGEKIT_OUT_DIR or .)");
  sub->add_option("--name", o.name, "file stem for the JSON and CSV reports");
}

int cmd_sweep(Context& ctx, hodge::SweepKind kind, SweepOpts o) {
  if (!o.eps.empty()) o.config.eps_grid = o.eps;
  ctx.begin("sweep " + hodge::to_string(kind), hodge::io::to_json(o.config), o.config.seed);
  const auto rep = hodge::run_sweep(kind, o.config);
  const int code = rep.pass ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));

  ctx.out << "sweep " << hodge::to_string(kind) << " (n=" << o.config.n << ", r=" << o.config.r;
  if (kind == hodge::SweepKind::Eliminate) ctx.out << ", s=" << o.config.s;
  if (kind == hodge::SweepKind::Local2) ctx.out << ", m=" << o.config.m;
  ctx.out << ", samples=" << o.config.samples << ", seed=" << o.config.seed << ")\n";
  ctx.out << "  " << rep.verdict << "\n";
  ctx.out << "  max ratio " << fmt(rep.max_ratio) << ", median ratio " << fmt(rep.median_ratio) << "\n";
  if (kind == hodge::SweepKind::Local1 || kind == hodge::SweepKind::Eliminate)
    ctx.out << "  empirical constant " << fmt(rep.empirical_constant) << " (first half " << fmt(rep.empirical_constant_half)
            << ")\n";
  if (kind == hodge::SweepKind::Local2) ctx.out << "  min log-log slope " << fmt(rep.min_slope) << ", eps floor " << rep.eps_floor << "\n";

  const fs::path dir = o.out_dir.empty() ? default_out_dir() : fs::path(o.out_dir);
  const std::string stem = o.name.empty() ? "sweep_" + hodge::to_string(kind) : o.name;
  ctx.write_report(dir / (stem + ".json"), "report", hodge::io::to_json(rep));
  const std::string csv = "# manifest: " + ctx.manifest.to_json().dump() + "\n" + hodge::to_csv(rep);
  hodge::io::write_text_file(dir / (stem + ".csv"), csv);
  ctx.out << "reports written to " << (dir / (stem + ".json")).string() << " and " << (dir / (stem + ".csv")).string()
          << "\n";
  return code;
}

// ---------------------------------------------------------------------------
// ring

struct RingOpts {
  std::string file;
  std::string out;
  int n = 2;
  std::string omega_file;
  std::string a_file;
  std::string b_file;
  std::string base_file;
  int rank = 1;
  std::string chern_file;
  std::string y_file;
  std::string x_file;
  int s = 0;
  int r = 0;
  int k = 0;
  std::optional<int> p;
  std::optional<int> q;
  std::string classes_file;
  std::uint64_t seed = 1;
  double conditioning = 4.0;
  std::string w_file;
  std::string v_file;
};

hodge::RingPtr load_ring(const std::string& path) { return hodge::io::ring_from_json(hodge::io::read_json_file(path)); }

int cmd_ring_validate(Context& ctx, const RingOpts& o) {
  ctx.begin("ring validate", Json{{"file", o.file}}, 0);
  const auto ring = load_ring(o.file);
  const auto diag = hodge::ring_validate(*ring);
  for (const auto& c : diag.checks) {
    ctx.out << "  " << std::left << std::setw(28) << c.name << (c.pass ? "ok  " : "FAIL") << "  residual " << fmt(c.residual);
    if (!c.detail.empty()) ctx.out << "  (" << c.detail << ")";
    ctx.out << "\n";
  }
  ctx.out << "ring " << (diag.pass ? "valid" : "INVALID") << " (n=" << ring->n() << ", dim=" << ring->dim() << ")\n";
  const int code = diag.pass ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));
  const fs::path path = resolve_out(o.out, fs::path(o.file).stem().string() + "_validate.json");
  ctx.write_report(path, "diagnostics", hodge::io::to_json(diag));
  return code;
}

int cmd_ring_torus(Context& ctx, const RingOpts& o) {
  ctx.begin("ring torus", Json{{"n", o.n}, {"omega_file", o.omega_file}}, 0);
  if (o.n < 1 || o.n > hodge::kMaxSweepDim) throw hodge::ContractViolation("ring torus: n must lie in 1..6");
  auto space = hodge::ExteriorContext::make(o.n);
  const auto omega = o.omega_file.empty()
                         ? hodge::PositiveForm::standard(space)
                         : hodge::io::positive_form_from_json(hodge::io::read_json_file(o.omega_file), space);
  const auto torus = hodge::torus_ring(o.n, omega);
  ctx.finish("pass");
  const fs::path path = resolve_out(o.out, "torus" + std::to_string(o.n) + ".json");
  ctx.write_ring(path, *torus.ring());
  ctx.out << "torus ring n=" << o.n << " (dim " << torus.ring()->dim() << ") written to " << path.string() << "\n";
  return kExitPass;
}

int cmd_ring_kunneth(Context& ctx, const RingOpts& o) {
  ctx.begin("ring kunneth", Json{{"a", o.a_file}, {"b", o.b_file}}, 0);
  const auto prod = hodge::kunneth_product(load_ring(o.a_file), load_ring(o.b_file));
  ctx.finish("pass");
  const fs::path path = resolve_out(o.out, "kunneth.json");
  ctx.write_ring(path, *prod.ring);
  ctx.out << "Kunneth product n=" << prod.ring->n() << " (dim " << prod.ring->dim() << ") written to " << path.string()
          << "\n";
  return kExitPass;
}

int cmd_ring_projbundle(Context& ctx, const RingOpts& o) {
  ctx.begin("ring projbundle", Json{{"base", o.base_file}, {"rank", o.rank}, {"chern", o.chern_file}}, 0);
  const auto base = load_ring(o.base_file);
  const Json cj = hodge::io::read_json_file(o.chern_file);
  const auto chern = elements_from(cj.is_object() && cj.contains("chern") ? cj["chern"] : cj, base, "chern");
  const auto bundle = hodge::projective_bundle_ring(base, chern, o.rank);
  const double groth = hodge::grothendieck_residual(bundle);
  const double integ = hodge::integral_consistency_residual(bundle);
  const auto diag = hodge::ring_validate(*bundle.ring);
  const bool ok = groth <= hodge::kRingTolerance && integ <= hodge::kRingTolerance && diag.pass;
  ctx.out << "projective bundle n=" << bundle.ring->n() << " (dim " << bundle.ring->dim() << ")\n";
  ctx.out << "  Grothendieck relation residual " << fmt(groth) << "\n";
  ctx.out << "  integral consistency residual " << fmt(integ) << "\n";
  ctx.out << "  ring validation " << (diag.pass ? "ok" : "FAILED") << "\n";
  const int code = ok ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));
  const fs::path path = resolve_out(o.out, "projbundle.json");
  ctx.write_ring(path, *bundle.ring);
  ctx.out << "ring written to " << path.string() << "\n";
  return code;
}

std::vector<std::pair<int, int>> degrees_for(const std::optional<int>& p, const std::optional<int>& q, int total) {
  std::vector<std::pair<int, int>> out;
  if (p && q) {
    out.emplace_back(*p, *q);
  } else if (p) {
    out.emplace_back(*p, total - *p);
  } else if (q) {
    out.emplace_back(total - *q, *q);
  } else {
    for (int a = 0; a <= total; ++a) out.emplace_back(a, total - a);
  }
  return out;
}

int cmd_ring_theorem2(Context& ctx, const RingOpts& o) {
  ctx.begin("ring theorem2",
            Json{{"y", o.y_file}, {"s", o.s}, {"r", o.r}, {"p", o.p ? Json(*o.p) : Json(nullptr)},
                 {"q", o.q ? Json(*o.q) : Json(nullptr)}, {"classes", o.classes_file}, {"conditioning", o.conditioning}},
            o.seed);
  const auto y = load_ring(o.y_file);
  const auto& prov = y->provenance();
  if (prov.kind != "kunneth" && prov.kind != "projbundle")
    throw hodge::RefusedPrecondition("theorem2: ring of kind '" + prov.kind +
                                     "' carries no guarantee that it is a free module over a base ring; build it with "
                                     "'ring kunneth' or 'ring projbundle'");
  std::vector<hodge::RingElement> pulled;
  std::vector<hodge::RingElement> own;
  if (!o.classes_file.empty()) {
    const Json cj = hodge::io::read_json_file(o.classes_file);
    if (!cj.is_object()) throw hodge::ParseError("classes: expected an object with pulled_back and own");
    pulled = elements_from(cj.value("pulled_back", Json::array()), y, "classes.pulled_back");
    own = elements_from(cj.value("own", Json::array()), y, "classes.own");
  } else {
    if (o.s < 0 || o.r < o.s) throw hodge::ContractViolation("theorem2: need 0 <= s <= r");
    hodge::rnd::Rng rng(o.seed);
    for (int i = 0; i < o.s; ++i) pulled.push_back(random_class(rng, y, prov.base_generators, o.conditioning));
    for (int i = o.s; i < o.r; ++i) {
      auto c = random_class(rng, y, prov.generators, o.conditioning);
      if (prov.fiber_class) c += (1.0 + rng.uniform()) * hodge::RingElement::basis(y, *prov.fiber_class);
      own.push_back(c);
    }
  }
  const int r = static_cast<int>(pulled.size() + own.size());
  Json reports = Json::array();
  bool all = true;
  for (const auto& [p, q] : degrees_for(o.p, o.q, y->n() - r)) {
    const auto rep = hodge::theorem2_check(y, pulled, own, p, q);
    all = all && rep.contained;
    reports.push_back(hodge::io::to_json(rep));
    ctx.out << "  (p,q)=(" << p << "," << q << ")  dim " << rep.dim << "  ker u " << rep.kernel_u_dim << "  ker v "
            << rep.kernel_v_dim << "  angle " << fmt(rep.angle) << (rep.contained ? "  contained" : "  NOT contained")
            << "\n";
  }
  ctx.out << "theorem2 (s=" << pulled.size() << ", r=" << r << "): " << (all ? "containment holds" : "containment FAILS")
          << "\n";
  const int code = all ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));
  ctx.write_report(resolve_out(o.out, "theorem2.json"), "reports", reports);
  return code;
}

int cmd_ring_theorem3(Context& ctx, const RingOpts& o) {
  ctx.begin("ring theorem3",
            Json{{"x", o.x_file}, {"chern", o.chern_file}, {"k", o.k}, {"p", o.p ? Json(*o.p) : Json(nullptr)},
                 {"q", o.q ? Json(*o.q) : Json(nullptr)}, {"classes", o.classes_file}, {"conditioning", o.conditioning}},
            o.seed);
  const auto x = load_ring(o.x_file);
  const Json cj = hodge::io::read_json_file(o.chern_file);
  const auto chern = elements_from(cj.is_object() && cj.contains("chern") ? cj["chern"] : cj, x, "chern");
  std::vector<hodge::RingElement> classes;
  if (!o.classes_file.empty()) {
    const Json kj = hodge::io::read_json_file(o.classes_file);
    classes = elements_from(kj.is_object() && kj.contains("classes") ? kj["classes"] : kj, x, "classes");
  } else {
    hodge::rnd::Rng rng(o.seed);
    for (int i = 0; i < o.k; ++i) classes.push_back(random_class(rng, x, x->provenance().generators, o.conditioning));
  }
  const int e = static_cast<int>(chern.size());
  const int k = static_cast<int>(classes.size());
  Json reports = Json::array();
  bool all = true;
  for (const auto& [p, q] : degrees_for(o.p, o.q, x->n() - e - k)) {
    const auto rep = hodge::theorem3_check(x, chern, classes, p, q, o.seed);
    all = all && rep.pass;
    reports.push_back(hodge::io::to_json(rep));
    ctx.out << "  (p,q)=(" << p << "," << q << ")  Grothendieck " << fmt(rep.grothendieck_residual) << "  integral "
            << fmt(rep.integral_residual) << "  identity " << fmt(rep.identity_residual) << "  rank " << rep.rank << "/"
            << rep.dim << (rep.full_rank ? " (full)" : " (deficient)") << "\n";
  }
  ctx.out << "theorem3 (e=" << e << ", k=" << k << "): " << (all ? "identities hold" : "identity residual too large") << "\n";
  const int code = all ? kExitPass : kExitCheckFailed;
  ctx.finish(outcome_label(code));
  ctx.write_report(resolve_out(o.out, "theorem3.json"), "reports", reports);
  return code;
}

int cmd_ring_metric(Context& ctx, const RingOpts& o) {
  ctx.begin("ring metric", Json{{"ring", o.file}, {"w", o.w_file}, {"v", o.v_file}, {"a", o.a_file}}, 0);
  const auto ring = load_ring(o.file);
  const auto w = hodge::io::ring_element_from_json(hodge::io::read_json_file(o.w_file), ring);
  const auto v = o.v_file.empty() ? hodge::RingElement::unit(ring)
                                  : hodge::io::ring_element_from_json(hodge::io::read_json_file(o.v_file), ring);
  const auto a = hodge::io::ring_element_from_json(hodge::io::read_json_file(o.a_file), ring);
  const auto pair = hodge::verify_hr_pair_global(v, w);
  Json payload{{"certificate", hodge::io::to_json(pair.certificate())}};
  int code = kExitPass;
  if (!pair.verified()) {
    print_certificate(ctx.out, pair.certificate());
    payload["metric"] = nullptr;
    code = kExitCheckFailed;
  } else {
    const double m = hodge::global_metric(a, pair);
    payload["metric"] = m;
    ctx.out << (o.v_file.empty() ? "classical metric " : "metric ") << std::setprecision(17) << m << "\n";
  }
  ctx.finish(outcome_label(code));
  ctx.write_report(resolve_out(o.out, "metric.json"), "result", payload);
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hodge-Riemann pairs: verification, inequality sweeps and cohomology rings", "hodgekit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "verify a (nu, omega) pair and write its certificate");
  verify->add_option("--n", vo.n, "dimension of a random instance");
  verify->add_option("--r", vo.r, "number of random positive factors in nu");
  verify->add_option("--seed", vo.seed, "seed of the random instance");
  verify->add_option("--conditioning", vo.conditioning, "eigenvalue spread of random positive forms");
  verify->add_option("--nu-file", vo.nu_file, "form JSON for nu");
  verify->add_option("--omega-file", vo.omega_file, "positive form JSON for omega (default: standard)");
  verify->add_option("--ring", vo.ring_file, "ring JSON; verify the pair (v, w) inside it");
  verify->add_option("--v-file", vo.v_file, "ring element JSON for v (default: 1)");
  verify->add_option("--w-file", vo.w_file, "ring element JSON for w");
  verify->add_option("--out", vo.out, "certificate path");

  std::array<SweepOpts, 4> so;
  std::array<CLI::App*, 4> sweeps{};
  auto* sweep = app.add_subcommand("sweep", "randomized sweeps over the local inequalities");
  sweep->require_subcommand(1);
  const std::array<hodge::SweepKind, 4> kinds{hodge::SweepKind::Local1, hodge::SweepKind::Local2,
                                              hodge::SweepKind::Eliminate, hodge::SweepKind::Triangle};
  const std::array<const char*, 4> blurbs{"|nu a|_omega against N^{r/2} |a|_(nu,omega)",
                                          "vanishing rate of |nu_eps a| when nu a = 0",
                                          "dropping factors comparable to omega", "triangle inequality in nu"};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    sweeps[i] = sweep->add_subcommand(hodge::to_string(kinds[i]), blurbs[i]);
    add_sweep_options(sweeps[i], so[i]);
  }

  RingOpts ro;
  auto* ring = app.add_subcommand("ring", "build, validate and test cohomology rings");
  ring->require_subcommand(1);
  auto* r_validate = ring->add_subcommand("validate", "check ring axioms and Poincare duality");
  r_validate->add_option("file", ro.file, "ring JSON")->required();
  r_validate->add_option("--out", ro.out, "diagnostics path");
  auto* r_torus = ring->add_subcommand("torus", "cohomology ring of a complex torus");
  r_torus->add_option("--n", ro.n, "dimension");
  r_torus->add_option("--omega-file", ro.omega_file, "positive form normalizing the integral (default: standard)");
  r_torus->add_option("--out", ro.out, "ring path");
  auto* r_kunneth = ring->add_subcommand("kunneth", "Kunneth product of two rings (the first is the base)");
  r_kunneth->add_option("--a", ro.a_file, "first ring JSON")->required();
  r_kunneth->add_option("--b", ro.b_file, "second ring JSON")->required();
  r_kunneth->add_option("--out", ro.out, "ring path");
  auto* r_bundle = ring->add_subcommand("projbundle", "projective bundle ring from Chern classes");
  r_bundle->add_option("--base", ro.base_file, "base ring JSON")->required();
  r_bundle->add_option("--rank", ro.rank, "bundle rank e")->required();
  r_bundle->add_option("--chern", ro.chern_file, "JSON with the Chern classes c_1..c_e")->required();
  r_bundle->add_option("--out", ro.out, "ring path");
  auto* r_thm2 = ring->add_subcommand("theorem2", "kernel containment ker(u) in ker(v) on a free extension");
  r_thm2->add_option("--y", ro.y_file, "ring JSON built by kunneth or projbundle")->required();
  r_thm2->add_option("--s", ro.s, "number of pulled-back classes");
  r_thm2->add_option("--r", ro.r, "total number of classes");
  r_thm2->add_option("--p", ro.p, "bidegree p (default: all with p+q = n-r)");
  r_thm2->add_option("--q", ro.q, "bidegree q");
  r_thm2->add_option("--classes", ro.classes_file, "JSON with pulled_back and own classes (default: random)");
  r_thm2->add_option("--seed", ro.seed, "seed for random classes");
  r_thm2->add_option("--conditioning", ro.conditioning, "eigenvalue spread of random classes");
  r_thm2->add_option("--out", ro.out, "report path");
  auto* r_thm3 = ring->add_subcommand("theorem3", "top Chern class identity on the projective bundle");
  r_thm3->add_option("--x", ro.x_file, "base ring JSON")->required();
  r_thm3->add_option("--chern", ro.chern_file, "JSON with the Chern classes c_1..c_e")->required();
  r_thm3->add_option("--k", ro.k, "number of random positive classes");
  r_thm3->add_option("--classes", ro.classes_file, "JSON with explicit classes");
  r_thm3->add_option("--p", ro.p, "bidegree p (default: all with p+q = n-e-k)");
  r_thm3->add_option("--q", ro.q, "bidegree q");
  r_thm3->add_option("--seed", ro.seed, "seed for random classes and samples");
  r_thm3->add_option("--conditioning", ro.conditioning, "eigenvalue spread of random classes");
  r_thm3->add_option("--out", ro.out, "report path");
  auto* r_metric = ring->add_subcommand("metric", "metric of a class for a pair (v, w)");
  r_metric->add_option("--ring", ro.file, "ring JSON")->required();
  r_metric->add_option("--w", ro.w_file, "ring element JSON for w")->required();
  r_metric->add_option("--v", ro.v_file, "ring element JSON for v (default: 1, the classical metric)");
  r_metric->add_option("--a", ro.a_file, "ring element JSON for the class")->required();
  r_metric->add_option("--out", ro.out, "report path");

  Context ctx{out, err, {}};
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (verify->parsed()) return cmd_verify(ctx, vo);
    for (std::size_t i = 0; i < kinds.size(); ++i)
      if (sweeps[i]->parsed()) return cmd_sweep(ctx, kinds[i], so[i]);
    if (r_validate->parsed()) return cmd_ring_validate(ctx, ro);
    if (r_torus->parsed()) return cmd_ring_torus(ctx, ro);
    if (r_kunneth->parsed()) return cmd_ring_kunneth(ctx, ro);
    if (r_bundle->parsed()) return cmd_ring_projbundle(ctx, ro);
    if (r_thm2->parsed()) return cmd_ring_theorem2(ctx, ro);
    if (r_thm3->parsed()) return cmd_ring_theorem3(ctx, ro);
    if (r_metric->parsed()) return cmd_ring_metric(ctx, ro);
  } catch (const hodge::RefusedPrecondition& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const hodge::ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::ContractViolation& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::BidegreeError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::ContextMismatch& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::NotStrictlyPositive& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::DegreeOutOfRange& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const hodge::Error& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hodgekit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hodgekit
