#include "hodge/ineqlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "hodge/random.hpp"

namespace hodge {

namespace {

constexpr double kTriangleSlack = 1e-9;
constexpr double kStabilityLimit = 0.10;
constexpr double kSlopeFloor = 0.9;
constexpr double kMonotoneSlack = 0.01;
constexpr int kMaxAttempts = 32;
constexpr std::size_t kMinMeasured = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t kind_tag(SweepKind kind) {
  switch (kind) {
    case SweepKind::Local1: return 0x6c31;
    case SweepKind::Local2: return 0x6c32;
    case SweepKind::Eliminate: return 0x656c;
    case SweepKind::Triangle: return 0x7472;
  }
  return 0;
}

std::vector<std::pair<int, int>> low_degrees(int n, int r) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q)
      if (p + q <= n - r) out.emplace_back(p, q);
  return out;
}

std::vector<PositiveForm> draw_forms(rnd::Rng& rng, const ContextPtr& ctx, int count, double cond) {
  std::vector<PositiveForm> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(rnd::random_positive_form(rng, ctx, cond));
  return out;
}

/// L G L^* with H = L L^* and G spectrum log-uniform in [1/bound, bound].
PositiveForm draw_comparable(rnd::Rng& rng, const PositiveForm& omega, double bound) {
  const int n = omega.n();
  Eigen::LLT<CMatrix> llt(omega.hermitian());
  const CMatrix l = llt.matrixL();
  const CMatrix u = rnd::random_unitary(rng, n);
  RVector lambda(n);
  const double lb = std::log(bound);
  for (int i = 0; i < n; ++i) lambda(i) = std::exp(lb * (2.0 * rng.uniform() - 1.0));
  CMatrix g = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  CMatrix h = l * g * l.adjoint();
  return PositiveForm(omega.context(), 0.5 * (h + h.adjoint()));
}

double two_sided_comparability(const std::vector<PositiveForm>& forms, const PositiveForm& omega) {
  double big = 1.0;
  for (const auto& f : forms) {
    big = std::max(big, comparability_constant(std::span(&f, 1), omega));
    big = std::max(big, comparability_constant(std::span(&omega, 1), f));
  }
  return big;
}

std::pair<int, int> pick(rnd::Rng& rng, const std::vector<std::pair<int, int>>& degrees) {
  return degrees[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(degrees.size()) - 1))];
}

SweepRecord skipped_record(SweepRecord rec, std::string note) {
  rec.skipped = true;
  rec.ratio = kNaN;
  rec.normalized = kNaN;
  rec.note = std::move(note);
  return rec;
}

SweepRecord sample_local1(const SweepConfig& c, rnd::Rng& rng, SweepRecord rec) {
  auto ctx = ExteriorContext::make(c.n);
  const auto [p, q] = pick(rng, low_degrees(c.n, c.r));
  rec.p = p;
  rec.q = q;
  const auto factors = draw_forms(rng, ctx, c.r, c.conditioning);
  const auto omega = rnd::random_positive_form(rng, ctx, c.conditioning);
  const Form alpha = rnd::random_form(rng, ctx, p, q);
  const Form nu = product_of_positive(factors, ctx);
  const auto pair = verify_hr_pair(nu, omega);
  if (!pair.verified()) return skipped_record(rec, "unverified pair: " + pair.certificate().failure_reason);
  rec.N = comparability_constant(factors, omega);
  rec.margin = pair.certificate().min_positivity_margin();
  rec.ratio = norm_omega(wedge(nu, alpha), omega) / local_metric(alpha, pair);
  rec.normalized = rec.ratio / std::pow(rec.N, 0.5 * c.r);
  return rec;
}

SweepRecord sample_eliminate(const SweepConfig& c, rnd::Rng& rng, SweepRecord rec) {
  auto ctx = ExteriorContext::make(c.n);
  std::vector<std::pair<int, int>> degrees;
  for (int p = 0; p <= c.n; ++p)
    for (int q = 0; q <= c.n; ++q)
      if (p + q <= c.n - c.r || p + q >= c.n + c.r) degrees.emplace_back(p, q);
  const auto [p, q] = pick(rng, degrees);
  rec.p = p;
  rec.q = q;
  auto factors = draw_forms(rng, ctx, c.s, c.conditioning);
  const auto omega = rnd::random_positive_form(rng, ctx, c.conditioning);
  std::vector<PositiveForm> extra;
  for (int i = c.s; i < c.r; ++i) extra.push_back(draw_comparable(rng, omega, c.comparability));
  const Form alpha = rnd::random_form(rng, ctx, p, q);

  const Form nu = product_of_positive(factors, ctx);
  factors.insert(factors.end(), extra.begin(), extra.end());
  const Form mu = product_of_positive(factors, ctx);
  const auto pair_nu = verify_hr_pair(nu, omega);
  const auto pair_mu = verify_hr_pair(mu, omega);
  if (!pair_nu.verified()) return skipped_record(rec, "unverified pair (nu): " + pair_nu.certificate().failure_reason);
  if (!pair_mu.verified()) return skipped_record(rec, "unverified pair (mu): " + pair_mu.certificate().failure_reason);
  rec.N = two_sided_comparability(extra, omega);
  rec.margin = std::min(pair_nu.certificate().min_positivity_margin(), pair_mu.certificate().min_positivity_margin());
  rec.ratio = local_metric(alpha, pair_nu) / local_metric(alpha, pair_mu);
  rec.normalized = std::abs(std::log(rec.ratio)) / std::log(std::max(rec.N, 2.0));
  return rec;
}

SweepRecord sample_triangle(const SweepConfig& c, rnd::Rng& rng, SweepRecord rec) {
  auto ctx = ExteriorContext::make(c.n);
  const auto [p, q] = pick(rng, low_degrees(c.n, 1));
  rec.p = p;
  rec.q = q;
  const auto w1 = rnd::random_positive_form(rng, ctx, c.conditioning);
  const auto w2 = rnd::random_positive_form(rng, ctx, c.conditioning);
  const auto omega = rnd::random_positive_form(rng, ctx, c.conditioning);
  const Form alpha = rnd::random_form(rng, ctx, p, q);
  const auto pair1 = verify_hr_pair(positive_form_to_form(w1), omega);
  const auto pair2 = verify_hr_pair(positive_form_to_form(w2), omega);
  const auto pair12 = verify_hr_pair(positive_form_to_form(w1 + w2), omega);
  for (const auto* pr : {&pair1, &pair2, &pair12})
    if (!pr->verified()) return skipped_record(rec, "unverified pair: " + pr->certificate().failure_reason);
  const double lhs = pair12.structure().metric_squared(to_graded(alpha));
  const double rhs = pair1.structure().metric_squared(to_graded(alpha)) +
                     pair2.structure().metric_squared(to_graded(alpha));
  rec.N = comparability_constant(std::vector<PositiveForm>{w1, w2}, omega);
  rec.margin = std::min({pair1.certificate().min_positivity_margin(), pair2.certificate().min_positivity_margin(),
                         pair12.certificate().min_positivity_margin()});
  rec.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  rec.normalized = rhs > 0.0 ? (rhs - lhs) / rhs : 0.0;
  rec.violation = lhs > rhs + kTriangleSlack * rhs;
  if (rec.violation) rec.note = "triangle inequality violated";
  return rec;
}

SweepRecord sample_local2(const SweepConfig& c, rnd::Rng& rng, SweepRecord rec) {
  auto ctx = ExteriorContext::make(c.n);
  auto ctx_w = ExteriorContext::make(c.m);
  const auto& grid = c.eps_grid;

  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    rec.attempts = attempt;
    const CMatrix proj = rnd::gaussian_matrix(rng, c.m, c.n);
    std::vector<PositiveForm> pulled;
    for (int i = 0; i < c.r; ++i)
      pulled.push_back(pullback(proj, rnd::random_positive_form(rng, ctx_w, c.conditioning), ctx));
    const auto omega = rnd::random_positive_form(rng, ctx, c.conditioning);
    const Form nu = product_of_positive(pulled, ctx);
    const ExteriorAlgebra alg(ctx, omega);

    std::vector<std::pair<int, int>> degrees;
    for (int p = 0; p + c.r <= c.n; ++p)
      for (int q = 0; q + c.r <= c.n; ++q)
        if (p + q >= c.n - c.r) degrees.emplace_back(p, q);
    // Fisher-Yates with the sample stream so the visiting order is seeded.
    for (std::size_t i = degrees.size(); i > 1; --i)
      std::swap(degrees[i - 1], degrees[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);

    for (const auto& [p, q] : degrees) {
      const CMatrix kernel = num::nullspace(alg.multiplication_matrix(to_graded(nu), p, q));
      if (kernel.cols() == 0) continue;
      const Form alpha(ctx, p, q, rnd::random_unit_in_span(rng, kernel));
      const double alpha_sq = std::pow(norm_omega(alpha, omega), 2);

      std::vector<double> measured(grid.size(), kNaN);
      std::vector<double> rho(grid.size(), kNaN);
      double margin = std::numeric_limits<double>::infinity();
      std::size_t verified = 0;
      std::string reason;
      for (; verified < grid.size(); ++verified) {
        const double eps = grid[verified];
        std::vector<PositiveForm> shifted;
        for (const auto& f : pulled) shifted.push_back(f + omega.scaled(eps));
        const auto pair = verify_hr_pair(product_of_positive(shifted, ctx), omega);
        if (!pair.verified()) {
          reason = pair.certificate().failure_reason;
          break;
        }
        margin = std::min(margin, pair.certificate().min_positivity_margin());
        const double val = pair.structure().metric_squared(to_graded(wedge(pair.nu(), alpha)));
        measured[verified] = val;
        rho[verified] = val / (eps * alpha_sq);
      }
      if (verified < kMinMeasured) {
        std::ostringstream why;
        why << "fewer than " << kMinMeasured << " verified eps values";
        if (!reason.empty()) why << "; first failure: " << reason;
        return skipped_record(rec, why.str());
      }
      // nu_eps * alpha vanishing identically for every eps carries no rate; try another degree.
      if (!(measured.front() > 1e-24 * grid.front() * alpha_sq)) continue;
      if (verified < grid.size()) {
        std::ostringstream why;
        why << "grid truncated below eps = " << grid[verified - 1] << ": " << reason;
        rec.note = why.str();
      }

      rec.p = p;
      rec.q = q;
      rec.N = comparability_constant(pulled, omega);
      rec.margin = margin;
      rec.measured = measured;
      rec.rho = rho;
      rec.eps_floor = grid[verified - 1];
      const std::size_t tail = std::min<std::size_t>(3, verified);
      rec.slope = loglog_slope(std::span(grid).subspan(verified - tail, tail),
                               std::span(measured).subspan(verified - tail, tail));
      rec.ratio = *std::max_element(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(verified));
      rec.normalized = rec.ratio;
      rec.bounded = std::all_of(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(verified),
                                [](double x) { return std::isfinite(x); }) &&
                    rec.slope - 1.0 >= -0.1;
      rec.monotone = true;
      for (std::size_t i = 1; i < verified; ++i)
        if (measured[i] > measured[i - 1] * (1.0 + kMonotoneSlack)) rec.monotone = false;
      rec.violation = !(rec.bounded && rec.monotone && rec.slope >= kSlopeFloor);
      if (rec.violation) rec.note = rec.note.empty() ? "rate shape not met" : rec.note + "; rate shape not met";
      return rec;
    }
  }
  return skipped_record(rec, "no degree with a nontrivial kernel of nu");
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

void summarize(SweepReport& rep) {
  const auto& c = rep.config;
  std::vector<double> ratios;
  double c_full = 0.0;
  double c_half = 0.0;
  const int half = std::max(1, c.samples / 2);
  bool finite = true;
  rep.min_slope = std::numeric_limits<double>::infinity();
  for (const auto& rec : rep.records) {
    if (rec.skipped) {
      ++rep.skipped;
      continue;
    }
    if (rec.violation) ++rep.violations;
    if (!std::isfinite(rec.ratio)) finite = false;
    ratios.push_back(rec.ratio);
    c_full = std::max(c_full, rec.normalized);
    if (rec.index < half) c_half = std::max(c_half, rec.normalized);
    if (rep.kind == SweepKind::Local2) rep.min_slope = std::min(rep.min_slope, rec.slope);
  }
  if (rep.kind != SweepKind::Local2) rep.min_slope = 0.0;
  rep.max_ratio = ratios.empty() ? kNaN : *std::max_element(ratios.begin(), ratios.end());
  rep.median_ratio = median(ratios);
  rep.empirical_constant = c_full;
  rep.empirical_constant_half = c_half;
  rep.stability_change = c_half > 0.0 ? (c_full - c_half) / c_half : (c_full > 0.0 ? 1.0 : 0.0);
  rep.eps_floor = c.eps_grid.empty() ? kEpsFloor : c.eps_grid.back();
  rep.eps_floor_effective = rep.eps_floor;
  for (const auto& rec : rep.records)
    if (!rec.skipped && rep.kind == SweepKind::Local2) rep.eps_floor_effective = std::max(rep.eps_floor_effective, rec.eps_floor);

  std::ostringstream v;
  v << std::setprecision(6);
  if (ratios.empty()) {
    rep.pass = false;
    v << "fail: every sample was skipped";
  } else if (!finite) {
    rep.pass = false;
    v << "fail: non-finite ratio";
  } else {
    switch (rep.kind) {
      case SweepKind::Local1:
        rep.pass = rep.stability_change < kStabilityLimit;
        v << (rep.pass ? "pass" : "fail") << ": ratio <= C*N^{r/2} with C = " << c_full
          << ", change under sample doubling " << rep.stability_change;
        break;
      case SweepKind::Eliminate:
        rep.pass = true;
        v << "pass: ratio within [N^-C, N^C] with C = " << c_full << ", change under sample doubling "
          << rep.stability_change;
        break;
      case SweepKind::Local2:
        rep.pass = rep.violations == 0;
        v << (rep.pass ? "pass" : "fail") << ": " << rep.violations << " samples off the bounded/monotone shape, max rho "
          << rep.max_ratio << ", min slope " << rep.min_slope << ", measured down to eps " << rep.eps_floor_effective;
        break;
      case SweepKind::Triangle:
        rep.pass = rep.violations == 0;
        v << (rep.pass ? "pass" : "fail") << ": " << rep.violations << " violations of the triangle inequality";
        if (!rep.pass) v << " (notable finding)";
        break;
    }
  }
  if (rep.skipped > 0) v << "; " << rep.skipped << " samples skipped";
  rep.verdict = v.str();
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Local1: return "local1";
    case SweepKind::Local2: return "local2";
    case SweepKind::Eliminate: return "eliminate";
    case SweepKind::Triangle: return "triangle";
  }
  return "unknown";
}

SweepKind parse_sweep_kind(const std::string& name) {
  for (auto k : {SweepKind::Local1, SweepKind::Local2, SweepKind::Eliminate, SweepKind::Triangle})
    if (to_string(k) == name) return k;
  throw ContractViolation("unknown sweep kind '" + name + "'");
}

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(std::pow(10.0, -1.0 - 0.5 * i));
  return g;
}

void SweepConfig::validate(SweepKind kind) const {
  auto fail = [](const std::string& msg) { throw ContractViolation("sweep config: " + msg); };
  if (n > kMaxSweepDim) fail("n = " + std::to_string(n) + " exceeds the dimension guard " + std::to_string(kMaxSweepDim));
  if (n < 1) fail("n must be at least 1");
  if (r < 0 || r > n) fail("r must satisfy 0 <= r <= n");
  if (samples < 1) fail("samples must be positive");
  if (!(conditioning >= 1.0)) fail("conditioning must be >= 1");
  if (threads < 1) fail("threads must be positive");
  switch (kind) {
    case SweepKind::Local1: break;
    case SweepKind::Local2:
      if (m < 1 || m >= n) fail("local2 needs 1 <= m < n");
      if (r < 1) fail("local2 needs r >= 1");
      if (eps_grid.size() < 2) fail("eps grid needs at least two points");
      for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] >= kEpsFloor && eps_grid[i] < 1.0)) fail("eps values must lie in [1e-6, 1)");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) fail("eps grid must be strictly decreasing");
      }
      break;
    case SweepKind::Eliminate:
      if (s < 0 || s > r) fail("eliminate needs 0 <= s <= r");
      if (!(comparability >= 1.0)) fail("comparability bound must be >= 1");
      break;
    case SweepKind::Triangle:
      if (r != 1) fail("triangle needs r = 1");
      break;
  }
}

std::uint64_t sample_seed(SweepKind kind, const SweepConfig& config, int index) {
  return rnd::derive_seed(config.seed, kind_tag(kind), static_cast<std::uint64_t>(index));
}

SweepRecord evaluate_sample(SweepKind kind, const SweepConfig& config, std::uint64_t seed, int index) {
  rnd::Rng rng(seed);
  SweepRecord rec;
  rec.seed = seed;
  rec.index = index;
  switch (kind) {
    case SweepKind::Local1: return sample_local1(config, rng, rec);
    case SweepKind::Local2: return sample_local2(config, rng, rec);
    case SweepKind::Eliminate: return sample_eliminate(config, rng, rec);
    case SweepKind::Triangle: return sample_triangle(config, rng, rec);
  }
  return rec;
}

SweepReport run_sweep(SweepKind kind, const SweepConfig& config) {
  config.validate(kind);
  SweepReport rep;
  rep.kind = kind;
  rep.config = config;
  rep.records.resize(static_cast<std::size_t>(config.samples));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < config.samples; i = next++)
      rep.records[static_cast<std::size_t>(i)] = evaluate_sample(kind, config, sample_seed(kind, config, i), i);
  };
  const int nthreads = std::min(config.threads, config.samples);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  std::sort(rep.records.begin(), rep.records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.seed != b.seed ? a.seed < b.seed : a.index < b.index; });
  summarize(rep);
  return rep;
}

SweepReport sweep_local_1(const SweepConfig& config) { return run_sweep(SweepKind::Local1, config); }
SweepReport sweep_local_2(const SweepConfig& config) { return run_sweep(SweepKind::Local2, config); }
SweepReport sweep_eliminate_equivalent(const SweepConfig& config) { return run_sweep(SweepKind::Eliminate, config); }
SweepReport sweep_triangle(const SweepConfig& config) { return run_sweep(SweepKind::Triangle, config); }

std::string to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "seed,n,r,s,N,ratio,margin\n";
  const auto& c = report.config;
  for (const auto& rec : report.records)
    out << rec.seed << ',' << c.n << ',' << c.r << ',' << c.s << ',' << rec.N << ',' << rec.ratio << ','
        << rec.margin << '\n';
  return out.str();
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("loglog_slope: need two or more matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace hodge
