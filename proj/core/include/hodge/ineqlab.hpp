#pragma once

// Randomized sweeps over the local inequalities for Hodge-Riemann metrics:
// the N^{r/2} comparison bound, the vanishing rate along nu_eps when
// nu * alpha = 0, factor elimination under comparability, and the linear
// triangle inequality in nu.

#include <cstdint>
#include <string>
#include <vector>

#include "hodge/lefschetz.hpp"

namespace hodge {

enum class SweepKind { Local1, Local2, Eliminate, Triangle };

std::string to_string(SweepKind kind);
/// Accepts local1, local2, eliminate, triangle.
SweepKind parse_sweep_kind(const std::string& name);

/// Geometric grid 1e-1 .. 1e-6, 11 points, strictly decreasing.
std::vector<double> default_eps_grid();

inline constexpr int kMaxSweepDim = 6;
inline constexpr double kEpsFloor = 1e-6;

struct SweepConfig {
  int n = 3;
  int r = 1;
  int s = 0;
  int m = 1;  // target dimension of the projection in local2
  std::uint64_t seed = 1;
  int samples = 100;
  std::vector<double> eps_grid = default_eps_grid();
  double conditioning = 10.0;
  // eliminate: omega_{s+1..r} are drawn with omega <= N0 omega_i and omega_i <= N0 omega
  double comparability = 4.0;
  int threads = 1;

  /// Throws ContractViolation on n > 6 and on any other inconsistent field.
  void validate(SweepKind kind) const;
};

struct SweepRecord {
  std::uint64_t seed = 0;
  int index = 0;
  int p = 0;
  int q = 0;
  double N = 1.0;
  double ratio = 0.0;
  double normalized = 0.0;  // local1: ratio / N^{r/2}; eliminate: |ln ratio| / ln max(N,2)
  double margin = 0.0;      // smallest positivity margin of the pairs used
  bool skipped = false;
  bool violation = false;
  std::string note;
  int attempts = 1;
  // local2 only, aligned with the eps grid. Grid points below the first eps
  // whose pair fails verification are not measured (NaN).
  double eps_floor = 0.0;  // smallest measured eps
  std::vector<double> measured;
  std::vector<double> rho;
  double slope = 0.0;
  bool bounded = true;
  bool monotone = true;
};

struct SweepReport {
  SweepKind kind = SweepKind::Local1;
  SweepConfig config;
  std::vector<SweepRecord> records;  // sorted by seed
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  // local1 / eliminate: max of the normalized column over all samples and
  // over the first half of the sample indices.
  double empirical_constant = 0.0;
  double empirical_constant_half = 0.0;
  double stability_change = 0.0;
  double min_slope = 0.0;  // local2
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double eps_floor = kEpsFloor;            // configured grid floor
  double eps_floor_effective = kEpsFloor;  // largest per-sample measured floor (local2)
  bool pass = false;
  std::string verdict;
};

/// Evaluates one sample from its derived seed; the report is built from these.
SweepRecord evaluate_sample(SweepKind kind, const SweepConfig& config, std::uint64_t sample_seed, int index);
std::uint64_t sample_seed(SweepKind kind, const SweepConfig& config, int index);

SweepReport run_sweep(SweepKind kind, const SweepConfig& config);
SweepReport sweep_local_1(const SweepConfig& config);
SweepReport sweep_local_2(const SweepConfig& config);
SweepReport sweep_eliminate_equivalent(const SweepConfig& config);
SweepReport sweep_triangle(const SweepConfig& config);

/// One row per sample: seed,n,r,s,N,ratio,margin.
std::string to_csv(const SweepReport& report);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace hodge
