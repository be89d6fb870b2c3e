#pragma once

// Seeded generators for forms and Hermitian matrices. All streams derive from
// a single 64-bit seed through splitmix64, so sample i of a sweep is
// reproducible on its own.

#include <cstdint>
#include <random>

#include "hodge/exterior.hpp"

namespace hodge::rnd {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent child seed for (stream, counter) under a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t counter);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller; the output depends only on the engine stream.
  double normal();
  Complex complex_normal();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

CMatrix gaussian_matrix(Rng& rng, Index rows, Index cols);
/// Haar-distributed unitary via QR of a complex Gaussian matrix.
CMatrix random_unitary(Rng& rng, int n);
/// H = U diag(lambda) U^* with lambda log-uniform in [1/conditioning, 1].
CMatrix random_positive_hermitian(Rng& rng, int n, double conditioning);

PositiveForm gen_positive_form(std::uint64_t seed, const ContextPtr& ctx, double conditioning);
PositiveForm random_positive_form(Rng& rng, const ContextPtr& ctx, double conditioning);
Form random_form(Rng& rng, const ContextPtr& ctx, int p, int q);
/// Uniform random unit vector in the span of the orthonormal columns of basis.
CVector random_unit_in_span(Rng& rng, const CMatrix& basis);

}  // namespace hodge::rnd
