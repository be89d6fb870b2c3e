#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hodge/exterior.hpp"
#include "hodge/random.hpp"

namespace testsupport {

using namespace hodge;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double rel_err(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double max_abs(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Permutation parity by bubble sort, independent of the mask arithmetic in the library.
inline int sort_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        std::swap(seq[j], seq[j + 1]);
        sign = -sign;
      }
  return sign;
}

inline std::vector<int> bits(Mask m, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (m & (Mask{1} << i)) out.push_back(i);
  return out;
}

// Oracle wedge of monomials. dz^j is the symbol j, dzbar^j the symbol n + j, so
// the sorted symbol sequence is exactly the library's dz^I dzbar^J order.
inline Complex monomial_wedge_sign(Mask i1, Mask j1, Mask i2, Mask j2, int n) {
  if ((i1 & i2) || (j1 & j2)) return 0.0;
  std::vector<int> seq;
  for (int a : bits(i1, n)) seq.push_back(a);
  for (int b : bits(j1, n)) seq.push_back(n + b);
  for (int a : bits(i2, n)) seq.push_back(a);
  for (int b : bits(j2, n)) seq.push_back(n + b);
  return static_cast<double>(sort_sign(seq));
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace testsupport
