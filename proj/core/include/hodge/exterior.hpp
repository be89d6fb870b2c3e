#pragma once

// Exterior algebra of an n-dimensional complex vector space V.
//
// Basis convention: a (p,q)-form is sum_{I,J} a_{IJ} dz^I ^ dzbar^J with I, J
// strictly ascending (0-based) index lists, holomorphic factors first. Within a
// bidegree the pairs (I,J) are enumerated lexicographically: I major, J minor,
// each subset in lexicographic order of its sorted index list. Every sign in
// this module is the parity of the permutation that sorts a concatenation back
// into that convention.

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hodge/numkernel.hpp"

namespace hodge {

using Mask = std::uint32_t;

class ExteriorContext;
using ContextPtr = std::shared_ptr<const ExteriorContext>;

class ExteriorContext {
 public:
  static constexpr int kMaxDim = 12;

  static ContextPtr make(int n);

  int n() const noexcept { return n_; }
  Index dim(int p, int q) const;
  /// Number of size-p subsets of {0..n-1}.
  Index subset_count(int p) const;

  /// Position of the pair (I,J) inside the (|I|,|J|) table.
  Index position(Mask i, Mask j) const;
  std::pair<Mask, Mask> pair_at(int p, int q, Index pos) const;
  std::span<const Mask> subsets(int p) const;
  Index subset_rank(Mask m) const { return rank_[m]; }

  bool valid_bidegree(int p, int q) const noexcept { return p >= 0 && q >= 0 && p <= n_ && q <= n_; }

  explicit ExteriorContext(int n);

 private:
  int n_;
  std::vector<std::vector<Mask>> subsets_;  // by size, lexicographic
  std::vector<Index> rank_;                 // mask -> position within its size class
};

Mask mask_of(std::span<const int> indices);
std::vector<int> indices_of(Mask m);
int popcount(Mask m);

/// Parity sign of merging two disjoint ascending index sets, A written first.
int merge_sign(Mask a, Mask b);

class Form {
 public:
  Form(ContextPtr ctx, int p, int q);
  Form(ContextPtr ctx, int p, int q, CVector coeffs);

  /// c * dz^I ^ dzbar^J; I and J must be strictly ascending.
  static Form monomial(ContextPtr ctx, std::span<const int> i, std::span<const int> j,
                       Complex c = 1.0);
  static Form scalar(ContextPtr ctx, Complex c);

  const ContextPtr& context() const noexcept { return ctx_; }
  int n() const noexcept { return ctx_->n(); }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int degree() const noexcept { return p_ + q_; }
  const CVector& coeffs() const noexcept { return coeffs_; }
  Complex coefficient(Mask i, Mask j) const;

  /// Euclidean norm of the coefficient vector in the dz coframe.
  double coeff_norm() const { return coeffs_.norm(); }

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(Complex c);

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Complex c, Form a) { return a *= c; }
  friend Form operator*(Form a, Complex c) { return a *= c; }

 private:
  void require_same_space(const Form& other) const;

  ContextPtr ctx_;
  int p_;
  int q_;
  CVector coeffs_;
};

enum class PositivityKind { Strict, SemidefinitePullback };

/// omega = i * sum_{jk} H_{jk} dz^j ^ dzbar^k with H Hermitian.
class PositiveForm {
 public:
  PositiveForm(ContextPtr ctx, CMatrix h, PositivityKind kind = PositivityKind::Strict);

  static PositiveForm standard(ContextPtr ctx);

  const ContextPtr& context() const noexcept { return ctx_; }
  int n() const noexcept { return ctx_->n(); }
  const CMatrix& hermitian() const noexcept { return h_; }
  PositivityKind kind() const noexcept { return kind_; }
  bool strictly_positive() const noexcept { return kind_ == PositivityKind::Strict; }

  PositiveForm scaled(double lambda) const;
  /// Sum is strictly positive when either summand is.
  PositiveForm operator+(const PositiveForm& other) const;

 private:
  ContextPtr ctx_;
  CMatrix h_;
  PositivityKind kind_;
};

void require_same_context(const ContextPtr& a, const ContextPtr& b, const char* what);

Form wedge(const Form& a, const Form& b);
Form wedge_all(std::span<const Form> factors, const ContextPtr& ctx);
Form power(const Form& a, int k);
Form conjugate(const Form& a);
bool is_real(const Form& a);

Form positive_form_to_form(const PositiveForm& omega);

/// Pullback of a positive form on W along the linear map with matrix P
/// (m x n, row a holds the coefficients of pi^* dw^a in the dz^j).
PositiveForm pullback(const CMatrix& p, const PositiveForm& omega_w, const ContextPtr& target);

/// Pullback of an arbitrary form along the same kind of matrix; coefficients
/// transform through compound matrices (all p x p minors).
Form pullback_form(const Form& a, const CMatrix& p, const ContextPtr& target);

/// Matrix of p x p minors, rows indexed by row subsets and columns by column
/// subsets in lexicographic order.
CMatrix compound_matrix(const CMatrix& m, int p);

/// Coefficient of omega^n/n! on dz^{0..n-1} ^ dzbar^{0..n-1}.
Complex volume_coefficient(const PositiveForm& omega);

double norm_omega(const Form& a, const PositiveForm& omega);

/// c with gamma = c * omega^n / n!.
Complex integrate(const Form& gamma, const PositiveForm& omega);

/// Smallest N >= 1 with N*H - H_i positive semidefinite for all i.
double comparability_constant(std::span<const PositiveForm> forms, const PositiveForm& omega);

}  // namespace hodge
