// Copyright 2026 The bseries Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bseries/errors.hpp"
#include "bseries/scalar.hpp"

namespace bseries {

// Exponent vector of a monomial. Ordered graded-lexicographically.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int num_vars);
  static MultiIndex unit(int num_vars, int i);

  int size() const noexcept { return static_cast<int>(exps_.size()); }
  int degree() const noexcept { return degree_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

// Packs m exponents into one 64-bit key, first variable in the highest bits,
// so that integer order on keys of equal degree is lexicographic order and
// key addition is monomial multiplication.
class MonomialPacking {
 public:
  MonomialPacking() = default;
  MonomialPacking(int num_vars, int max_degree);

  int num_vars() const noexcept { return num_vars_; }
  int bits() const noexcept { return bits_; }

  std::uint64_t pack(const MultiIndex& index) const;
  MultiIndex unpack(std::uint64_t key) const;
  int exponent(std::uint64_t key, int i) const noexcept {
    return static_cast<int>((key >> shift(i)) & mask_);
  }
  std::uint64_t unit_key(int i) const noexcept { return std::uint64_t{1} << shift(i); }

  friend bool operator==(const MonomialPacking&, const MonomialPacking&) = default;

 private:
  int shift(int i) const noexcept { return (num_vars_ - 1 - i) * bits_; }

  int num_vars_ = 0;
  int bits_ = 0;
  std::uint64_t mask_ = 0;
};

template <RealScalar Real>
struct Term {
  std::uint64_t key;
  std::complex<Real> value;
  friend bool operator==(const Term&, const Term&) = default;
};

// Terms of one total degree, sorted by key, no zero coefficients.
template <RealScalar Real>
using HomogeneousBlock = std::vector<Term<Real>>;

// Coefficients below this magnitude are dropped from canonical form.
inline constexpr double kZeroThreshold = 1e-300;

template <RealScalar Real>
bool is_negligible(const std::complex<Real>& c) {
  return num::abs(c.real()) < Real(kZeroThreshold) && num::abs(c.imag()) < Real(kZeroThreshold);
}

// Sparse polynomial in m commuting variables with complex coefficients,
// truncated at total degree D. Terms are bucketed by degree.
template <RealScalar Real>
class TruncatedSeries {
 public:
  using Scalar = std::complex<Real>;

  TruncatedSeries(int num_vars, int trunc_degree);

  static TruncatedSeries constant(int num_vars, int trunc_degree, Scalar c);
  static TruncatedSeries variable(int num_vars, int trunc_degree, int i, Scalar c = Scalar(1));
  // Duplicate indices are summed; terms above the truncation degree are dropped.
  static TruncatedSeries from_terms(int num_vars, int trunc_degree,
                                    const std::vector<std::pair<MultiIndex, Scalar>>& terms);

  int num_vars() const noexcept { return num_vars_; }
  int trunc_degree() const noexcept { return trunc_degree_; }
  const MonomialPacking& packing() const noexcept { return packing_; }

  Scalar coeff(const MultiIndex& index) const;
  Scalar constant_term() const;
  // Empty for d outside [0, D].
  const HomogeneousBlock<Real>& block(int d) const;

  std::size_t size() const noexcept;
  bool is_zero() const noexcept { return size() == 0; }
  // -1 for the zero series.
  int lowest_degree() const noexcept;
  // Graded-lexicographic order.
  std::vector<std::pair<MultiIndex, Scalar>> terms() const;

  // Adds c to the coefficient at index (no-op above the truncation degree).
  void add_term(const MultiIndex& index, Scalar c);
  // Replaces the degree-d block; the block must be sorted and canonical.
  void set_block(int d, HomogeneousBlock<Real> block);

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  int num_vars_;
  int trunc_degree_;
  MonomialPacking packing_;
  std::vector<HomogeneousBlock<Real>> blocks_;
};

// Pairing of the 2n variables into (z_j, z̄_j) and the rotation eigenvalues λ_j.
template <RealScalar Real>
class VariableRoles {
 public:
  VariableRoles(std::vector<std::pair<int, int>> pairing, std::vector<std::complex<Real>> eigenvalues);
  // z_j is variable j, z̄_j is variable n + j.
  static VariableRoles standard(std::vector<std::complex<Real>> eigenvalues);

  int n() const noexcept { return static_cast<int>(pairing_.size()); }
  int num_vars() const noexcept { return 2 * n(); }
  std::pair<int, int> pair(int j) const { return pairing_[static_cast<std::size_t>(j)]; }
  const std::complex<Real>& eigenvalue(int j) const { return eigenvalues_[static_cast<std::size_t>(j)]; }
  Real angle(int j) const { return angles_[static_cast<std::size_t>(j)]; }
  // m_j = s'_j − s''_j for the monomial z^{s'} z̄^{s''}.
  std::vector<int> harmonic(const MultiIndex& index) const;

 private:
  std::vector<std::pair<int, int>> pairing_;
  std::vector<std::complex<Real>> eigenvalues_;
  std::vector<Real> angles_;
};

enum class TauSign { minus, plus };

// Block kernels shared by the series operations and the order-by-order solver.
namespace kernel {

// Accumulates products into one output degree with a fixed summation order
// per output monomial.
template <RealScalar Real>
class BlockAccumulator {
 public:
  void add_product(const HomogeneousBlock<Real>& a, const HomogeneousBlock<Real>& b);
  void add_scaled(const HomogeneousBlock<Real>& a, std::complex<Real> c);
  HomogeneousBlock<Real> finish();

 private:
  std::vector<Term<Real>> pending_;
};

template <RealScalar Real>
HomogeneousBlock<Real> product(const HomogeneousBlock<Real>& a, const HomogeneousBlock<Real>& b);

}  // namespace kernel

template <RealScalar Real>
TruncatedSeries<Real> operator+(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b);
template <RealScalar Real>
TruncatedSeries<Real> operator-(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b);
template <RealScalar Real>
TruncatedSeries<Real> operator-(const TruncatedSeries<Real>& a);
template <RealScalar Real>
TruncatedSeries<Real> operator*(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b);
template <RealScalar Real>
TruncatedSeries<Real> scale(const TruncatedSeries<Real>& a, std::complex<Real> c);
template <RealScalar Real>
TruncatedSeries<Real> operator*(std::complex<Real> c, const TruncatedSeries<Real>& a) {
  return scale(a, c);
}
template <RealScalar Real>
TruncatedSeries<Real> operator*(const TruncatedSeries<Real>& a, std::complex<Real> c) {
  return scale(a, c);
}

// ρ^{p*}: coefficient at z^{s'} z̄^{s''} times λ^{p(s'−s'')}.
template <RealScalar Real>
TruncatedSeries<Real> rotate(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles, int p);

// (z, z̄) ↦ (−z, −z̄): degree-d coefficients times (−1)^d.
template <RealScalar Real>
TruncatedSeries<Real> central_symmetry(const TruncatedSeries<Real>& g);

// τ± = id + ı*∘ρ^{±1*}.
template <RealScalar Real>
TruncatedSeries<Real> tau(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles, TauSign sign);

// ⟨g⟩ keeps the rotation-invariant monomials (s' = s''); [g] = g − ⟨g⟩.
template <RealScalar Real>
TruncatedSeries<Real> average(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles);
template <RealScalar Real>
TruncatedSeries<Real> bracket(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles);

// f_x(χ_1, …, χ_n) by nested Horner accumulation; χ_j must have zero constant term.
template <RealScalar Real>
TruncatedSeries<Real> substitute(const TruncatedSeries<Real>& f_x, std::span<const TruncatedSeries<Real>> chi);

template <RealScalar Real>
TruncatedSeries<Real> partial(const TruncatedSeries<Real>& f, int j);

// Newton iteration, doubling the number of correct degrees per step.
template <RealScalar Real>
TruncatedSeries<Real> reciprocal(const TruncatedSeries<Real>& g);
template <RealScalar Real>
TruncatedSeries<Real> sqrt_series(const TruncatedSeries<Real>& g);

template <RealScalar Real>
TruncatedSeries<Real> homogeneous_part(const TruncatedSeries<Real>& g, int d);

// Same terms up to min(D, trunc_degree), relabelled with truncation degree D.
template <RealScalar Real>
TruncatedSeries<Real> with_trunc_degree(const TruncatedSeries<Real>& g, int trunc_degree);

// Coefficientwise conversion between working precisions.
template <RealScalar To, RealScalar From>
TruncatedSeries<To> convert(const TruncatedSeries<From>& g) {
  if constexpr (std::is_same_v<To, From>) {
    return g;
  } else {
    std::vector<std::pair<MultiIndex, std::complex<To>>> terms;
    for (const auto& [index, c] : g.terms()) terms.emplace_back(index, std::complex<To>(To(c.real()), To(c.imag())));
    return TruncatedSeries<To>::from_terms(g.num_vars(), g.trunc_degree(), terms);
  }
}

template <RealScalar Real>
std::complex<Real> evaluate(const TruncatedSeries<Real>& g, std::span<const std::complex<Real>> point);

// Largest coefficient magnitude over degrees [lo, hi].
template <RealScalar Real>
Real max_abs_coeff(const TruncatedSeries<Real>& g, int lo, int hi);

}  // namespace bseries
