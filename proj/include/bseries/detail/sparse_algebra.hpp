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

#include <algorithm>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "bseries/series.hpp"

namespace bseries::detail {

// Homogeneous blocks as sorted sparse term lists; works for any n.
template <RealScalar Real>
class SparseAlgebra {
 public:
  using Block = HomogeneousBlock<Real>;
  using Coefficient = std::pair<MultiIndex, std::complex<Real>>;

  SparseAlgebra(VariableRoles<Real> roles, int max_degree)
      : roles_(std::move(roles)), packing_(roles_.num_vars(), max_degree) {}

  const VariableRoles<Real>& roles() const noexcept { return roles_; }

  Block constant(Real c) const {
    if (c == Real(0)) return {};
    return {Term<Real>{0, std::complex<Real>(c)}};
  }

  static bool is_zero(const Block& b) noexcept { return b.empty(); }

  class Accumulator {
   public:
    explicit Accumulator(const SparseAlgebra&) {}
    void add_product(const Block& a, const Block& b) {
      if (!a.empty() && !b.empty()) acc_.add_product(a, b);
    }
    void add_scaled(const Block& a, Real c) {
      if (!a.empty() && c != Real(0)) acc_.add_scaled(a, std::complex<Real>(c));
    }
    Block finish() { return acc_.finish(); }

   private:
    kernel::BlockAccumulator<Real> acc_;
  };

  Block rotate(const Block& b, int /*degree*/, int p) const {
    Block out;
    out.reserve(b.size());
    for (const auto& t : b) {
      Real phase = 0;
      for (int j = 0; j < roles_.n(); ++j) {
        auto [z, zbar] = roles_.pair(j);
        const int m = packing_.exponent(t.key, z) - packing_.exponent(t.key, zbar);
        if (m != 0) phase += Real(p * m) * roles_.angle(j);
      }
      out.push_back(Term<Real>{t.key, phase == Real(0) ? t.value : t.value * num::unit(phase)});
    }
    return out;
  }

  std::vector<Coefficient> coefficients(const Block& b, int /*degree*/) const {
    std::vector<Coefficient> out;
    out.reserve(b.size());
    for (const auto& t : b) out.emplace_back(packing_.unpack(t.key), t.value);
    return out;
  }

  Block from_coefficients(const std::vector<Coefficient>& coeffs, int /*degree*/) const {
    Block out;
    out.reserve(coeffs.size());
    for (const auto& [index, value] : coeffs) {
      if (!is_negligible(value)) out.push_back(Term<Real>{packing_.pack(index), value});
    }
    std::sort(out.begin(), out.end(), [](const Term<Real>& x, const Term<Real>& y) { return x.key < y.key; });
    return out;
  }

  // Coefficient of Π_j (z_j z̄_j)^{s_j}.
  std::complex<Real> diagonal(const Block& b, std::span<const int> s, int /*degree*/) const {
    std::vector<int> e(static_cast<std::size_t>(roles_.num_vars()), 0);
    for (int j = 0; j < roles_.n(); ++j) {
      auto [z, zbar] = roles_.pair(j);
      e[static_cast<std::size_t>(z)] = s[static_cast<std::size_t>(j)];
      e[static_cast<std::size_t>(zbar)] = s[static_cast<std::size_t>(j)];
    }
    const std::uint64_t key = packing_.pack(MultiIndex(std::move(e)));
    auto it = std::lower_bound(b.begin(), b.end(), key, [](const Term<Real>& t, std::uint64_t k) { return t.key < k; });
    return (it != b.end() && it->key == key) ? it->value : std::complex<Real>(0);
  }

  Real max_abs(const Block& b, int /*degree*/) const {
    Real best = 0;
    for (const auto& t : b) best = std::max(best, num::abs(t.value));
    return best;
  }

 private:
  VariableRoles<Real> roles_;
  MonomialPacking packing_;
};

}  // namespace bseries::detail
