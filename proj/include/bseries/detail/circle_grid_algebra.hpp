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

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "bseries/series.hpp"

namespace bseries::detail {

// n = 1 only. A degree-d block g_d(z, z̄) is stored by its real values at
// z = r e^{iφ_m}, φ_m = 2πm/M, M odd and larger than every degree in use, so
// the d + 1 harmonics −d, −d+2, …, d never alias. Products are pointwise.
template <RealScalar Real>
class CircleGridAlgebra {
 public:
  using Block = std::vector<Real>;
  using Coefficient = std::pair<MultiIndex, std::complex<Real>>;

  CircleGridAlgebra(VariableRoles<Real> roles, int max_degree, Real radius)
      : roles_(std::move(roles)), max_degree_(max_degree), samples_(max_degree + 1) {
    if (roles_.n() != 1) throw StructuralError("circle grid kernel supports n = 1 only");
    if (samples_ % 2 == 0) ++samples_;
    cos_.resize(static_cast<std::size_t>(samples_));
    sin_.resize(static_cast<std::size_t>(samples_));
    for (int m = 0; m < samples_; ++m) {
      const Real phi = Real(2) * num::pi<Real>() * Real(m) / Real(samples_);
      cos_[static_cast<std::size_t>(m)] = num::cos(phi);
      sin_[static_cast<std::size_t>(m)] = num::sin(phi);
    }
    set_radius(radius);
  }

  const VariableRoles<Real>& roles() const noexcept { return roles_; }
  int samples() const noexcept { return samples_; }
  Real radius() const noexcept { return radius_; }

  void set_radius(Real r) {
    radius_ = r;
    rpow_.assign(static_cast<std::size_t>(max_degree_) + 1, Real(1));
    for (int d = 1; d <= max_degree_; ++d) rpow_[static_cast<std::size_t>(d)] = rpow_[static_cast<std::size_t>(d - 1)] * r;
  }

  Block constant(Real c) const {
    if (c == Real(0)) return {};
    return Block(static_cast<std::size_t>(samples_), c);
  }

  static bool is_zero(const Block& b) noexcept { return b.empty(); }

  class Accumulator {
   public:
    explicit Accumulator(const CircleGridAlgebra& alg) : size_(static_cast<std::size_t>(alg.samples_)) {}
    void add_product(const Block& a, const Block& b) {
      if (a.empty() || b.empty()) return;
      touch();
      for (std::size_t m = 0; m < size_; ++m) sum_[m] += a[m] * b[m];
    }
    void add_scaled(const Block& a, Real c) {
      if (a.empty() || c == Real(0)) return;
      touch();
      for (std::size_t m = 0; m < size_; ++m) sum_[m] += c * a[m];
    }
    Block finish() { return std::move(sum_); }

   private:
    void touch() {
      if (sum_.empty()) sum_.assign(size_, Real(0));
    }
    std::size_t size_;
    Block sum_;
  };

  // Harmonic h of the samples: (1/M) Σ_m b_m e^{−ihφ_m}.
  std::complex<Real> harmonic(const Block& b, int h) const {
    const int step = ((h % samples_) + samples_) % samples_;
    Real re = 0, im = 0;
    int idx = 0;
    for (int m = 0; m < samples_; ++m) {
      re += b[static_cast<std::size_t>(m)] * cos_[static_cast<std::size_t>(idx)];
      im -= b[static_cast<std::size_t>(m)] * sin_[static_cast<std::size_t>(idx)];
      idx += step;
      if (idx >= samples_) idx -= samples_;
    }
    return {re / Real(samples_), im / Real(samples_)};
  }

  Block rotate(const Block& b, int degree, int p) const {
    if (b.empty()) return {};
    std::vector<std::pair<int, std::complex<Real>>> spectrum;
    for (int h = -degree; h <= degree; h += 2) {
      const auto c = harmonic(b, h);
      spectrum.emplace_back(h, h == 0 ? c : c * num::unit(Real(h * p) * roles_.angle(0)));
    }
    return synthesize(spectrum);
  }

  std::vector<Coefficient> coefficients(const Block& b, int degree) const {
    std::vector<Coefficient> out;
    if (b.empty()) return out;
    const Real inv = Real(1) / rpow_[static_cast<std::size_t>(degree)];
    for (int h = -degree; h <= degree; h += 2) {
      const auto c = harmonic(b, h) * inv;
      out.emplace_back(MultiIndex({(degree + h) / 2, (degree - h) / 2}), c);
    }
    return out;
  }

  // Coefficients must be Hermitian; the imaginary part of the samples is dropped.
  Block from_coefficients(const std::vector<Coefficient>& coeffs, int degree) const {
    std::vector<std::pair<int, std::complex<Real>>> spectrum;
    const Real scale = rpow_[static_cast<std::size_t>(degree)];
    for (const auto& [index, value] : coeffs) {
      if (!is_negligible(value)) spectrum.emplace_back(index[0] - index[1], value * scale);
    }
    if (spectrum.empty()) return {};
    return synthesize(spectrum);
  }

  std::complex<Real> diagonal(const Block& b, std::span<const int> /*s*/, int degree) const {
    if (b.empty()) return 0;
    Real sum = 0;
    for (const auto& v : b) sum += v;
    return {sum / Real(samples_) / rpow_[static_cast<std::size_t>(degree)], Real(0)};
  }

  Real max_abs(const Block& b, int degree) const {
    Real best = 0;
    for (const auto& [index, c] : coefficients(b, degree)) best = std::max(best, num::abs(c));
    return best;
  }

  Real max_sample(const Block& b) const {
    Real best = 0;
    for (const auto& v : b) best = std::max(best, num::abs(v));
    return best;
  }

 private:
  Block synthesize(const std::vector<std::pair<int, std::complex<Real>>>& spectrum) const {
    Block out(static_cast<std::size_t>(samples_), Real(0));
    for (const auto& [h, c] : spectrum) {
      const int step = ((h % samples_) + samples_) % samples_;
      int idx = 0;
      for (int m = 0; m < samples_; ++m) {
        out[static_cast<std::size_t>(m)] +=
            c.real() * cos_[static_cast<std::size_t>(idx)] - c.imag() * sin_[static_cast<std::size_t>(idx)];
        idx += step;
        if (idx >= samples_) idx -= samples_;
      }
    }
    return out;
  }

  VariableRoles<Real> roles_;
  int max_degree_;
  int samples_;
  Real radius_ = 1;
  std::vector<Real> rpow_;
  std::vector<Real> cos_;
  std::vector<Real> sin_;
};

}  // namespace bseries::detail
