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
#include <string>
#include <string_view>
#include <vector>

#include "bseries/errors.hpp"
#include "bseries/scalar.hpp"

namespace bseries {

// [0; q1, q2, …] with an eventually periodic tail of partial quotients.
struct ContinuedFraction {
  std::vector<int> preperiod;
  std::vector<int> period;

  // "3,3,[1]": preperiod before the bracket, period inside.
  static ContinuedFraction parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

// Closed form: the periodic tail is the positive root of a quadratic, the
// preperiod is folded on top of it.
template <RealScalar Real>
Real eval_cf(const ContinuedFraction& cf);

// One coordinate of a frequency vector, given as α/(2π).
class AngleSpec {
 public:
  static AngleSpec explicit_ratio(std::string text);
  static AngleSpec explicit_ratio(double value);
  static AngleSpec continued_fraction(ContinuedFraction cf);

  bool is_cf() const noexcept { return is_cf_; }
  const ContinuedFraction& cf() const noexcept { return cf_; }
  // Decimal text of α/(2π), parsed at the working precision.
  const std::string& ratio_text() const noexcept { return text_; }

  template <RealScalar Real>
  Real ratio() const;

  std::string to_string() const;

  friend bool operator==(const AngleSpec&, const AngleSpec&) = default;

 private:
  bool is_cf_ = false;
  ContinuedFraction cf_;
  std::string text_;
};

// Smallest |λ_j + λ_j⁻¹ − λ^m − λ^{−m}| found by a scan, with its witness.
struct DivisorScan {
  double value = 0;
  int j = 0;
  std::vector<int> m;
  int max_degree = 0;
};

enum class DivisorScope {
  // All m with ‖m‖₁ ≤ max_degree except ±e_j.
  all,
  // Only the harmonics of χ_j monomials: m_j odd, other components even.
  solver,
};

template <RealScalar Real>
struct FrequencyVector {
  int n = 0;
  std::vector<Real> ratios;  // α_j / (2π)
  std::vector<Real> alphas;
  std::vector<std::complex<Real>> lambdas;
  DivisorScan min_divisor_scan;
};

// 2cos α_j − 2cos(m·α).
template <RealScalar Real>
Real divisor(std::span<const Real> alphas, int j, std::span<const int> m);

template <RealScalar Real>
DivisorScan min_divisor(std::span<const Real> alphas, int max_degree, DivisorScope scope = DivisorScope::all);

template <RealScalar Real>
DivisorScan min_divisor(const FrequencyVector<Real>& fv, int max_degree, DivisorScope scope = DivisorScope::all) {
  return min_divisor<Real>(std::span<const Real>(fv.alphas), max_degree, scope);
}

// First harmonic (by increasing ‖m‖₁) of the given scope whose divisor is
// below floor; empty witness if none up to max_degree.
template <RealScalar Real>
DivisorScan first_small_divisor(std::span<const Real> alphas, int max_degree, DivisorScope scope, Real floor);

// Throws ConfigError for angles outside (0, π) or λ_j = λ_l^{±1}.
template <RealScalar Real>
FrequencyVector<Real> make_frequencies(std::span<const AngleSpec> specs, int scan_degree = 3);

}  // namespace bseries
