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

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bseries/frequency.hpp"
#include "bseries/scalar.hpp"
#include "bseries/series.hpp"

namespace bseries {

enum class GaugeRule { zero };

enum class KernelChoice {
  automatic,    // circle grid for n = 1, sparse otherwise
  sparse,
  circle_grid,  // n = 1 only
};

const char* kernel_name(KernelChoice k);
KernelChoice parse_kernel(std::string_view text);

struct SolverConfig {
  int n = 1;
  int K = 4;
  double f0 = -0.5;
  std::vector<double> gauge_a;  // empty means all ones
  std::optional<double> divisor_floor;
  Precision precision = Precision::binary64;
  GaugeRule gauge_rule = GaugeRule::zero;
  KernelChoice kernel = KernelChoice::automatic;
  // Resonant-monomial residuals above this (relative) raise ConsistencyError.
  double resonance_tolerance = 1e-8;

  double effective_divisor_floor() const;
  std::vector<double> effective_gauge() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct OrderDiagnostics {
  int k = 0;
  // Largest resonant residual |P_{±e_j}| relative to the f^(2k) term at that monomial.
  double resonant_residual = 0;
  // Largest |E_j| coefficient at degree 2k−1 after the χ update, relative to
  // the largest f^(2k) term of the reflection equation.
  double fermat_residual = 0;
  // Largest diagonal coefficient of ⟨L⟩ at degree 2k after the χ update,
  // relative to the largest f^(2k) term of the normalization.
  double normalization_residual = 0;
  double min_divisor = 0;
};

template <RealScalar Real>
struct SolutionState {
  SolverConfig config;
  FrequencyVector<Real> frequencies;
  Real f0 = Real(-0.5);
  std::vector<Real> gauge_a;
  // f(x) through degree 2K in n variables; only even monomials, real coefficients.
  TruncatedSeries<Real> f;
  // χ_j in the 2n variables (z, z̄), odd degrees through 2K − 1, truncated at 2K.
  std::vector<TruncatedSeries<Real>> chi;
  std::vector<OrderDiagnostics> diagnostics;
  // Highest order k for which f^(2k) and χ^(2k−1) are present.
  int order = 0;

  SolutionState(SolverConfig cfg, FrequencyVector<Real> fv);

  VariableRoles<Real> roles() const { return VariableRoles<Real>::standard(frequencies.lambdas); }
  // F_{2s}: coefficient of x^{2s}.
  Real F(const std::vector<int>& s) const;
  // Coefficients of the degree-2k form, indexed by s with ‖s‖ = k.
  std::vector<std::pair<std::vector<int>, Real>> f_form(int k) const;
  // n = 1 shorthand: f_{2k}.
  Real f_coefficient(int k) const { return F({k}); }
};

// Re-expresses a state at another precision. Frequencies and coefficients are
// converted exactly when widening, so residuals of a binary64 solution can be
// evaluated without binary64 roundoff.
template <RealScalar To, RealScalar From>
SolutionState<To> convert_state(const SolutionState<From>& state) {
  FrequencyVector<To> fv;
  fv.n = state.frequencies.n;
  fv.min_divisor_scan = state.frequencies.min_divisor_scan;
  for (std::size_t j = 0; j < state.frequencies.alphas.size(); ++j) {
    fv.ratios.push_back(To(state.frequencies.ratios[j]));
    fv.alphas.push_back(To(state.frequencies.alphas[j]));
    fv.lambdas.push_back(num::unit(fv.alphas.back()));
  }
  SolutionState<To> out(state.config, std::move(fv));
  out.f0 = To(state.f0);
  out.gauge_a.clear();
  for (const auto& a : state.gauge_a) out.gauge_a.push_back(To(a));
  out.f = convert<To>(state.f);
  for (std::size_t j = 0; j < state.chi.size(); ++j) out.chi[j] = convert<To>(state.chi[j]);
  out.diagnostics = state.diagnostics;
  out.order = state.order;
  return out;
}

namespace detail {
template <RealScalar Real>
class OrderEngine;
}

// Order-by-order construction: init_low_order(), then for k = 2..K
// solve_f_order(k) followed by solve_chi_order(k).
template <RealScalar Real>
class OrderSolver {
 public:
  OrderSolver(const SolverConfig& config, const FrequencyVector<Real>& fv);
  ~OrderSolver();
  OrderSolver(OrderSolver&&) noexcept;
  OrderSolver& operator=(OrderSolver&&) noexcept;

  void init_low_order();
  void solve_f_order(int k);
  void solve_chi_order(int k);
  int order() const noexcept;
  // Exports the forms computed so far.
  SolutionState<Real> state() const;

 private:
  Real resonant_scale(const MultiIndex& index, int j) const;

  SolverConfig config_;
  FrequencyVector<Real> frequencies_;
  SolutionState<Real> state_;
  std::unique_ptr<detail::OrderEngine<Real>> engine_;
  bool pending_f_ = false;
  Real f_scale_ = 0;
};

// Runs the full construction through order config.K. Throws SmallDivisorError
// before any work if a χ divisor up to degree 2K − 1 is below the floor.
template <RealScalar Real>
SolutionState<Real> solve(const SolverConfig& config, const FrequencyVector<Real>& fv);

}  // namespace bseries
