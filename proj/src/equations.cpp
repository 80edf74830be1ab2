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

#include "bseries/equations.hpp"

#include <algorithm>
#include <string>

#include "bseries/errors.hpp"

namespace bseries {

namespace {

template <RealScalar Real>
using Series = TruncatedSeries<Real>;

template <RealScalar Real>
Series<Real> constant_like(const Series<Real>& g, Real c) {
  return Series<Real>::constant(g.num_vars(), g.trunc_degree(), std::complex<Real>(c));
}

template <RealScalar Real>
Real max_diagonal(const Series<Real>& g, const VariableRoles<Real>& roles, int lo, int hi) {
  return max_abs_coeff(average(g, roles), lo, hi);
}

}  // namespace

template <RealScalar Real>
ChordSeries<Real> chord_series(const SolutionState<Real>& state) {
  const auto roles = state.roles();
  const int n = state.config.n;
  ChordSeries<Real> out{.tm_chi = {},
                        .tp_chi = {},
                        .f_chi = substitute(state.f, std::span<const Series<Real>>(state.chi)),
                        .tm_f = Series<Real>(2 * n, state.f.trunc_degree()),
                        .tp_f = Series<Real>(2 * n, state.f.trunc_degree()),
                        .grad = {}};
  for (const auto& chi : state.chi) {
    out.tm_chi.push_back(tau(chi, roles, TauSign::minus));
    out.tp_chi.push_back(tau(chi, roles, TauSign::plus));
  }
  out.tm_f = tau(out.f_chi, roles, TauSign::minus);
  out.tp_f = tau(out.f_chi, roles, TauSign::plus);
  for (int j = 0; j < n; ++j) {
    out.grad.push_back(substitute(partial(state.f, j), std::span<const Series<Real>>(state.chi)));
  }
  return out;
}

template <RealScalar Real>
Series<Real> normalization_defect(const SolutionState<Real>& state) {
  const auto roles = state.roles();
  const auto cs = chord_series(state);
  Series<Real> sq = cs.tm_f * cs.tm_f;
  for (const auto& d : cs.tm_chi) sq = sq + d * d;
  const Series<Real> length = sqrt_series(sq);
  return average(length, roles) - constant_like(length, Real(2) * num::abs(state.f0));
}

template <RealScalar Real>
double normalization_residual(const SolutionState<Real>& state) {
  const auto defect = normalization_defect(state);
  return num::to_double(max_diagonal(defect, state.roles(), 0, defect.trunc_degree()));
}

template <RealScalar Real>
std::vector<Series<Real>> fermat_series(const SolutionState<Real>& state) {
  const auto cs = chord_series(state);
  const auto roles = state.roles();
  Series<Real> sq_minus = cs.tm_f * cs.tm_f;
  for (const auto& d : cs.tm_chi) sq_minus = sq_minus + d * d;
  const Series<Real> inv_minus = reciprocal(sqrt_series(sq_minus));
  const Series<Real> inv_plus = rotate(inv_minus, roles, 1);
  std::vector<Series<Real>> out;
  for (std::size_t j = 0; j < state.chi.size(); ++j) {
    const Series<Real> left = cs.tm_chi[j] + cs.tm_f * cs.grad[j];
    const Series<Real> right = cs.tp_chi[j] + cs.tp_f * cs.grad[j];
    out.push_back(left * inv_minus + right * inv_plus);
  }
  return out;
}

template <RealScalar Real>
double fermat_series_residual(const SolutionState<Real>& state) {
  Real worst = 0;
  for (const auto& e : fermat_series(state)) worst = std::max(worst, max_abs_coeff(e, 0, 2 * state.config.K - 1));
  return num::to_double(worst);
}

template <RealScalar Real>
double degree2_sanity(const SolutionState<Real>& state, double tolerance) {
  SolutionState<Real> low = state;
  low.f = with_trunc_degree(state.f, 2);
  for (auto& chi : low.chi) chi = with_trunc_degree(chi, 2);
  const auto roles = low.roles();
  Real worst = max_diagonal(normalization_defect(low), roles, 0, 2);
  for (const auto& e : fermat_series(low)) worst = std::max(worst, max_abs_coeff(e, 0, 1));
  const double value = num::to_double(worst);
  if (!(value < tolerance)) {
    throw ConsistencyError("degree-2 sanity residual " + num::to_string(value, 3) + " exceeds " +
                           num::to_string(tolerance, 3));
  }
  return value;
}

template <RealScalar Real>
std::vector<Series<Real>> polynomial_equations(const SolutionState<Real>& state) {
  const auto cs = chord_series(state);
  const int n = state.config.n;
  const auto& A = cs.tm_chi;
  const auto& C = cs.tp_chi;
  const auto& B = cs.tm_f;
  const auto& D = cs.tp_f;
  const auto& s = cs.grad;
  const Series<Real> one = constant_like(B, Real(1));
  const Series<Real> BD = B * D;
  std::vector<Series<Real>> out;
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    Series<Real> eq = scale(s[uj] * (BD - A[uj] * C[uj]), std::complex<Real>(2)) +
                      (one - s[uj] * s[uj]) * (A[uj] * D + C[uj] * B);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const auto ui = static_cast<std::size_t>(i);
      eq = eq - s[ui] * (A[uj] * C[ui] + A[ui] * C[uj]);
      eq = eq - s[uj] * s[ui] * (B * C[ui] + A[ui] * D);
    }
    out.push_back(std::move(eq));
  }
  return out;
}

#define BSERIES_INSTANTIATE(R)                                                                  \
  template ChordSeries<R> chord_series<R>(const SolutionState<R>&);                             \
  template Series<R> normalization_defect<R>(const SolutionState<R>&);                          \
  template double normalization_residual<R>(const SolutionState<R>&);                           \
  template std::vector<Series<R>> fermat_series<R>(const SolutionState<R>&);                    \
  template double fermat_series_residual<R>(const SolutionState<R>&);                           \
  template double degree2_sanity<R>(const SolutionState<R>&, double);                           \
  template std::vector<Series<R>> polynomial_equations<R>(const SolutionState<R>&);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
