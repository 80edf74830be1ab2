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

#include "bseries/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "bseries/detail/circle_grid_algebra.hpp"
#include "bseries/detail/order_engine.hpp"
#include "bseries/detail/sparse_algebra.hpp"
#include "bseries/errors.hpp"

namespace bseries {

const char* kernel_name(KernelChoice k) {
  switch (k) {
    case KernelChoice::sparse:
      return "sparse";
    case KernelChoice::circle_grid:
      return "circle";
    default:
      return "auto";
  }
}

KernelChoice parse_kernel(std::string_view text) {
  if (text == "auto") return KernelChoice::automatic;
  if (text == "sparse") return KernelChoice::sparse;
  if (text == "circle" || text == "circle_grid") return KernelChoice::circle_grid;
  throw ConfigError("kernel", "expected auto, sparse or circle, got '" + std::string(text) + "'");
}

double SolverConfig::effective_divisor_floor() const {
  if (divisor_floor) return *divisor_floor;
  return precision == Precision::extended ? 1e-25 : 1e-10;
}

std::vector<double> SolverConfig::effective_gauge() const {
  return gauge_a.empty() ? std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), 1.0) : gauge_a;
}

void SolverConfig::validate() const {
  if (n < 1 || n > 8) throw ConfigError("n", "must be between 1 and 8");
  if (K < 1 || K > 2000) throw ConfigError("K", "must be between 1 and 2000");
  if (2 * K >= (1 << std::min(64 / (2 * n), 30))) throw ConfigError("K", "too large for " + std::to_string(n) + " dimensions");
  if (!std::isfinite(f0) || !(f0 < 0)) throw ConfigError("f0", "must be a finite negative number");
  if (!gauge_a.empty() && static_cast<int>(gauge_a.size()) != n) {
    throw ConfigError("gauge_a", "needs exactly n = " + std::to_string(n) + " entries");
  }
  for (double a : gauge_a) {
    if (!std::isfinite(a) || !(a > 0)) throw ConfigError("gauge_a", "entries must be positive");
  }
  const double floor = effective_divisor_floor();
  if (!std::isfinite(floor) || !(floor > 0)) throw ConfigError("divisor_floor", "must be positive");
  if (!(resonance_tolerance > 0)) throw ConfigError("resonance_tolerance", "must be positive");
  if (kernel == KernelChoice::circle_grid && n != 1) throw ConfigError("kernel", "circle grid kernel needs n = 1");
}

// ---------------------------------------------------------------------------

template <RealScalar Real>
SolutionState<Real>::SolutionState(SolverConfig cfg, FrequencyVector<Real> fv)
    : config(std::move(cfg)),
      frequencies(std::move(fv)),
      f0(Real(config.f0)),
      f(config.n, 2 * config.K) {
  for (double a : config.effective_gauge()) gauge_a.push_back(Real(a));
  for (int j = 0; j < config.n; ++j) chi.emplace_back(2 * config.n, 2 * config.K);
}

template <RealScalar Real>
Real SolutionState<Real>::F(const std::vector<int>& s) const {
  std::vector<int> e(s);
  for (auto& v : e) v *= 2;
  return f.coeff(MultiIndex(std::move(e))).real();
}

template <RealScalar Real>
std::vector<std::pair<std::vector<int>, Real>> SolutionState<Real>::f_form(int k) const {
  std::vector<std::pair<std::vector<int>, Real>> out;
  for (auto& s : detail::compositions(config.n, k)) {
    const Real value = F(s);
    out.emplace_back(std::move(s), value);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <RealScalar Real>
Real central_binomial(int s) {
  Real c = 1;
  for (int i = 1; i <= s; ++i) c = c * Real(s + i) / Real(i);
  return c;
}

template <RealScalar Real>
std::unique_ptr<detail::OrderEngine<Real>> make_engine(const SolverConfig& config, const FrequencyVector<Real>& fv) {
  auto roles = VariableRoles<Real>::standard(fv.lambdas);
  const bool circle = config.kernel == KernelChoice::circle_grid ||
                      (config.kernel == KernelChoice::automatic && config.n == 1);
  if (circle) {
    const auto gauge = config.effective_gauge();
    const Real radius = Real(1) / (Real(4) * Real(*std::max_element(gauge.begin(), gauge.end())));
    detail::CircleGridAlgebra<Real> alg(std::move(roles), 2 * config.K, radius);
    return std::make_unique<detail::DegreeStreams<Real, detail::CircleGridAlgebra<Real>>>(std::move(alg), config.n, config.K);
  }
  detail::SparseAlgebra<Real> alg(std::move(roles), 2 * config.K);
  return std::make_unique<detail::DegreeStreams<Real, detail::SparseAlgebra<Real>>>(std::move(alg), config.n, config.K);
}

std::string describe(const std::vector<int>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + ")";
}

}  // namespace

template <RealScalar Real>
OrderSolver<Real>::OrderSolver(const SolverConfig& config, const FrequencyVector<Real>& fv)
    : config_((config.validate(), config)), frequencies_(fv), state_(config, fv) {
  if (fv.n != config_.n) throw ConfigError("n", "frequency vector has " + std::to_string(fv.n) + " entries");
  engine_ = make_engine(config_, frequencies_);
}

template <RealScalar Real>
OrderSolver<Real>::~OrderSolver() = default;
template <RealScalar Real>
OrderSolver<Real>::OrderSolver(OrderSolver&&) noexcept = default;
template <RealScalar Real>
OrderSolver<Real>& OrderSolver<Real>::operator=(OrderSolver&&) noexcept = default;

template <RealScalar Real>
int OrderSolver<Real>::order() const noexcept {
  return state_.order;
}

template <RealScalar Real>
void OrderSolver<Real>::init_low_order() {
  const int n = config_.n;
  const Real f0 = state_.f0;
  std::vector<Real> f2;
  for (int j = 0; j < n; ++j) {
    const Real lam_sum = Real(2) * num::cos(frequencies_.alphas[static_cast<std::size_t>(j)]);
    f2.push_back((Real(2) - lam_sum) / (Real(-8) * f0));
  }
  engine_->init(state_.gauge_a, f0, f2);

  state_.f.add_term(MultiIndex::zero(n), f0);
  for (int j = 0; j < n; ++j) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(j)] = 2;
    state_.f.add_term(MultiIndex(std::move(e)), f2[static_cast<std::size_t>(j)]);
    const std::complex<Real> a(state_.gauge_a[static_cast<std::size_t>(j)]);
    state_.chi[static_cast<std::size_t>(j)].add_term(MultiIndex::unit(2 * n, j), a);
    state_.chi[static_cast<std::size_t>(j)].add_term(MultiIndex::unit(2 * n, n + j), a);
  }
  OrderDiagnostics diag;
  diag.k = 1;
  diag.fermat_residual = num::to_double(engine_->fermat_residual(1));
  diag.normalization_residual = num::to_double(engine_->normalization_residual(1));
  diag.min_divisor = frequencies_.min_divisor_scan.value;
  state_.diagnostics.push_back(diag);
  state_.order = 1;
  pending_f_ = false;
}

template <RealScalar Real>
void OrderSolver<Real>::solve_f_order(int k) {
  if (k != state_.order + 1 || pending_f_ || k > config_.K) {
    throw std::logic_error("solve_f_order(" + std::to_string(k) + ") out of sequence");
  }
  const int n = config_.n;
  const auto diagonal = engine_->normalization_diagonal(k);
  f_scale_ = 0;
  const auto list = detail::compositions(n, k);
  std::vector<Real> F;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& s = list[i];
    const auto c = diagonal[i];
    if (num::abs(c.imag()) > Real(1e-9) * num::abs(c)) {
      throw ConsistencyError("order " + std::to_string(k) + ": imaginary part in the normalization coefficient at s = " +
                             describe(s));
    }
    Real weight = 2;
    for (int j = 0; j < n; ++j) {
      const int sj = s[static_cast<std::size_t>(j)];
      Real a2 = 1;
      for (int e = 0; e < 2 * sj; ++e) a2 *= state_.gauge_a[static_cast<std::size_t>(j)];
      weight *= a2 * central_binomial<Real>(sj);
    }
    F.push_back(c.real() / weight);
    f_scale_ = std::max(f_scale_, num::abs(c.real()));
  }
  engine_->set_f_order(k, F);
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::vector<int> e(list[i]);
    for (auto& v : e) v *= 2;
    state_.f.add_term(MultiIndex(std::move(e)), F[i]);
  }
  pending_f_ = true;
}

template <RealScalar Real>
void OrderSolver<Real>::solve_chi_order(int k) {
  if (k != state_.order + 1 || !pending_f_) throw std::logic_error("solve_chi_order(" + std::to_string(k) + ") out of sequence");
  const int n = config_.n;
  const int degree = 2 * k - 1;
  const Real floor = Real(config_.effective_divisor_floor());
  const Real l0 = Real(2) * num::abs(state_.f0);
  const auto roles = state_.roles();
  const auto residual = engine_->reflection_residual(k);

  OrderDiagnostics diag;
  diag.k = k;
  diag.min_divisor = -1;
  std::vector<std::vector<typename detail::OrderEngine<Real>::Coefficient>> solution(static_cast<std::size_t>(n));
  Real chi_scale = 0;
  for (int j = 0; j < n; ++j) {
    Real resonant = 0;
    std::map<MultiIndex, std::complex<Real>> chi;
    for (const auto& [index, P] : residual[static_cast<std::size_t>(j)]) {
      const auto m = roles.harmonic(index);
      bool parity_ok = true, gauge = true;
      for (int i = 0; i < n; ++i) {
        auto [z, zbar] = roles.pair(i);
        const bool odd = (index[z] + index[zbar]) % 2 != 0;
        if (odd != (i == j)) parity_ok = false;
        if (std::abs(m[static_cast<std::size_t>(i)]) != (i == j ? 1 : 0)) gauge = false;
      }
      if (!parity_ok) continue;
      if (gauge) {
        const Real scale = resonant_scale(index, j);
        chi_scale = std::max(chi_scale, scale);
        resonant = std::max(resonant, num::abs(P) / scale);
        continue;
      }
      const Real div = divisor<Real>(frequencies_.alphas, j, m);
      const double mag = num::to_double(num::abs(div));
      if (num::abs(div) < floor) throw SmallDivisorError(j, m, degree, mag);
      if (diag.min_divisor < 0 || mag < diag.min_divisor) diag.min_divisor = mag;
      chi[index] = -l0 * P / div;
    }
    const double rel = num::to_double(resonant);
    diag.resonant_residual = std::max(diag.resonant_residual, rel);
    if (rel > config_.resonance_tolerance) {
      throw ConsistencyError("order " + std::to_string(k) + ", coordinate " + std::to_string(j + 1) +
                             ": resonant residual " + num::to_string(rel, 3) + " relative exceeds tolerance");
    }
    // Hermitian symmetry χ_{l', l''} = conj χ_{l'', l'}.
    auto& out = solution[static_cast<std::size_t>(j)];
    for (const auto& [index, value] : chi) {
      std::vector<int> swapped(index.exponents());
      for (int i = 0; i < n; ++i) {
        auto [z, zbar] = roles.pair(i);
        std::swap(swapped[static_cast<std::size_t>(z)], swapped[static_cast<std::size_t>(zbar)]);
      }
      auto it = chi.find(MultiIndex(std::move(swapped)));
      const auto partner = it == chi.end() ? std::complex<Real>(0) : std::conj(it->second);
      out.emplace_back(index, (value + partner) / Real(2));
    }
  }
  engine_->set_chi_order(k, solution);
  for (int j = 0; j < n; ++j) {
    for (const auto& [index, value] : solution[static_cast<std::size_t>(j)]) {
      state_.chi[static_cast<std::size_t>(j)].add_term(index, value);
    }
  }
  if (diag.min_divisor < 0) diag.min_divisor = 0;
  const Real fermat = engine_->fermat_residual(k);
  diag.fermat_residual = num::to_double(chi_scale > Real(0) ? fermat / chi_scale : fermat);
  const Real norm = engine_->normalization_residual(k);
  diag.normalization_residual = num::to_double(f_scale_ > Real(0) ? norm / f_scale_ : norm);
  state_.diagnostics.push_back(diag);
  state_.order = k;
  pending_f_ = false;
}

// Size of the f^(2k) contribution 4f0 ∂_j f^(2k)∘χ^(1) / (2|f0|) at the resonant
// monomial: the resonant residual measures how far the normalization route and
// the resonant route disagree on F_{2s}.
template <RealScalar Real>
Real OrderSolver<Real>::resonant_scale(const MultiIndex& index, int j) const {
  const int n = config_.n;
  const auto roles = state_.roles();
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto [z, zbar] = roles.pair(i);
    s[static_cast<std::size_t>(i)] = std::max(index[z], index[zbar]);
  }
  const int sj = s[static_cast<std::size_t>(j)];
  Real scale = Real(4) * Real(sj) * num::abs(state_.F(s));
  for (int i = 0; i < n; ++i) {
    const int si = s[static_cast<std::size_t>(i)];
    const int power = i == j ? 2 * si - 1 : 2 * si;
    for (int e = 0; e < power; ++e) scale *= state_.gauge_a[static_cast<std::size_t>(i)];
    // C(2s−1, s) = C(2s, s)/2.
    scale *= i == j ? central_binomial<Real>(si) / Real(2) : central_binomial<Real>(si);
  }
  return scale > Real(0) ? scale : Real(1);
}

template <RealScalar Real>
SolutionState<Real> OrderSolver<Real>::state() const {
  return state_;
}

template <RealScalar Real>
SolutionState<Real> solve(const SolverConfig& config, const FrequencyVector<Real>& fv) {
  config.validate();
  if (fv.n != config.n) throw ConfigError("n", "frequency vector has " + std::to_string(fv.n) + " entries");
  const Real floor = Real(config.effective_divisor_floor());
  const auto hit = first_small_divisor<Real>(fv.alphas, 2 * config.K - 1, DivisorScope::solver, floor);
  if (!hit.m.empty()) {
    int degree = 0;
    for (int v : hit.m) degree += std::abs(v);
    throw SmallDivisorError(hit.j, hit.m, degree, hit.value);
  }
  OrderSolver<Real> solver(config, fv);
  solver.init_low_order();
  for (int k = 2; k <= config.K; ++k) {
    solver.solve_f_order(k);
    solver.solve_chi_order(k);
  }
  return solver.state();
}

template struct SolutionState<double>;
template struct SolutionState<Quad>;
template class OrderSolver<double>;
template class OrderSolver<Quad>;
template SolutionState<double> solve<double>(const SolverConfig&, const FrequencyVector<double>&);
template SolutionState<Quad> solve<Quad>(const SolverConfig&, const FrequencyVector<Quad>&);

}  // namespace bseries
