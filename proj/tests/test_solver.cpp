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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "bseries/equations.hpp"
#include "bseries/solution_io.hpp"
#include "bseries/solver.hpp"

using namespace bseries;
using C = std::complex<double>;

namespace {

// Dense polynomials in (z, z̄) truncated at a fixed degree, written from scratch
// so that the oracle shares no code with the library.
struct Poly {
  int trunc;
  std::map<std::pair<int, int>, C> c;

  explicit Poly(int d) : trunc(d) {}
  static Poly constant(int d, C v) {
    Poly p(d);
    p.c[{0, 0}] = v;
    return p;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [k, v] : o.c) r.c[k] += v;
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * C(-1); }
  Poly operator*(C s) const {
    Poly r = *this;
    for (auto& [k, v] : r.c) v *= s;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r(trunc);
    for (const auto& [k1, v1] : c) {
      for (const auto& [k2, v2] : o.c) {
        if (k1.first + k1.second + k2.first + k2.second <= trunc) r.c[{k1.first + k2.first, k1.second + k2.second}] += v1 * v2;
      }
    }
    return r;
  }
  // p(λ^power z, λ^-power z̄)
  Poly rotated(C lambda, int power) const {
    Poly r = *this;
    for (auto& [k, v] : r.c) v *= std::pow(lambda, power * (k.first - k.second));
    return r;
  }
};

// Even boundary function f(x) = Σ F[i] x^{2i} and its derivative composed with p.
Poly compose(const std::vector<double>& F, const Poly& p) {
  Poly out = Poly::constant(p.trunc, F[0]);
  const Poly p2 = p * p;
  Poly power = Poly::constant(p.trunc, 1);
  for (std::size_t i = 1; i < F.size(); ++i) {
    power = power * p2;
    out = out + power * C(F[i]);
  }
  return out;
}

Poly compose_derivative(const std::vector<double>& F, const Poly& p) {
  Poly out(p.trunc);
  const Poly p2 = p * p;
  Poly power = p;  // x^{2i−1}
  for (std::size_t i = 1; i < F.size(); ++i) {
    out = out + power * C(2.0 * static_cast<double>(i) * F[i]);
    power = power * p2;
  }
  return out;
}

// Reflection at b = χ(z) between a = χ(ρ⁻¹z) on the upper sheet and c = χ(ρz):
// collinearity of the reflected incoming chord with the outgoing chord.
Poly reflection_equation(const std::vector<double>& F, const Poly& chi, C lambda) {
  const Poly a = chi.rotated(lambda, -1), c = chi.rotated(lambda, 1);
  const Poly A = chi - a, Cc = chi - c;
  const Poly fb = compose(F, chi);
  const Poly B = compose(F, a) + fb, D = fb + compose(F, c);
  const Poly s = compose_derivative(F, chi);
  const Poly one = Poly::constant(chi.trunc, 1);
  return (s * C(2)) * (B * D - A * Cc) + (one - s * s) * (A * D + B * Cc);
}

struct OracleSolution {
  std::vector<double> F;
  Poly chi;
  double worst_residual = 0;
};

// Order by order: at degree 2k−1 the unknowns are F_{2k} and the non-gauge
// coefficients of χ^(2k−1) (Hermitian, so one complex unknown per pair a > b).
// The degree-(2k−1) part of the equation is affine in them; least squares.
OracleSolution oracle_solve(double f0, double alpha, int K) {
  const C lambda = std::polar(1.0, alpha);
  const int D = 2 * K - 1;
  OracleSolution sol{{f0}, Poly(D)};
  sol.chi.c[{1, 0}] = 1;
  sol.chi.c[{0, 1}] = 1;
  for (int k = 1; k <= K; ++k) {
    const int d = 2 * k - 1;
    std::vector<std::pair<int, int>> pairs;
    if (k > 1) {
      for (int a = d; a > d - a; --a) {
        if (a - (d - a) != 1) pairs.emplace_back(a, d - a);
      }
    }
    const int unknowns = 1 + 2 * static_cast<int>(pairs.size());
    auto residual = [&](const Eigen::VectorXd& u) {
      std::vector<double> F = sol.F;
      F.push_back(u[0]);
      Poly chi = sol.chi;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const C v(u[1 + 2 * i], u[2 + 2 * i]);
        chi.c[pairs[i]] = v;
        chi.c[{pairs[i].second, pairs[i].first}] = std::conj(v);
      }
      const Poly e = reflection_equation(F, chi, lambda);
      Eigen::VectorXd r(2 * (d + 1));
      for (int a = 0; a <= d; ++a) {
        const auto it = e.c.find({a, d - a});
        const C v = it == e.c.end() ? C(0) : it->second;
        r[2 * a] = v.real();
        r[2 * a + 1] = v.imag();
      }
      return r;
    };
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(unknowns);
    const Eigen::VectorXd r0 = residual(zero);
    Eigen::MatrixXd J(r0.size(), unknowns);
    for (int i = 0; i < unknowns; ++i) {
      Eigen::VectorXd e = zero;
      e[i] = 1;
      J.col(i) = residual(e) - r0;
    }
    const auto qr = J.colPivHouseholderQr();
    REQUIRE(qr.rank() == unknowns);
    const Eigen::VectorXd u = qr.solve(-r0);
    sol.worst_residual = std::max(sol.worst_residual, residual(u).cwiseAbs().maxCoeff());
    sol.F.push_back(u[0]);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const C v(u[1 + 2 * i], u[2 + 2 * i]);
      sol.chi.c[pairs[i]] = v;
      sol.chi.c[{pairs[i].second, pairs[i].first}] = std::conj(v);
    }
  }
  return sol;
}

template <RealScalar Real = double>
FrequencyVector<Real> freqs(std::vector<AngleSpec> specs, int K = 10) {
  return make_frequencies<Real>(specs, 2 * K - 1);
}

std::vector<AngleSpec> reference_pair() {
  return {AngleSpec::continued_fraction(ContinuedFraction::parse("3,3,[1]")),
          AngleSpec::continued_fraction(ContinuedFraction::parse("2,5,[2]"))};
}

SolverConfig config(int n, int K, std::vector<double> gauge = {}) {
  SolverConfig c;
  c.n = n;
  c.K = K;
  c.gauge_a = std::move(gauge);
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void check_f_close(const SolutionState<double>& a, const SolutionState<double>& b, double tol,
                   bool swap_indices = false) {
  for (int k = 0; k <= a.order; ++k) {
    for (const auto& [s, value] : a.f_form(k)) {
      std::vector<int> t = s;
      if (swap_indices) std::reverse(t.begin(), t.end());
      CHECK(rel(value, b.F(t)) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("lowest order") {
  const auto quarter = freqs({AngleSpec::explicit_ratio(0.25)}, 1);
  const auto state = solve(config(1, 1), quarter);
  CHECK(state.f_coefficient(0) == -0.5);
  CHECK(state.f_coefficient(1) == doctest::Approx(0.5).epsilon(1e-15));

  const auto near_pi = solve(config(1, 1), freqs({AngleSpec::explicit_ratio(0.49999)}, 1));
  CHECK(near_pi.f_coefficient(1) == doctest::Approx(1.0).epsilon(1e-8));

  const auto pair = freqs(reference_pair(), 1);
  const auto s2 = solve(config(2, 1), pair);
  CHECK(s2.F({1, 0}) == doctest::Approx((1 - std::cos(pair.alphas[0])) / 2).epsilon(1e-15));
  CHECK(s2.F({0, 1}) == doctest::Approx((1 - std::cos(pair.alphas[1])) / 2).epsilon(1e-15));
}

TEST_CASE("degree-2 sanity") {
  auto state = solve(config(1, 3), freqs({AngleSpec::explicit_ratio(0.38)}, 3));
  CHECK(degree2_sanity(state) < 1e-12);
  const auto pair = solve(config(2, 3), freqs(reference_pair(), 3));
  CHECK(degree2_sanity(pair) < 1e-12);

  state.f.add_term(MultiIndex({2}), 1e-3);
  CHECK_THROWS_AS(degree2_sanity(state), ConsistencyError);
  const double defect = degree2_sanity(state, 1.0);
  CHECK(defect > 1e-4);
  CHECK(defect < 1e-2);
}

TEST_CASE("independent reflection oracle, n = 1") {
  const double ratio = 0.38;
  const double alpha = 2 * std::numbers::pi * ratio;
  const int K = 4;
  const auto oracle = oracle_solve(-0.5, alpha, K);
  CHECK(oracle.worst_residual < 1e-12);
  const auto state = solve(config(1, K), freqs({AngleSpec::explicit_ratio(ratio)}, K));
  for (int k = 1; k <= K; ++k) {
    INFO("k = " << k);
    CHECK(rel(state.f_coefficient(k), oracle.F[static_cast<std::size_t>(k)]) < 1e-11);
  }
  for (const auto& [ab, v] : oracle.chi.c) {
    INFO("chi coefficient " << ab.first << "," << ab.second);
    const C got = state.chi[0].coeff(MultiIndex({ab.first, ab.second}));
    CHECK(std::abs(got - v) <= 1e-11 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("resonance at lambda = i") {
  const auto quarter = freqs({AngleSpec::explicit_ratio(0.25)}, 1);
  try {
    solve(config(1, 2), quarter);
    FAIL("expected SmallDivisorError");
  } catch (const SmallDivisorError& e) {
    CHECK(e.degree() == 3);
    CHECK(e.harmonic() == std::vector<int>{3});
  }
  // The step API hits the same divisor without the precheck.
  OrderSolver<double> steps(config(1, 2), quarter);
  steps.init_low_order();
  steps.solve_f_order(2);
  CHECK_THROWS_AS(steps.solve_chi_order(2), SmallDivisorError);
  CHECK_THROWS_AS(steps.solve_f_order(4), std::logic_error);
}

TEST_CASE("structure: parity, reality, Hermitian symmetry, gauge monomials") {
  for (int n : {1, 2}) {
    const auto fv = n == 1 ? freqs({AngleSpec::explicit_ratio(0.38)}, 6) : freqs(reference_pair(), 6);
    const auto state = solve(config(n, 6), fv);
    CHECK(state.order == 6);
    for (const auto& [index, c] : state.f.terms()) {
      CHECK(index.degree() % 2 == 0);
      CHECK(c.imag() == 0);
      for (int i = 0; i < n; ++i) CHECK(index[i] % 2 == 0);
    }
    const auto roles = state.roles();
    for (int j = 0; j < n; ++j) {
      for (const auto& [index, c] : state.chi[static_cast<std::size_t>(j)].terms()) {
        CHECK(index.degree() % 2 == 1);
        std::vector<int> swapped(index.exponents());
        std::rotate(swapped.begin(), swapped.begin() + n, swapped.end());
        CHECK(state.chi[static_cast<std::size_t>(j)].coeff(MultiIndex(swapped)) == std::conj(c));
        if (index.degree() > 1) {
          const auto m = roles.harmonic(index);
          bool resonant = std::abs(m[static_cast<std::size_t>(j)]) == 1;
          for (int i = 0; i < n; ++i) resonant = resonant && (i == j || m[static_cast<std::size_t>(i)] == 0);
          CHECK_FALSE(resonant);
        }
      }
    }
  }
  const auto state = solve(config(1, 2), freqs({AngleSpec::explicit_ratio(0.38)}, 2));
  CHECK(state.chi[0].coeff(MultiIndex({2, 1})) == C(0));
  CHECK(state.chi[0].coeff(MultiIndex({1, 2})) == C(0));
}

TEST_CASE("gauge invariance of f") {
  const auto one = freqs({AngleSpec::continued_fraction(ContinuedFraction::parse("2,[1]"))}, 8);
  check_f_close(solve(config(1, 8, {1.0}), one), solve(config(1, 8, {0.5}), one), 1e-10);
  check_f_close(solve(config(1, 8, {1.0}), one), solve(config(1, 8, {1.7}), one), 1e-10);
  const auto two = freqs(reference_pair(), 8);
  check_f_close(solve(config(2, 8, {1.0, 1.0}), two), solve(config(2, 8, {0.5, 0.5}), two), 1e-10);
  check_f_close(solve(config(2, 8, {1.0, 1.0}), two), solve(config(2, 8, {0.8, 1.3}), two), 1e-10);
}

TEST_CASE("frequency reflection leaves f unchanged") {
  for (int n : {1, 2}) {
    const auto fv = n == 1 ? freqs({AngleSpec::explicit_ratio(0.3819660112501051)}, 7) : freqs(reference_pair(), 7);
    auto mirrored = fv;
    mirrored.alphas[0] = 2 * std::numbers::pi - fv.alphas[0];
    mirrored.ratios[0] = 1 - fv.ratios[0];
    mirrored.lambdas[0] = std::conj(fv.lambdas[0]);
    check_f_close(solve(config(n, 7), fv), solve(config(n, 7), mirrored), 1e-10);
  }
}

TEST_CASE("coordinate swap permutes f") {
  const auto fv = freqs(reference_pair(), 7);
  auto pair = reference_pair();
  std::swap(pair[0], pair[1]);
  const auto swapped = freqs(pair, 7);
  check_f_close(solve(config(2, 7), fv), solve(config(2, 7), swapped), 1e-10, true);
}

TEST_CASE("diagnostics, determinism and serialization") {
  const auto fv = freqs({AngleSpec::explicit_ratio(0.38)}, 10);
  const auto a = solve(config(1, 10), fv);
  const auto b = solve(config(1, 10), fv);
  CHECK(a.order == 10);
  for (int k = 0; k <= 10; ++k) CHECK(std::isfinite(a.f_coefficient(k)));
  CHECK(to_json(a).dump() == to_json(b).dump());
  for (const auto& d : a.diagnostics) {
    CHECK(d.resonant_residual < 1e-12);
    CHECK(d.fermat_residual < 1e-12);
    CHECK(d.normalization_residual < 1e-12);
  }
  const auto back = solution_from_json<double>(to_json(a));
  CHECK(back.f == a.f);
  CHECK(back.chi == a.chi);
  CHECK(back.order == a.order);

  const auto q = solve(config(1, 10), freqs<Quad>({AngleSpec::explicit_ratio(0.38)}, 10));
  const auto q_back = solution_from_json<Quad>(to_json(q));
  CHECK(q_back.f == q.f);
  for (int k = 1; k <= 10; ++k) CHECK(rel(a.f_coefficient(k), static_cast<double>(q.f_coefficient(k))) < 1e-12);
}

TEST_CASE("near the sphere") {
  const auto fv = freqs({AngleSpec::explicit_ratio(0.4995)}, 4);
  const auto state = solve(config(1, 4), fv);
  CHECK(state.f_coefficient(1) == doctest::Approx(1).epsilon(1e-4));
  CHECK(state.f_coefficient(2) == doctest::Approx(1).epsilon(1e-3));
}

TEST_CASE("configuration validation") {
  const auto fv = freqs({AngleSpec::explicit_ratio(0.38)}, 3);
  auto bad = config(1, 3);
  bad.f0 = 0.5;
  CHECK_THROWS_AS(solve(bad, fv), ConfigError);
  bad = config(1, 0);
  CHECK_THROWS_AS(solve(bad, fv), ConfigError);
  bad = config(1, 3, {-1.0});
  CHECK_THROWS_AS(solve(bad, fv), ConfigError);
  CHECK_THROWS_AS(solve(config(2, 3), fv), ConfigError);
}
