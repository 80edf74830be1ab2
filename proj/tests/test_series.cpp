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

#include <numbers>
#include <random>

#include "bseries/series.hpp"
#include "bseries/series_json.hpp"
#include "test_util.hpp"

using namespace bseries;
using bseries::testing::max_coeff;
using bseries::testing::random_integer_series;
using bseries::testing::random_series;
using C = std::complex<double>;
using S = TruncatedSeries<double>;

namespace {

// One complex coordinate pair (z1, z̄1) or two pairs (z1, z2, z̄1, z̄2).
VariableRoles<double> roles_for(std::vector<double> ratios) {
  std::vector<C> lambdas;
  for (double r : ratios) lambdas.push_back(std::polar(1.0, 2 * std::numbers::pi * r));
  return VariableRoles<double>::standard(lambdas);
}

S monomial(int vars, int trunc, std::vector<int> e, C c = 1) {
  return S::from_terms(vars, trunc, {{MultiIndex(std::move(e)), c}});
}

bool near(const S& a, const S& b, double tol) { return max_coeff(a - b) <= tol; }

}  // namespace

TEST_CASE("monomial products and truncation") {
  const S z = monomial(2, 4, {1, 0});
  const S zbar = monomial(2, 4, {0, 1});
  CHECK((z * zbar) == monomial(2, 4, {1, 1}));
  CHECK((monomial(2, 4, {4, 0}) * z).is_zero());
  std::mt19937_64 rng(7);
  const S g = random_series(2, 6, 20, rng);
  CHECK((g + scale(g, C(-1))).is_zero());
  CHECK((g - g).is_zero());
}

TEST_CASE("mismatched operands are structural errors") {
  CHECK_THROWS_AS(S(2, 4) + S(4, 4), StructuralError);
  CHECK_THROWS_AS(S(2, 4) * S(2, 5), StructuralError);
}

TEST_CASE("ring laws hold exactly on integer series") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int vars = trial % 2 == 0 ? 2 : 4;
    const S a = random_integer_series(vars, 6, 12, rng);
    const S b = random_integer_series(vars, 6, 12, rng);
    const S c = random_integer_series(vars, 6, 12, rng);
    CHECK((a * b) == (b * a));
    CHECK(((a * b) * c) == (a * (b * c)));
    CHECK((a * (b + c)) == (a * b + a * c));
    CHECK((a + b) == (b + a));
  }
}

TEST_CASE("rotation") {
  const auto roles = roles_for({0.3});
  const C lambda = roles.eigenvalue(0);
  const S z = monomial(2, 5, {1, 0});
  CHECK(near(rotate(z, roles, 1), monomial(2, 5, {1, 0}, lambda), 1e-15));
  CHECK(near(rotate(monomial(2, 5, {1, 1}), roles, 7), monomial(2, 5, {1, 1}), 1e-14));

  std::mt19937_64 rng(3);
  const auto roles2 = roles_for({0.3052, 0.4577});
  for (int trial = 0; trial < 10; ++trial) {
    const S a = random_series(4, 6, 15, rng);
    const S b = random_series(4, 6, 15, rng);
    CHECK(near(rotate(rotate(a, roles2, 1), roles2, -1), a, 1e-14 * max_coeff(a)));
    // Homomorphism, checked per coefficient relative to its own size.
    const S lhs = rotate(a * b, roles2, 3);
    const S rhs = rotate(a, roles2, 3) * rotate(b, roles2, 3);
    for (const auto& [index, c] : lhs.terms()) {
      CHECK(std::abs(c - rhs.coeff(index)) <= 1e-13 * std::max(1.0, std::abs(c)));
    }
  }
}

TEST_CASE("central symmetry") {
  CHECK(central_symmetry(monomial(4, 3, {1, 0, 0, 0})) == monomial(4, 3, {1, 0, 0, 0}, -1.0));
  CHECK(central_symmetry(monomial(4, 3, {1, 0, 0, 1})) == monomial(4, 3, {1, 0, 0, 1}));
  CHECK(central_symmetry(S::constant(4, 3, 2.5)) == S::constant(4, 3, 2.5));
}

TEST_CASE("tau operators") {
  const auto roles = roles_for({0.38});
  const C lambda = roles.eigenvalue(0);
  const double a = 0.7;
  const S chi = monomial(2, 5, {1, 0}, a) + monomial(2, 5, {0, 1}, a);
  const S expected = monomial(2, 5, {1, 0}, a * (1.0 - 1.0 / lambda)) + monomial(2, 5, {0, 1}, a * (1.0 - lambda));
  CHECK(near(tau(chi, roles, TauSign::minus), expected, 1e-15));
  CHECK(near(tau(S::constant(2, 5, 1.5), roles, TauSign::minus), S::constant(2, 5, 3.0), 0));
  CHECK(near(tau(monomial(2, 5, {1, 1}), roles, TauSign::plus), monomial(2, 5, {1, 1}, 2.0), 1e-15));
}

TEST_CASE("averaging projection") {
  const auto roles = roles_for({0.3052, 0.4577});
  CHECK(average(monomial(4, 6, {2, 0, 2, 0}), roles) == monomial(4, 6, {2, 0, 2, 0}));
  CHECK(average(monomial(4, 6, {3, 0, 1, 0}), roles).is_zero());
  CHECK(average(monomial(4, 6, {1, 1, 1, 1}), roles) == monomial(4, 6, {1, 1, 1, 1}));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    S g = random_integer_series(4, 6, 30, rng);
    // Make sure some diagonal terms are present.
    g = g + monomial(4, 6, {1, 0, 1, 0}, 3.0) + monomial(4, 6, {1, 2, 1, 2}, -2.0);
    const S avg = average(g, roles);
    CHECK(average(avg, roles) == avg);
    CHECK(average(bracket(g, roles), roles).is_zero());
    CHECK((avg + bracket(g, roles)) == g);
    CHECK(average(rotate(g, roles, 1), roles) == avg);
    CHECK(average(rotate(g, roles, -5), roles) == avg);
  }
}

TEST_CASE("substitution") {
  const double a = 0.5;
  const S fx2 = monomial(1, 4, {2});
  const S chi = monomial(2, 4, {1, 0}, a) + monomial(2, 4, {0, 1}, a);
  const S expected = monomial(2, 4, {2, 0}, a * a) + monomial(2, 4, {1, 1}, 2 * a * a) + monomial(2, 4, {0, 2}, a * a);
  CHECK(near(substitute(fx2, std::span<const S>(&chi, 1)), expected, 1e-16));
  CHECK(substitute(S::constant(1, 4, 1.25), std::span<const S>(&chi, 1)) == S::constant(2, 4, 1.25));

  const S x1x2 = monomial(2, 4, {1, 1});
  const std::vector<S> chi2 = {monomial(4, 4, {1, 0, 0, 0}), monomial(4, 4, {0, 0, 0, 1})};
  CHECK(substitute(x1x2, std::span<const S>(chi2)) == monomial(4, 4, {1, 0, 0, 1}));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const S f = random_series(2, 8, 10, rng, 3);
    const std::vector<S> maps = {random_series(4, 8, 6, rng, 1), random_series(4, 8, 6, rng, 1)};
    const S composed = substitute(f, std::span<const S>(maps));
    CHECK(composed.lowest_degree() >= f.lowest_degree());
  }
  const std::vector<S> bad = {S::constant(4, 4, 1.0) + chi2[0], chi2[1]};
  CHECK_THROWS_AS(substitute(x1x2, std::span<const S>(bad)), DomainError);
}

TEST_CASE("partial derivatives") {
  CHECK(partial(monomial(2, 5, {2, 1}), 0) == monomial(2, 5, {1, 1}, 2.0));
  CHECK(partial(monomial(2, 5, {2, 0}), 1).is_zero());
  CHECK(partial(S::constant(2, 5, 3.0), 0).is_zero());
}

TEST_CASE("square root and reciprocal") {
  const S u = monomial(2, 4, {1, 1});
  const S one = S::constant(2, 4, 1.0);
  const S expected = one + scale(u, C(0.5)) + scale(u * u, C(-0.125));
  CHECK(near(sqrt_series(one + u), expected, 1e-15));
  CHECK(near(sqrt_series(S::constant(2, 4, 4 * 0.25)), one, 0));
  CHECK_THROWS_AS(sqrt_series(u), DomainError);
  CHECK_THROWS_AS(reciprocal(u), DomainError);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> c0(0.5, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int vars = trial % 2 == 0 ? 2 : 4;
    S g = random_series(vars, 8, 20, rng, 1);
    g = scale(g, C(0.1)) + S::constant(vars, 8, c0(rng));
    const S r = sqrt_series(g);
    CHECK(max_coeff(r * r - g) <= 1e-12 * max_coeff(g));
    const S unit = reciprocal(r) * r - S::constant(vars, 8, 1.0);
    CHECK(max_coeff(unit) <= 1e-12);
  }
}

TEST_CASE("homogeneous parts partition a series") {
  const S g = S::constant(2, 3, 1.0) + monomial(2, 3, {1, 0}) + monomial(2, 3, {1, 1});
  CHECK(homogeneous_part(g, 2) == monomial(2, 3, {1, 1}));
  CHECK(homogeneous_part(g, 0) == S::constant(2, 3, 1.0));
  std::mt19937_64 rng(17);
  const S h = random_integer_series(4, 7, 30, rng);
  S sum(4, 7);
  for (int d = 0; d <= 7; ++d) sum = sum + homogeneous_part(h, d);
  CHECK(sum == h);
}

TEST_CASE("evaluation matches term-by-term sum") {
  std::mt19937_64 rng(19);
  const S g = random_series(2, 6, 15, rng);
  const std::vector<C> point = {C(0.3, 0.1), C(0.3, -0.1)};
  C expected = 0;
  for (const auto& [index, c] : g.terms()) expected += c * std::pow(point[0], index[0]) * std::pow(point[1], index[1]);
  CHECK(std::abs(evaluate(g, std::span<const C>(point)) - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("JSON round trip and precision conversion") {
  std::mt19937_64 rng(23);
  const S g = random_series(4, 6, 25, rng);
  CHECK(series_from_json<double>(to_json(g)) == g);
  const auto q = convert<Quad>(g);
  CHECK(series_from_json<Quad>(to_json(q)) == q);
  CHECK(convert<double>(q) == g);
  CHECK_THROWS_AS(series_from_json<double>(nlohmann::json::parse("{\"vars\": \"x\"}")), StructuralError);
}
