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

#include <cmath>
#include <numbers>
#include <random>

#include "bseries/verifier.hpp"

using namespace bseries;
using V = std::vector<double>;

namespace {

// −√(r² − x²) = Σ c_k x^{2k}, c_k = −r·C(1/2, k)(−1/r²)^k.
std::vector<std::pair<std::vector<int>, double>> sphere_coeffs(double r, int terms) {
  std::vector<std::pair<std::vector<int>, double>> out;
  double binom = 1;  // C(1/2, k)
  for (int k = 0; k < terms; ++k) {
    out.push_back({{k}, -r * binom * std::pow(-1.0 / (r * r), k)});
    binom *= (0.5 - k) / (k + 1);
  }
  return out;
}

double norm(const V& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

SolverConfig config(int n, int K, Precision p = Precision::binary64) {
  SolverConfig c;
  c.n = n;
  c.K = K;
  c.precision = p;
  return c;
}

template <RealScalar Real>
SolutionState<Real> golden_state(int K) {
  const std::vector<AngleSpec> specs = {AngleSpec::continued_fraction(ContinuedFraction::parse("2,[1]"))};
  return solve<Real>(config(1, K), make_frequencies<Real>(specs, 2 * K - 1));
}

template <RealScalar Real>
SolutionState<Real> reference_state(int K) {
  const std::vector<AngleSpec> specs = {AngleSpec::continued_fraction(ContinuedFraction::parse("3,3,[1]")),
                                        AngleSpec::continued_fraction(ContinuedFraction::parse("2,5,[2]"))};
  return solve<Real>(config(2, K), make_frequencies<Real>(specs, 2 * K - 1));
}

}  // namespace

TEST_CASE("surface evaluation") {
  const auto state = reference_state<double>(4);
  const auto sp = SurfacePoly<double>::from_state(state);
  const V origin = {0, 0};
  const auto at0 = sp.eval(origin);
  CHECK(at0.value == -0.5);
  CHECK(at0.gradient == V{0, 0});

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.06, 0.06);
  for (int i = 0; i < 20; ++i) {
    const V x = {u(rng), u(rng)}, mx = {-x[0], -x[1]};
    CHECK(sp.eval(x).value == sp.eval(mx).value);
  }
  const V outside = {0.2, 0};
  CHECK_THROWS_AS(sp.eval(outside), DomainError);

  const SurfacePoly<double> sphere(1, sphere_coeffs(0.5, 5));
  const V x = {0.05};
  CHECK(std::abs(sphere.eval(x).value + std::sqrt(0.25 - 0.0025)) < 1e-10);
  CHECK(std::abs(sphere.eval(x).gradient[0] - 0.05 / std::sqrt(0.25 - 0.0025)) < 1e-9);
}

TEST_CASE("impacts on the sphere") {
  const SurfacePoly<double> sphere(1, sphere_coeffs(0.5, 40), 0.2);
  const V bottom = {0, -0.5}, up = {0, 1};
  const auto top = next_impact<double>(sphere, bottom, up, Sheet::upper);
  CHECK(std::abs(top[0]) < 1e-15);
  CHECK(std::abs(top[1] - 0.5) < 1e-14);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-0.05, 0.05), tilt(-0.08, 0.08);
  for (int i = 0; i < 50; ++i) {
    const V x = {pos(rng)};
    const V start = sphere.lift(x, Sheet::lower);
    V dir = {tilt(rng), 1};
    const double len = norm(dir);
    for (double& d : dir) d /= len;
    // |start + t dir|² = 1/4 with |dir| = 1.
    const double b = start[0] * dir[0] + start[1] * dir[1];
    const double c = start[0] * start[0] + start[1] * start[1] - 0.25;
    const double t = -b + std::sqrt(b * b - c);
    const auto hit = next_impact<double>(sphere, start, dir, Sheet::upper);
    CHECK(std::abs(hit[0] - (start[0] + t * dir[0])) < 1e-12);
    CHECK(std::abs(hit[1] - (start[1] + t * dir[1])) < 1e-12);
  }
  const V sideways = {1, 0};
  CHECK_THROWS_AS(next_impact<double>(sphere, bottom, sideways, Sheet::upper), EscapeError);
  const V down = {0, -1};
  CHECK_THROWS_AS(next_impact<double>(sphere, bottom, down, Sheet::upper), EscapeError);
}

TEST_CASE("mirror law") {
  const SurfacePoly<double> flat(2, {{{0, 0}, -0.5}});
  const V x = {0.01, -0.02};
  const V in = {0.3, -0.1, -0.9};
  const auto out = reflect<double>(flat, x, Sheet::lower, in);
  CHECK(out == V{0.3, -0.1, 0.9});

  const SurfacePoly<double> sphere(1, sphere_coeffs(0.5, 40), 0.2);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(-0.05, 0.05), tilt(-0.2, 0.2);
  for (int i = 0; i < 30; ++i) {
    const V xs = {pos(rng)};
    const V p = sphere.lift(xs, Sheet::lower);
    // Normal incidence along the radius.
    const V radial = {p[0] / 0.5, p[1] / 0.5};
    const auto back = reflect<double>(sphere, xs, Sheet::lower, radial);
    CHECK(std::abs(back[0] + radial[0]) < 1e-12);
    CHECK(std::abs(back[1] + radial[1]) < 1e-12);
    // General incidence against the closed-form normal.
    const V v = {tilt(rng), -1};
    const auto r = reflect<double>(sphere, xs, Sheet::lower, v);
    const double dn = v[0] * radial[0] + v[1] * radial[1];
    CHECK(std::abs(r[0] - (v[0] - 2 * dn * radial[0])) < 1e-12);
    CHECK(std::abs(r[1] - (v[1] - 2 * dn * radial[1])) < 1e-12);
    CHECK(std::abs(norm(r) - norm(v)) < 1e-14);
  }
}

TEST_CASE("reflection respects the central symmetry") {
  const auto state = reference_state<double>(5);
  const auto sp = SurfacePoly<double>::from_state(state);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-0.05, 0.05), tilt(-0.3, 0.3);
  for (int i = 0; i < 30; ++i) {
    const V x = {pos(rng), pos(rng)}, mx = {-x[0], -x[1]};
    const V in = {tilt(rng), tilt(rng), -1}, min = {-in[0], -in[1], -1};
    const auto out = reflect<double>(sp, x, Sheet::lower, in);
    const auto mout = reflect<double>(sp, mx, Sheet::lower, min);
    CHECK(std::abs(mout[0] + out[0]) < 1e-13);
    CHECK(std::abs(mout[1] + out[1]) < 1e-13);
    CHECK(std::abs(mout[2] - out[2]) < 1e-13);
    CHECK(std::abs(norm(out) - norm(in)) < 1e-14);
  }
}

TEST_CASE("Fermat residual on generated trajectories") {
  const auto state = reference_state<double>(5);
  const auto sp = SurfacePoly<double>::from_state(state);
  const ImpactTriple<double> axis{{0, 0}, {0, 0}, {0, 0}};
  CHECK(fermat_residual(sp, axis) == 0);

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> pos(-0.007, 0.007);
  for (int i = 0; i < 20; ++i) {
    const V a = {pos(rng), pos(rng)}, b = {pos(rng), pos(rng)};
    auto triple = continue_trajectory<double>(sp, a, b);
    CHECK(fermat_residual(sp, triple) < 1e-11);
    // Direction checks at b against the collinearity form.
    const auto pa = sp.lift(triple.a, Sheet::upper), pb = sp.lift(triple.b, Sheet::lower),
               pc = sp.lift(triple.c, Sheet::upper);
    const V in = {pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]};
    const V out = {pc[0] - pb[0], pc[1] - pb[1], pc[2] - pb[2]};
    CHECK(collinearity_defect<double>(sp, triple.b, Sheet::lower, in, out) < 1e-12);

    triple.c[0] += 1e-4;
    const double perturbed = fermat_residual(sp, triple);
    CHECK(perturbed > 1e-6);
    CHECK(perturbed < 1e-3);
  }
}

TEST_CASE("conjugacy residual scales with the truncation order") {
  const auto state = golden_state<Quad>(6);
  const auto sp = SurfacePoly<Quad>::from_state(state);
  const std::vector<std::complex<Quad>> origin = {0};
  CHECK(conjugacy_residual<Quad>(state, sp, origin) == 0);
  const auto dirs = random_directions<Quad>(1, 4, 1);
  const double slope = conjugacy_slope(state, sp, dirs, 1e-2);
  CHECK(slope >= 2 * 6);

  const auto pair = reference_state<double>(5);
  const auto psp = SurfacePoly<double>::from_state(pair);
  for (const auto& d : random_directions<double>(2, 6, 3)) {
    std::vector<std::complex<double>> z;
    for (const auto& c : d) z.push_back(1e-2 * c);
    CHECK(conjugacy_residual<double>(pair, psp, z) < 1e-3 * 1e-2);
  }
}

TEST_CASE("random directions are unit and reproducible") {
  const auto a = random_directions<double>(2, 5, 42);
  const auto b = random_directions<double>(2, 5, 42);
  CHECK(a == b);
  CHECK(a != random_directions<double>(2, 5, 43));
  for (const auto& d : a) CHECK(std::abs(std::norm(d[0]) + std::norm(d[1]) - 1) < 1e-15);
}

TEST_CASE("polynomial equations on computed solutions") {
  auto state = golden_state<Quad>(8);
  CHECK(static_cast<double>(polynomial_equation_residual(state, 13)) < 1e-9);
  const auto pair = reference_state<double>(5);
  CHECK(polynomial_equation_residual(pair, 9) < 1e-9);
  CHECK_THROWS_AS(polynomial_equation_residual(pair, 11), DomainError);

  state.chi[0].set_block(3, {});
  CHECK(static_cast<double>(polynomial_equation_residual(state, 5)) > 1e-4);
}

TEST_CASE("sphere limit") {
  SolverConfig base = config(1, 4);
  const auto points = sphere_limit<double>({1e-1, 1e-2, 1e-3}, base);
  REQUIRE(points.size() == 3);
  for (const auto& p : points) {
    const double alpha = std::numbers::pi * (1 - p.epsilon);
    CHECK(p.f2 == doctest::Approx((1 - std::cos(alpha)) / 2).epsilon(1e-14));
    CHECK(p.f2 == doctest::Approx(p.f2_formula).epsilon(1e-14));
  }
  CHECK(std::abs(points[1].f4 - 1) < std::abs(points[0].f4 - 1));
  CHECK(std::abs(points[2].f4 - 1) < std::abs(points[1].f4 - 1));
  CHECK(std::abs(points[2].f4 - 1) < 0.02);
  // Regression values from the first calibration run.
  CHECK(points[0].f4 == doctest::Approx(0.9206038293).epsilon(1e-8));
  CHECK(points[2].f4 == doctest::Approx(0.9999917754).epsilon(1e-8));
}

TEST_CASE("report on a full state") {
  const auto state = golden_state<Quad>(5);
  VerifyOptions options;
  const auto report = verify_state(state, options);
  REQUIRE(report.slope_checks.size() == 1);
  CHECK(report.slope_checks[0].pass);
  CHECK(report.fermat_max < 1e-25);
  CHECK(report.collinearity_max < 1e-25);
  CHECK(report.poly_residual_max < 1e-20);
  const auto doc = to_json(report);
  CHECK(doc.contains("slope_checks"));
}
