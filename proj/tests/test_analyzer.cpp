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
#include <sstream>

#include "bseries/analyzer.hpp"
#include "bseries/plot.hpp"

using namespace bseries;

namespace {

RatioSequence synthetic(double b_inf, double sigma, double delta, int j_max) {
  RatioSequence seq;
  for (int j = 2; j <= j_max; ++j) {
    seq.entries.push_back({j, 0.0, b_inf * (1 + sigma / j) + delta / (double(j) * j)});
  }
  return seq;
}

SolverConfig config(int n, int K, std::vector<double> gauge = {}) {
  SolverConfig c;
  c.n = n;
  c.K = K;
  c.gauge_a = std::move(gauge);
  return c;
}

std::vector<AngleSpec> reference_pair() {
  return {AngleSpec::continued_fraction(ContinuedFraction::parse("3,3,[1]")),
          AngleSpec::continued_fraction(ContinuedFraction::parse("2,5,[2]"))};
}

SolutionState<double> solve_specs(const std::vector<AngleSpec>& specs, SolverConfig c) {
  return solve<double>(c, make_frequencies<double>(specs, 2 * c.K - 1));
}

}  // namespace

TEST_CASE("ratio sequence") {
  // f_{2j} = r^j j^{−3/2} gives b_j = r ((j − 1)/j)^{3/2}.
  const double r = 2.5;
  std::vector<double> f;
  for (int j = 1; j <= 40; ++j) f.push_back(std::pow(r, j) * std::pow(j, -1.5));
  const auto seq = ratios<double>(f, 1);
  REQUIRE(seq.entries.size() == 39);
  CHECK_FALSE(seq.sign_change);
  for (const auto& e : seq.entries) {
    CHECK(e.b == doctest::Approx(r * std::pow((e.j - 1.0) / e.j, 1.5)).epsilon(1e-13));
    CHECK(std::abs(e.b - r * (1 - 1.5 / e.j)) < r * 1.0 / (e.j * e.j));
  }
  const std::vector<double> few = {1, 2, 3};
  CHECK_THROWS_AS(ratios<double>(few, 1), FitError);
  const std::vector<double> hole = {1, 2, 0, 4, 5, 6, 7, 8};
  CHECK_THROWS_AS(ratios<double>(hole, 1), GapError);
  const std::vector<double> alternating = {1, -2, 4, -8, 16, -32, 64};
  CHECK(ratios<double>(alternating, 1).sign_change);
}

TEST_CASE("asymptotic fit on planted data") {
  const auto exact = fit_asymptotic(synthetic(0.5, -1.5, 0, 200), {50, 150});
  CHECK(std::abs(exact.b_inf - 0.5) < 1e-12);
  CHECK(std::abs(exact.sigma + 1.5) < 1e-12);
  CHECK_FALSE(exact.flagged);

  const auto contaminated = fit_asymptotic(synthetic(0.5, -1.5, 2 * 0.5, 200), {50, 150});
  CHECK(std::abs(contaminated.sigma + 1.5) <= 0.03);
  CHECK(std::abs(contaminated.richardson_sigma + 1.5) <= 0.03);
  for (double b_inf : {0.3, 1.0, 3.7}) {
    for (double sigma : {-2.0, -1.5, -0.5}) {
      for (double delta : {-3.0, 0.0, 4.0}) {
        const auto fit = fit_asymptotic(synthetic(b_inf, sigma, delta * b_inf, 200), {50, 150});
        CHECK(std::abs(fit.sigma - sigma) <= 0.03);
        CHECK(std::abs(fit.b_inf - b_inf) <= 1e-3 * b_inf);
      }
    }
  }
}

TEST_CASE("fit errors and windows") {
  const auto seq = synthetic(0.5, -1.5, 0, 60);
  CHECK_THROWS_AS(fit_asymptotic(seq, {50, 150}), FitError);
  CHECK_THROWS_AS(fit_asymptotic(seq, {3, 40}), FitError);
  CHECK_THROWS_AS(fit_asymptotic(seq, {40, 40}), FitError);
  RatioSequence far;
  for (int j = 10000000; j <= 10000006; ++j) far.entries.push_back({j, 0.0, 0.5 * (1 - 1.5 / j)});
  CHECK_THROWS_AS(fit_asymptotic(far, {10000000, 10000006}), FitError);
  CHECK(default_window(120).j_min == 40);
  CHECK(default_window(120).j_max == 120);
  CHECK(default_window(9).j_min == 5);
}

TEST_CASE("solver coefficients have sigma near -3/2") {
  const std::vector<AngleSpec> golden = {AngleSpec::continued_fraction(ContinuedFraction::parse("2,[1]"))};
  const auto state = solve_specs(golden, config(1, 60));
  const auto seq = ratios(state);
  CHECK_FALSE(seq.sign_change);
  for (const auto& e : seq.entries) CHECK(e.b > 0);
  const auto fit = fit_asymptotic(seq, default_window(60));
  CHECK(fit.sigma >= -1.6);
  CHECK(fit.sigma <= -1.4);
  CHECK_FALSE(fit.flagged);
}

TEST_CASE("normalized table") {
  const auto state = solve_specs(reference_pair(), config(2, 4));
  const auto rows = bombieri_table(state);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].k == 4);
  const std::vector<double> published = {0.50276, 1.0749, 1.8853};
  REQUIRE(rows[0].entries.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(rows[0].entries[i] - published[i]) / published[i] < 5e-5);
  // The middle entry carries the weight 1/√C(4, 2).
  CHECK(2 * state.F({1, 1}) == doctest::Approx(1.0749 * std::sqrt(6.0)).epsilon(5e-5));

  const auto scaled = bombieri_table(solve_specs(reference_pair(), config(2, 6, {0.5, 0.5})));
  const auto plain = bombieri_table(solve_specs(reference_pair(), config(2, 6)));
  REQUIRE(scaled.size() == plain.size());
  for (std::size_t r = 0; r < plain.size(); ++r) {
    for (std::size_t i = 0; i < plain[r].entries.size(); ++i) {
      CHECK(scaled[r].entries[i] == doctest::Approx(plain[r].entries[i]).epsilon(1e-10));
    }
  }

  auto swapped_specs = reference_pair();
  std::swap(swapped_specs[0], swapped_specs[1]);
  const auto swapped = bombieri_table(solve_specs(swapped_specs, config(2, 6)));
  for (std::size_t r = 0; r < plain.size(); ++r) {
    const auto& e = plain[r].entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(swapped[r].entries[e.size() - 1 - i] == doctest::Approx(e[i]).epsilon(1e-9));
    }
  }

  const std::vector<int> only = {6};
  CHECK(bombieri_table(state, only).empty() == false);
}

TEST_CASE("scan marks resonances as gaps") {
  SolverConfig c = config(1, 40);
  const std::vector<std::string> grid = {"0.41231056256176605", "0.3", "0.38196601125010515", "0.33333333333333333333", "0.44721359549995794"};
  const auto serial = alpha_scan(grid, {c, std::nullopt, 1});
  const auto parallel = alpha_scan(grid, {c, std::nullopt, 4});
  REQUIRE(serial.size() == grid.size());
  for (std::size_t i = 1; i < serial.size(); ++i) CHECK(serial[i - 1].ratio < serial[i].ratio);
  for (const auto& p : serial) {
    INFO(p.ratio_text);
    const bool rational = p.ratio_text == "0.3" || p.ratio_text.starts_with("0.3333");
    CHECK((p.status == ScanStatus::gap) == rational);
    if (!rational) {
      CHECK(p.status == ScanStatus::ok);
      CHECK(p.b_inf_inv_sqrt > 0);
    }
  }
  std::ostringstream a, b;
  write_scan_csv(a, serial);
  write_scan_csv(b, parallel);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const auto back = read_scan_csv(in);
  REQUIRE(back.size() == serial.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].status == serial[i].status);
    CHECK(back[i].b_inf_inv_sqrt == doctest::Approx(serial[i].b_inf_inv_sqrt).epsilon(1e-15));
  }

  const auto svg = render_scan_svg(serial);
  CHECK(svg.starts_with("<svg"));
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("default scan grid") {
  const auto grid = default_scan_grid();
  CHECK(grid.size() == 103);
  int inside = 0;
  for (const auto& g : grid) inside += std::stod(g) > 0.3 && std::stod(g) < 0.5;
  CHECK(inside == 102);
}

TEST_CASE("CSV writers") {
  const auto seq = synthetic(0.5, -1.5, 0, 8);
  std::ostringstream os;
  write_ratios_csv(os, seq);
  CHECK(os.str().starts_with("j,f_2j,b_j\n"));
  std::ostringstream table;
  write_table_csv(table, {{4, {0.5, 1.0, 1.8}}});
  CHECK(table.str().starts_with("k,j1,entry\n4,0,"));
  std::istringstream bad("alpha_over_2pi,b_inf_inv_sqrt,status\nx,y\n");
  CHECK_THROWS_AS(read_scan_csv(bad), StructuralError);
}
