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

#include "bseries/analyzer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "bseries/errors.hpp"

namespace bseries {

template <RealScalar Real>
RatioSequence ratios(std::span<const Real> f_even, int j0) {
  int nonzero = 0;
  for (const Real& v : f_even) nonzero += v != Real(0);
  if (nonzero < 6) throw FitError("ratio analysis needs at least six nonzero coefficients");
  RatioSequence seq;
  for (std::size_t i = 1; i < f_even.size(); ++i) {
    if (f_even[i - 1] == Real(0)) throw GapError("f_" + std::to_string(2 * (j0 + static_cast<int>(i) - 1)) + " vanishes");
    const Real b = f_even[i] / f_even[i - 1];
    seq.entries.push_back({j0 + static_cast<int>(i), num::to_double(f_even[i]), num::to_double(b)});
    if (b < Real(0)) seq.sign_change = true;
  }
  return seq;
}

template <RealScalar Real>
RatioSequence ratios(const SolutionState<Real>& state) {
  if (state.config.n != 1) throw StructuralError("ratio analysis needs n = 1");
  std::vector<Real> f;
  for (int k = 1; k <= state.order; ++k) f.push_back(state.f_coefficient(k));
  return ratios<Real>(std::span<const Real>(f), 1);
}

FitWindow default_window(int j_max) { return {std::max(5, j_max / 3), j_max}; }

RatioFit fit_asymptotic(const RatioSequence& seq, FitWindow window, double agreement) {
  if (window.j_min < 5 || window.j_max <= window.j_min) throw FitError("window must satisfy 5 ≤ j_min < j_max");
  std::vector<const RatioEntry*> pts;
  for (const auto& e : seq.entries) {
    if (e.j >= window.j_min && e.j <= window.j_max) pts.push_back(&e);
  }
  if (pts.empty() || pts.front()->j != window.j_min || pts.back()->j != window.j_max) {
    throw FitError("window [" + std::to_string(window.j_min) + ", " + std::to_string(window.j_max) + "] outside the sequence");
  }
  if (pts.size() < 4) throw FitError("window needs at least four ratios");

  const auto rows = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double j = pts[static_cast<std::size_t>(r)]->j;
    const double w = std::sqrt(j);
    A.row(r) << w, w / j, w / (j * j);
    rhs(r) = w * pts[static_cast<std::size_t>(r)]->b;
  }
  // Columns are scaled to unit norm so the condition number reflects only
  // how distinguishable 1, 1/j and 1/j² are over the window.
  const Eigen::VectorXd col_norm = A.colwise().norm();
  const Eigen::MatrixXd As = A * col_norm.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) throw FitError("ill-conditioned fit: window too narrow to separate 1/j");
  const Eigen::VectorXd coef = As.colPivHouseholderQr().solve(rhs).cwiseQuotient(col_norm);

  RatioFit fit{};
  fit.window = window;
  fit.b_inf = coef(0);
  fit.sigma = coef(1) / coef(0);
  double sq = 0;
  for (const auto* p : pts) {
    const double model = coef(0) + coef(1) / p->j + coef(2) / (double(p->j) * p->j);
    sq += (p->b - model) * (p->b - model);
  }
  fit.rms_residual = std::sqrt(sq / static_cast<double>(pts.size()));

  const RatioEntry& e1 = *pts.front();
  const RatioEntry& e2 = *pts[pts.size() / 2];
  const RatioEntry& e3 = *pts.back();
  Eigen::Matrix3d M;
  Eigen::Vector3d y;
  for (int r = 0; r < 3; ++r) {
    const RatioEntry& e = r == 0 ? e1 : (r == 1 ? e2 : e3);
    const double x = 1.0 / e.j;
    M.row(r) << 1.0, x, x * x;
    y(r) = e.b;
  }
  const Eigen::Vector3d rich = M.fullPivLu().solve(y);
  fit.richardson_b_inf = rich(0);
  fit.richardson_sigma = rich(1) / rich(0);
  fit.flagged = !(std::abs(fit.sigma - fit.richardson_sigma) <= agreement);
  return fit;
}

namespace {

double binomial(int k, int i) {
  double c = 1;
  for (int t = 1; t <= i; ++t) c = c * (k - i + t) / t;
  return c;
}

}  // namespace

template <RealScalar Real>
std::vector<TableRow> bombieri_table(const SolutionState<Real>& state, std::span<const int> ks) {
  if (state.config.n != 2) throw StructuralError("coefficient table needs n = 2");
  std::vector<int> list(ks.begin(), ks.end());
  if (list.empty()) {
    for (int k = 4; k <= 2 * state.order; k += 2) list.push_back(k);
  }
  std::vector<TableRow> rows;
  for (int k : list) {
    if (k % 2 != 0 || k < 2 || k / 2 > state.order) throw DomainError("table row k = " + std::to_string(k) + " not available");
    TableRow row{k, {}};
    for (int i = 0; i <= k / 2; ++i) {
      const Real F = state.F({k / 2 - i, i});
      row.entries.push_back(num::to_double(Real(2) * F) / std::sqrt(binomial(k, 2 * i)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* status_name(ScanStatus s) {
  switch (s) {
    case ScanStatus::ok:
      return "ok";
    case ScanStatus::gap:
      return "gap";
    default:
      return "error";
  }
}

namespace {

ScanPoint scan_one(const std::string& text, const ScanConfig& config) {
  ScanPoint p{.ratio_text = text, .ratio = std::stod(text), .status = ScanStatus::error, .message = {}};
  try {
    SolverConfig solver = config.solver;
    solver.n = 1;
    const std::vector<AngleSpec> spec{AngleSpec::explicit_ratio(text)};
    const FitWindow window = config.window.value_or(default_window(solver.K));
    auto analyse = [&](const auto& state) {
      const auto seq = ratios(state);
      const auto fit = fit_asymptotic(seq, window);
      p.b_inf = fit.b_inf;
      p.sigma = fit.sigma;
      p.flagged = fit.flagged;
      if (!(fit.b_inf > 0)) throw FitError("non-positive b_inf");
      p.b_inf_inv_sqrt = 1.0 / std::sqrt(fit.b_inf);
      p.status = ScanStatus::ok;
    };
    if (solver.precision == Precision::extended) {
      analyse(solve<Quad>(solver, make_frequencies<Quad>(spec)));
    } else {
      analyse(solve<double>(solver, make_frequencies<double>(spec)));
    }
  } catch (const SmallDivisorError& e) {
    p.status = ScanStatus::gap;
    p.message = e.what();
  } catch (const std::exception& e) {
    p.status = ScanStatus::error;
    p.message = e.what();
  }
  return p;
}

}  // namespace

std::vector<ScanPoint> alpha_scan(const std::vector<std::string>& grid, const ScanConfig& config,
                                  const std::function<void(const ScanPoint&)>& progress) {
  std::vector<ScanPoint> out(grid.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      out[i] = scan_one(grid[i], config);
      if (progress) {
        std::lock_guard lock(report);
        progress(out[i]);
      }
    }
  };
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(config.workers > 0 ? config.workers : hw, 1, std::max<int>(1, static_cast<int>(grid.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  std::stable_sort(out.begin(), out.end(), [](const ScanPoint& a, const ScanPoint& b) { return a.ratio < b.ratio; });
  return out;
}

std::vector<std::string> default_scan_grid() {
  const double theta = std::numbers::phi - 1.0;
  std::vector<std::string> grid;
  char buf[32];
  for (int i = 0; i < 101; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", 0.3 + 0.2 * (i + theta) / 101.0);
    grid.emplace_back(buf);
  }
  grid.emplace_back("0.3");
  grid.emplace_back("0.33333333333333333333333333333333333333");
  return grid;
}

void write_ratios_csv(std::ostream& os, const RatioSequence& seq) {
  os << "j,f_2j,b_j\n";
  for (const auto& e : seq.entries) os << e.j << ',' << num::to_string(e.f) << ',' << num::to_string(e.b) << '\n';
}

void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "k,j1,entry\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.entries.size(); ++i) {
      os << row.k << ',' << 2 * i << ',' << num::to_string(row.entries[i]) << '\n';
    }
  }
}

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points) {
  os << "alpha_over_2pi,b_inf_inv_sqrt,status,b_inf,sigma,flagged\n";
  for (const auto& p : points) {
    os << p.ratio_text << ',';
    if (p.status == ScanStatus::ok) {
      os << num::to_string(p.b_inf_inv_sqrt) << ',' << status_name(p.status) << ',' << num::to_string(p.b_inf) << ','
         << num::to_string(p.sigma) << ',' << (p.flagged ? 1 : 0) << '\n';
    } else {
      os << ',' << status_name(p.status) << ",,,\n";
    }
  }
}

std::vector<ScanPoint> read_scan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("alpha_over_2pi,b_inf_inv_sqrt,status", 0) != 0) {
    throw StructuralError("scan CSV header missing");
  }
  std::vector<ScanPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    while (cells.size() < 6) cells.emplace_back();
    ScanPoint p{.ratio_text = cells[0], .ratio = 0, .status = ScanStatus::error, .message = {}};
    try {
      p.ratio = std::stod(cells[0]);
      if (cells[2] == "ok") {
        p.status = ScanStatus::ok;
        p.b_inf_inv_sqrt = std::stod(cells[1]);
        if (!cells[3].empty()) p.b_inf = std::stod(cells[3]);
        if (!cells[4].empty()) p.sigma = std::stod(cells[4]);
        p.flagged = cells[5] == "1";
      } else if (cells[2] == "gap") {
        p.status = ScanStatus::gap;
      } else if (cells[2] != "error") {
        throw StructuralError("unknown status '" + cells[2] + "'");
      }
    } catch (const std::logic_error&) {
      throw StructuralError("malformed scan CSV row: " + line);
    }
    out.push_back(std::move(p));
  }
  return out;
}

#define BSERIES_INSTANTIATE(R)                                                        \
  template RatioSequence ratios<R>(std::span<const R>, int);                          \
  template RatioSequence ratios<R>(const SolutionState<R>&);                          \
  template std::vector<TableRow> bombieri_table<R>(const SolutionState<R>&, std::span<const int>);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
