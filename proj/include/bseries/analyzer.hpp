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

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bseries/frequency.hpp"
#include "bseries/solver.hpp"

namespace bseries {

struct RatioEntry {
  int j;
  double f;  // f_{2j}
  double b;  // f_{2j} / f_{2j−2}
};

struct RatioSequence {
  std::vector<RatioEntry> entries;
  bool sign_change = false;
};

// b_j for j = j0 + 1, …, given f_even[i] = f_{2(j0 + i)}. Needs at least six
// nonzero coefficients; a zero denominator throws GapError.
template <RealScalar Real>
RatioSequence ratios(std::span<const Real> f_even, int j0);

// n = 1 state: b_j for j = 2..order.
template <RealScalar Real>
RatioSequence ratios(const SolutionState<Real>& state);

struct FitWindow {
  int j_min;
  int j_max;
};

// Default window [j_max/3, j_max], clamped to j_min ≥ 5.
FitWindow default_window(int j_max);

struct RatioFit {
  double b_inf;
  double sigma;
  FitWindow window;
  double rms_residual;
  // Three-point extrapolation in 1/j through j_min, the midpoint and j_max.
  double richardson_b_inf;
  double richardson_sigma;
  // |σ_LS − σ_Richardson| above the agreement tolerance.
  bool flagged;
};

// Least squares of b_j = b_inf (1 + σ/j) + δ/j² over the window, weighted by j.
// Throws FitError for windows outside the sequence or an ill-conditioned design.
RatioFit fit_asymptotic(const RatioSequence& seq, FitWindow window, double agreement = 0.05);

struct TableRow {
  int k;
  // Entry i is 2 F_{(k/2 − i, i)} / √C(k, 2i).
  std::vector<double> entries;
};

// Rows for every even k in [4, 2·order], or for the requested k.
template <RealScalar Real>
std::vector<TableRow> bombieri_table(const SolutionState<Real>& state, std::span<const int> ks = {});

enum class ScanStatus { ok, gap, error };

const char* status_name(ScanStatus s);

struct ScanPoint {
  std::string ratio_text;  // α/(2π) as given
  double ratio;
  ScanStatus status;
  double b_inf = 0;
  double b_inf_inv_sqrt = 0;
  double sigma = 0;
  bool flagged = false;
  std::string message;
};

struct ScanConfig {
  SolverConfig solver;  // n is forced to 1
  std::optional<FitWindow> window;
  int workers = 0;  // 0 means hardware concurrency
};

// Each grid point is an independent n = 1 solve plus fit. Small divisors give
// gap markers; output is sorted by α.
std::vector<ScanPoint> alpha_scan(const std::vector<std::string>& grid, const ScanConfig& config,
                                  const std::function<void(const ScanPoint&)>& progress = {});

// 101 points 0.3 + 0.2(i + θ)/101 with θ the golden-ratio offset, plus the
// exact probes 3/10 and 1/3.
std::vector<std::string> default_scan_grid();

void write_ratios_csv(std::ostream& os, const RatioSequence& seq);
void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows);
void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points);
// Reads the columns written by write_scan_csv; throws StructuralError on bad rows.
std::vector<ScanPoint> read_scan_csv(std::istream& is);

}  // namespace bseries
