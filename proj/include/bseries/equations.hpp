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

#include <vector>

#include "bseries/series.hpp"
#include "bseries/solver.hpp"

namespace bseries {

// Whole-series evaluation of the conjugacy equations on a solved state, built
// from the series-core operations only (no solver internals).
template <RealScalar Real>
struct ChordSeries {
  std::vector<TruncatedSeries<Real>> tm_chi;  // τ₋χ_j = b − a
  std::vector<TruncatedSeries<Real>> tp_chi;  // τ₊χ_j = b − c
  TruncatedSeries<Real> f_chi;                // f∘χ
  TruncatedSeries<Real> tm_f;                 // τ₋(f∘χ) = f(a) + f(b)
  TruncatedSeries<Real> tp_f;                 // τ₊(f∘χ) = f(b) + f(c)
  std::vector<TruncatedSeries<Real>> grad;    // (∂_j f)∘χ
};

template <RealScalar Real>
ChordSeries<Real> chord_series(const SolutionState<Real>& state);

// ⟨L̂(χ∘ρ⁻¹, χ)⟩ − 2|f0| through degree 2K.
template <RealScalar Real>
TruncatedSeries<Real> normalization_defect(const SolutionState<Real>& state);

// Largest diagonal coefficient of normalization_defect over degrees [2, 2K].
template <RealScalar Real>
double normalization_residual(const SolutionState<Real>& state);

// Left side of the explicit Fermat equation, one series per coordinate.
template <RealScalar Real>
std::vector<TruncatedSeries<Real>> fermat_series(const SolutionState<Real>& state);

// Largest coefficient of fermat_series over degrees [0, 2K − 1].
template <RealScalar Real>
double fermat_series_residual(const SolutionState<Real>& state);

// Degree-2 part of the normalization and degree-1 part of the Fermat equation
// for the low-order data. Throws ConsistencyError above tolerance.
template <RealScalar Real>
double degree2_sanity(const SolutionState<Real>& state, double tolerance = 1e-12);

// Collinearity minors of C τ₋(χ, f∘χ) and I C τ₊(χ, f∘χ), one per coordinate.
// For n = 1 this is 2f'(τ₋F τ₊F − τ₋χ τ₊χ) + (1 − f'²)(τ₋χ τ₊F + τ₊χ τ₋F).
template <RealScalar Real>
std::vector<TruncatedSeries<Real>> polynomial_equations(const SolutionState<Real>& state);

}  // namespace bseries
