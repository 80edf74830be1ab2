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

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bseries/solver.hpp"

namespace bseries {

// S₋ = {(x, f(x))} lies below the horizontal plane, S₊ = {(x, −f(x))} above it.
enum class Sheet { lower, upper };

template <RealScalar Real>
using Vec = std::vector<Real>;

// Truncated boundary function f(x) = Σ F_{2s} x^{2s} on the ball |x| < r_max.
template <RealScalar Real>
class SurfacePoly {
 public:
  struct Value {
    Real value;
    Vec<Real> gradient;
  };

  // coeffs: (s, F_{2s}); the s = 0 entry is f0.
  SurfacePoly(int n, std::vector<std::pair<std::vector<int>, Real>> coeffs, Real r_max = Real(0.1));
  static SurfacePoly from_state(const SolutionState<Real>& state, Real r_max = Real(0.1));

  int n() const noexcept { return n_; }
  Real r_max() const noexcept { return r_max_; }
  Real f0() const noexcept { return f0_; }

  // Throws DomainError for |x| ≥ r_max.
  Value eval(std::span<const Real> x) const;
  // ±f(x) and its gradient for the given sheet.
  Value height(std::span<const Real> x, Sheet sheet) const;
  // Point of the sheet above or below x, in ℝ^{n+1}.
  Vec<Real> lift(std::span<const Real> x, Sheet sheet) const;

 private:
  int n_;
  Real f0_ = 0;
  Real r_max_;
  int max_s_ = 0;
  std::vector<std::pair<std::vector<int>, Real>> coeffs_;
};

template <RealScalar Real>
struct ImpactTriple {
  Vec<Real> a, b, c;  // horizontal coordinates: a, c on S₊, b on S₋
};

// First crossing of the ray origin + t·dir (t > 0) with the target sheet.
// Throws EscapeError if the ray is tangential, points away from the sheet, or
// leaves the trusted ball before crossing.
template <RealScalar Real>
Vec<Real> next_impact(const SurfacePoly<Real>& sp, std::span<const Real> origin, std::span<const Real> dir, Sheet target);

// Mirror law: outgoing = incoming − 2n⟨n, incoming⟩/n² with n the sheet normal at x.
template <RealScalar Real>
Vec<Real> reflect(const SurfacePoly<Real>& sp, std::span<const Real> x, Sheet sheet, std::span<const Real> incoming);

// |sin| of the angle between C·incoming and I·C·outgoing, where C is built from
// the sheet slope at x and I = diag(1, …, 1, −1). Zero for an elastic reflection.
template <RealScalar Real>
Real collinearity_defect(const SurfacePoly<Real>& sp, std::span<const Real> x, Sheet sheet,
                         std::span<const Real> incoming, std::span<const Real> outgoing);

// Euclidean norm of ∂_b(L̂(a, b) + L̂(b, c)).
template <RealScalar Real>
Real fermat_residual(const SurfacePoly<Real>& sp, const ImpactTriple<Real>& triple);

// Flies from (a, −f(a)) to (b, f(b)), reflects, and flies on to S₊.
template <RealScalar Real>
ImpactTriple<Real> continue_trajectory(const SurfacePoly<Real>& sp, std::span<const Real> a, std::span<const Real> b);

// |c_true − χ(ρz, ρ̄z̄)| with a = χ∘ρ⁻¹, b = χ evaluated at (z, z̄).
template <RealScalar Real>
Real conjugacy_residual(const SolutionState<Real>& state, const SurfacePoly<Real>& sp, std::span<const std::complex<Real>> z);

// Largest coefficient of the polynomial conjugacy equations over degrees ≤ d.
template <RealScalar Real>
Real polynomial_equation_residual(const SolutionState<Real>& state, int d);

// log₂(residual(z)/residual(z/2)) averaged over the given directions; NaN if a
// residual rounds to zero at the working precision.
template <RealScalar Real>
double conjugacy_slope(const SolutionState<Real>& state, const SurfacePoly<Real>& sp,
                       const std::vector<std::vector<std::complex<Real>>>& directions, double radius);

// Unit directions in ℂⁿ drawn from a seeded generator.
template <RealScalar Real>
std::vector<std::vector<std::complex<Real>>> random_directions(int n, int count, std::uint64_t seed);

struct SphereLimitPoint {
  double epsilon;
  double f2;
  double f2_formula;  // (1 − cos α)/2
  double f4;
};

// n = 1 solves at α = π(1 − ε); the sphere of radius |f0| has f2 = f4 = 1 for f0 = −1/2.
template <RealScalar Real>
std::vector<SphereLimitPoint> sphere_limit(const std::vector<double>& epsilons, const SolverConfig& base);

struct SlopeCheck {
  int n;
  int K;
  double radius;
  double slope;
  double required;
  bool pass;
};

struct VerifyReport {
  std::vector<SlopeCheck> slope_checks;
  double fermat_max = 0;
  double collinearity_max = 0;
  double poly_residual_max = 0;
  std::vector<SphereLimitPoint> sphere_limit;
};

nlohmann::json to_json(const VerifyReport& report);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trajectories = 16;
  double impact_radius = 0.01;
  double slope_radius = 1e-2;
  int slope_directions = 4;
};

// Reflection oracle, polynomial cross-check and slope check on one state.
template <RealScalar Real>
VerifyReport verify_state(const SolutionState<Real>& state, const VerifyOptions& options);

}  // namespace bseries
