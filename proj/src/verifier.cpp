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

#include "bseries/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bseries/equations.hpp"
#include "bseries/errors.hpp"

namespace bseries {

namespace {

template <RealScalar Real>
Real dot(std::span<const Real> u, std::span<const Real> v) {
  Real sum = 0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

template <RealScalar Real>
Real norm(std::span<const Real> u) {
  return num::sqrt(dot(u, u));
}

template <RealScalar Real>
Vec<Real> horizontal(std::span<const Real> p) {
  return Vec<Real>(p.begin(), p.end() - 1);
}

}  // namespace

template <RealScalar Real>
SurfacePoly<Real>::SurfacePoly(int n, std::vector<std::pair<std::vector<int>, Real>> coeffs, Real r_max)
    : n_(n), r_max_(r_max), coeffs_(std::move(coeffs)) {
  if (n < 1) throw StructuralError("surface needs n ≥ 1");
  for (const auto& [s, F] : coeffs_) {
    if (static_cast<int>(s.size()) != n) throw StructuralError("surface coefficient index has the wrong length");
    int total = 0;
    for (int v : s) {
      total += v;
      max_s_ = std::max(max_s_, v);
    }
    if (total == 0) f0_ += F;
  }
  if (!(f0_ < Real(0))) throw DomainError("surface needs f(0) < 0");
}

template <RealScalar Real>
SurfacePoly<Real> SurfacePoly<Real>::from_state(const SolutionState<Real>& state, Real r_max) {
  std::vector<std::pair<std::vector<int>, Real>> coeffs;
  for (int k = 0; k <= state.order; ++k) {
    for (auto& entry : state.f_form(k)) coeffs.push_back(std::move(entry));
  }
  return SurfacePoly(state.config.n, std::move(coeffs), r_max);
}

// Term by term over cached powers of x_j².
template <RealScalar Real>
auto SurfacePoly<Real>::eval(std::span<const Real> x) const -> Value {
  if (static_cast<int>(x.size()) != n_) throw StructuralError("point dimension differs from the surface");
  if (!(norm(x) < r_max_)) throw DomainError("|x| = " + num::to_string(num::to_double(norm(x)), 6) + " outside the trusted ball");
  std::vector<std::vector<Real>> pow(static_cast<std::size_t>(n_), std::vector<Real>(static_cast<std::size_t>(max_s_) + 1, Real(1)));
  for (int j = 0; j < n_; ++j) {
    auto& p = pow[static_cast<std::size_t>(j)];
    for (int e = 1; e <= max_s_; ++e) p[static_cast<std::size_t>(e)] = p[static_cast<std::size_t>(e - 1)] * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  }
  Value out{Real(0), Vec<Real>(static_cast<std::size_t>(n_), Real(0))};
  for (const auto& [s, F] : coeffs_) {
    Real term = F;
    for (int j = 0; j < n_; ++j) term *= pow[static_cast<std::size_t>(j)][static_cast<std::size_t>(s[static_cast<std::size_t>(j)])];
    out.value += term;
    for (int j = 0; j < n_; ++j) {
      const int sj = s[static_cast<std::size_t>(j)];
      if (sj == 0) continue;
      // ∂_j x_j^{2s_j} = 2s_j x_j^{2s_j − 1}
      Real g = F * Real(2 * sj) * x[static_cast<std::size_t>(j)] * pow[static_cast<std::size_t>(j)][static_cast<std::size_t>(sj - 1)];
      for (int i = 0; i < n_; ++i) {
        if (i != j) g *= pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(s[static_cast<std::size_t>(i)])];
      }
      out.gradient[static_cast<std::size_t>(j)] += g;
    }
  }
  return out;
}

template <RealScalar Real>
auto SurfacePoly<Real>::height(std::span<const Real> x, Sheet sheet) const -> Value {
  auto v = eval(x);
  if (sheet == Sheet::upper) {
    v.value = -v.value;
    for (auto& g : v.gradient) g = -g;
  }
  return v;
}

template <RealScalar Real>
Vec<Real> SurfacePoly<Real>::lift(std::span<const Real> x, Sheet sheet) const {
  Vec<Real> p(x.begin(), x.end());
  p.push_back(height(x, sheet).value);
  return p;
}

template <RealScalar Real>
Vec<Real> next_impact(const SurfacePoly<Real>& sp, std::span<const Real> origin, std::span<const Real> dir, Sheet target) {
  const int n = sp.n();
  if (static_cast<int>(origin.size()) != n + 1 || static_cast<int>(dir.size()) != n + 1) {
    throw StructuralError("ray dimension differs from the surface");
  }
  const Real dy = dir[static_cast<std::size_t>(n)];
  const Real tiny = Real(1e3) * num::epsilon<Real>();
  const bool toward = target == Sheet::upper ? dy > tiny : dy < -tiny;
  if (!toward) throw EscapeError("ray does not head toward the target sheet");

  auto x_at = [&](Real t) {
    Vec<Real> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = origin[static_cast<std::size_t>(j)] + t * dir[static_cast<std::size_t>(j)];
    return x;
  };
  // g(t) = ray height − sheet height; its sign flips at the crossing.
  const Real orient = target == Sheet::upper ? Real(1) : Real(-1);
  auto g_at = [&](Real t, Real* slope) {
    const auto x = x_at(t);
    const auto h = sp.height(x, target);
    if (slope) *slope = orient * (dy - dot<Real>(h.gradient, dir.first(static_cast<std::size_t>(n))));
    return orient * (origin[static_cast<std::size_t>(n)] + t * dy - h.value);
  };

  // Largest t keeping the ray inside the trusted ball.
  const auto ox = origin.first(static_cast<std::size_t>(n));
  const auto dx = dir.first(static_cast<std::size_t>(n));
  const Real qa = dot(dx, dx), qb = dot(ox, dx), qc = dot(ox, ox) - sp.r_max() * sp.r_max();
  if (!(qc < Real(0))) throw EscapeError("ray starts outside the trusted ball");
  const Real vertical_span = (num::abs(origin[static_cast<std::size_t>(n)]) + Real(4) * num::abs(sp.f0())) / num::abs(dy);
  Real hi = vertical_span;
  if (qa > Real(0)) {
    const Real t_exit = (-qb + num::sqrt(qb * qb - qa * qc)) / qa;
    hi = std::min(hi, t_exit * (Real(1) - Real(1e-9)));
  }
  Real lo = 0;
  const Real g_lo = g_at(lo, nullptr);
  if (!(g_lo < Real(0))) throw EscapeError("ray starts beyond the target sheet");
  if (!(g_at(hi, nullptr) > Real(0))) throw EscapeError("ray leaves the trusted ball before reaching the sheet");

  // Chord estimate: vertical distance to the sheet over the vertical speed.
  Real t = std::clamp(-g_lo / (orient * dy), lo, hi);
  const Real tol = Real(64) * num::epsilon<Real>();
  for (int it = 0; it < 400; ++it) {
    Real slope = 0;
    const Real g = g_at(t, &slope);
    if (num::abs(g) <= tol) break;
    if (g < Real(0)) {
      lo = t;
    } else {
      hi = t;
    }
    Real next = slope != Real(0) ? t - g / slope : lo - Real(1);
    if (!(next > lo && next < hi)) next = (lo + hi) / Real(2);
    if (hi - lo <= num::epsilon<Real>() * hi) {
      t = next;
      break;
    }
    t = next;
  }
  Vec<Real> point = x_at(t);
  point.push_back(origin[static_cast<std::size_t>(n)] + t * dy);
  return point;
}

template <RealScalar Real>
Vec<Real> reflect(const SurfacePoly<Real>& sp, std::span<const Real> x, Sheet sheet, std::span<const Real> incoming) {
  const auto h = sp.height(x, sheet);
  Vec<Real> normal = h.gradient;
  normal.push_back(Real(-1));
  const Real factor = Real(2) * dot<Real>(normal, incoming) / dot<Real>(normal, normal);
  Vec<Real> out(incoming.begin(), incoming.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= factor * normal[i];
  return out;
}

template <RealScalar Real>
Real collinearity_defect(const SurfacePoly<Real>& sp, std::span<const Real> x, Sheet sheet,
                         std::span<const Real> incoming, std::span<const Real> outgoing) {
  const int n = sp.n();
  const auto s = sp.height(x, sheet).gradient;
  // Rows 1..n of C pick x_n, …, x_1 plus s_j times the vertical part; the last
  // row is (s, −1).
  auto apply_c = [&](std::span<const Real> v) {
    Vec<Real> out(static_cast<std::size_t>(n) + 1);
    const Real vy = v[static_cast<std::size_t>(n)];
    for (int r = 0; r < n; ++r) {
      const int j = n - 1 - r;
      out[static_cast<std::size_t>(r)] = v[static_cast<std::size_t>(j)] + s[static_cast<std::size_t>(j)] * vy;
    }
    out[static_cast<std::size_t>(n)] = dot<Real>(s, v.first(static_cast<std::size_t>(n))) - vy;
    return out;
  };
  const Vec<Real> u = apply_c(incoming);
  Vec<Real> w = apply_c(outgoing);
  w[static_cast<std::size_t>(n)] = -w[static_cast<std::size_t>(n)];
  // Lagrange identity, summed minor by minor to avoid cancellation.
  Real minors = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t k = i + 1; k < u.size(); ++k) {
      const Real m = u[i] * w[k] - u[k] * w[i];
      minors += m * m;
    }
  }
  return num::sqrt(minors) / (norm<Real>(u) * norm<Real>(w));
}

template <RealScalar Real>
Real fermat_residual(const SurfacePoly<Real>& sp, const ImpactTriple<Real>& triple) {
  const auto fa = sp.eval(triple.a).value;
  const auto vb = sp.eval(triple.b);
  const auto fc = sp.eval(triple.c).value;
  const auto chord = [&](std::span<const Real> p, std::span<const Real> q, Real fp, Real fq) {
    Real sq = (fp + fq) * (fp + fq);
    for (std::size_t i = 0; i < p.size(); ++i) sq += (p[i] - q[i]) * (p[i] - q[i]);
    return num::sqrt(sq);
  };
  const Real lab = chord(triple.a, triple.b, fa, vb.value);
  const Real lbc = chord(triple.b, triple.c, vb.value, fc);
  Real sq = 0;
  for (std::size_t i = 0; i < triple.b.size(); ++i) {
    const Real left = (triple.b[i] - triple.a[i] + vb.gradient[i] * (fa + vb.value)) / lab;
    const Real right = (triple.b[i] - triple.c[i] + vb.gradient[i] * (fc + vb.value)) / lbc;
    sq += (left + right) * (left + right);
  }
  return num::sqrt(sq);
}

template <RealScalar Real>
ImpactTriple<Real> continue_trajectory(const SurfacePoly<Real>& sp, std::span<const Real> a, std::span<const Real> b) {
  const auto pa = sp.lift(a, Sheet::upper);
  const auto pb = sp.lift(b, Sheet::lower);
  Vec<Real> incoming(pb.size());
  for (std::size_t i = 0; i < pb.size(); ++i) incoming[i] = pb[i] - pa[i];
  const Real len = norm<Real>(incoming);
  for (auto& v : incoming) v /= len;
  const auto outgoing = reflect<Real>(sp, b, Sheet::lower, incoming);
  const auto pc = next_impact<Real>(sp, pb, outgoing, Sheet::upper);
  return {Vec<Real>(a.begin(), a.end()), Vec<Real>(b.begin(), b.end()), horizontal<Real>(pc)};
}

namespace {

template <RealScalar Real>
Vec<Real> chi_at(const SolutionState<Real>& state, std::span<const std::complex<Real>> z) {
  const int n = state.config.n;
  std::vector<std::complex<Real>> point(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    point[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)];
    point[static_cast<std::size_t>(n + j)] = std::conj(z[static_cast<std::size_t>(j)]);
  }
  Vec<Real> out;
  for (const auto& chi : state.chi) out.push_back(evaluate(chi, std::span<const std::complex<Real>>(point)).real());
  return out;
}

template <RealScalar Real>
std::vector<std::complex<Real>> rotated(const SolutionState<Real>& state, std::span<const std::complex<Real>> z, int p) {
  std::vector<std::complex<Real>> out;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const auto& lam = state.frequencies.lambdas[j];
    out.push_back(z[j] * (p > 0 ? lam : std::conj(lam)));
  }
  return out;
}

}  // namespace

template <RealScalar Real>
Real conjugacy_residual(const SolutionState<Real>& state, const SurfacePoly<Real>& sp, std::span<const std::complex<Real>> z) {
  const auto zm = rotated(state, z, -1);
  const auto zp = rotated(state, z, +1);
  const auto a = chi_at<Real>(state, zm);
  const auto b = chi_at<Real>(state, z);
  const auto c_pred = chi_at<Real>(state, zp);
  Real sum = 0;
  for (Real v : b) sum += v * v;
  if (sum == Real(0)) return 0;
  const auto triple = continue_trajectory<Real>(sp, a, b);
  Real sq = 0;
  for (std::size_t i = 0; i < c_pred.size(); ++i) sq += (triple.c[i] - c_pred[i]) * (triple.c[i] - c_pred[i]);
  return num::sqrt(sq);
}

template <RealScalar Real>
Real polynomial_equation_residual(const SolutionState<Real>& state, int d) {
  if (d > 2 * state.config.K - 1) throw DomainError("residual degree exceeds 2K − 1");
  Real worst = 0;
  for (const auto& eq : polynomial_equations(state)) worst = std::max(worst, max_abs_coeff(eq, 0, d));
  return worst;
}

template <RealScalar Real>
double conjugacy_slope(const SolutionState<Real>& state, const SurfacePoly<Real>& sp,
                       const std::vector<std::vector<std::complex<Real>>>& directions, double radius) {
  double sum = 0;
  for (const auto& dir : directions) {
    std::vector<std::complex<Real>> z1, z2;
    for (const auto& v : dir) {
      z1.push_back(v * Real(radius));
      z2.push_back(v * Real(radius / 2));
    }
    const Real r1 = conjugacy_residual<Real>(state, sp, z1);
    const Real r2 = conjugacy_residual<Real>(state, sp, z2);
    // Residual lost in roundoff: the working precision cannot resolve the slope.
    if (!(r1 > Real(0)) || !(r2 > Real(0))) return std::numeric_limits<double>::quiet_NaN();
    sum += num::to_double(num::log(r1 / r2) / num::log(Real(2)));
  }
  return sum / static_cast<double>(directions.size());
}

template <RealScalar Real>
std::vector<std::vector<std::complex<Real>>> random_directions(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<std::complex<Real>>> out;
  for (int i = 0; i < count; ++i) {
    std::vector<std::complex<Real>> v;
    Real sq = 0;
    for (int j = 0; j < n; ++j) {
      const Real re = Real(gauss(rng)), im = Real(gauss(rng));
      v.emplace_back(re, im);
      sq += re * re + im * im;
    }
    const Real len = num::sqrt(sq);
    for (auto& c : v) c /= len;
    out.push_back(std::move(v));
  }
  return out;
}

template <RealScalar Real>
std::vector<SphereLimitPoint> sphere_limit(const std::vector<double>& epsilons, const SolverConfig& base) {
  std::vector<SphereLimitPoint> out;
  for (double eps : epsilons) {
    SolverConfig config = base;
    config.n = 1;
    config.K = std::max(config.K, 2);
    const std::vector<AngleSpec> spec{AngleSpec::explicit_ratio((1.0 - eps) / 2.0)};
    const auto fv = make_frequencies<Real>(spec);
    const auto state = solve<Real>(config, fv);
    const double alpha = num::to_double(fv.alphas[0]);
    out.push_back({eps, num::to_double(state.F({1})), (1.0 - std::cos(alpha)) / 2.0, num::to_double(state.F({2}))});
  }
  return out;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& s : report.slope_checks) {
    slopes.push_back({{"n", s.n}, {"K", s.K}, {"radius", s.radius}, {"slope", s.slope}, {"required", s.required}, {"pass", s.pass}});
  }
  nlohmann::json sphere = nlohmann::json::array();
  for (const auto& p : report.sphere_limit) {
    sphere.push_back({{"epsilon", p.epsilon}, {"f2", p.f2}, {"f2_formula", p.f2_formula}, {"f4", p.f4}});
  }
  return {{"slope_checks", std::move(slopes)},
          {"fermat_max", report.fermat_max},
          {"collinearity_max", report.collinearity_max},
          {"poly_residual_max", report.poly_residual_max},
          {"sphere_limit", std::move(sphere)}};
}

template <RealScalar Real>
VerifyReport verify_state(const SolutionState<Real>& state, const VerifyOptions& options) {
  VerifyReport report;
  const int n = state.config.n;
  const auto sp = SurfacePoly<Real>::from_state(state);

  // Generated trajectories: the Fermat condition and the collinear form of
  // the reflection law must both hold at the middle impact.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < options.trajectories; ++t) {
    Vec<Real> a, b;
    for (int j = 0; j < n; ++j) {
      a.push_back(Real(options.impact_radius * unit(rng)));
      b.push_back(Real(options.impact_radius * unit(rng)));
    }
    const auto triple = continue_trajectory<Real>(sp, a, b);
    report.fermat_max = std::max(report.fermat_max, num::to_double(fermat_residual(sp, triple)));
    const auto pa = sp.lift(a, Sheet::upper), pb = sp.lift(b, Sheet::lower), pc = sp.lift(triple.c, Sheet::upper);
    Vec<Real> in(pb.size()), out(pb.size());
    for (std::size_t i = 0; i < pb.size(); ++i) {
      in[i] = pb[i] - pa[i];
      out[i] = pc[i] - pb[i];
    }
    report.collinearity_max = std::max(report.collinearity_max, num::to_double(collinearity_defect<Real>(sp, b, Sheet::lower, in, out)));
  }

  report.poly_residual_max = num::to_double(polynomial_equation_residual(state, 2 * state.config.K - 1));

  const auto dirs = random_directions<Real>(n, options.slope_directions, options.seed);
  const double slope = conjugacy_slope(state, sp, dirs, options.slope_radius);
  const double required = 2.0 * state.config.K - 1.0;
  report.slope_checks.push_back({n, state.config.K, options.slope_radius, slope, required, slope >= required - 0.5});
  return report;
}

#define BSERIES_INSTANTIATE(R)                                                                                       \
  template class SurfacePoly<R>;                                                                                     \
  template Vec<R> next_impact<R>(const SurfacePoly<R>&, std::span<const R>, std::span<const R>, Sheet);              \
  template Vec<R> reflect<R>(const SurfacePoly<R>&, std::span<const R>, Sheet, std::span<const R>);                 \
  template R collinearity_defect<R>(const SurfacePoly<R>&, std::span<const R>, Sheet, std::span<const R>,           \
                                    std::span<const R>);                                                             \
  template R fermat_residual<R>(const SurfacePoly<R>&, const ImpactTriple<R>&);                                     \
  template ImpactTriple<R> continue_trajectory<R>(const SurfacePoly<R>&, std::span<const R>, std::span<const R>);   \
  template R conjugacy_residual<R>(const SolutionState<R>&, const SurfacePoly<R>&, std::span<const std::complex<R>>); \
  template R polynomial_equation_residual<R>(const SolutionState<R>&, int);                                         \
  template double conjugacy_slope<R>(const SolutionState<R>&, const SurfacePoly<R>&,                                \
                                     const std::vector<std::vector<std::complex<R>>>&, double);                     \
  template std::vector<std::vector<std::complex<R>>> random_directions<R>(int, int, std::uint64_t);                 \
  template std::vector<SphereLimitPoint> sphere_limit<R>(const std::vector<double>&, const SolverConfig&);          \
  template VerifyReport verify_state<R>(const SolutionState<R>&, const VerifyOptions&);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
