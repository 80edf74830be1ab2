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

#include "bseries/frequency.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "bseries/errors.hpp"

namespace bseries {

namespace {

std::string join_ints(std::span<const int> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> parse_quotients(std::string_view text, const std::string& whole) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item(text.substr(pos, comma - pos));
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return c == ' '; }), item.end());
    if (!item.empty()) {
      char* end = nullptr;
      const long q = std::strtol(item.c_str(), &end, 10);
      if (*end != '\0' || q < 1 || q > 1000000) {
        throw ConfigError("alpha-cf", "partial quotients must be positive integers in '" + whole + "'");
      }
      out.push_back(static_cast<int>(q));
    }
    pos = comma + 1;
  }
  return out;
}

// Calls fn(m) for every m ∈ ℤⁿ with ‖m‖₁ = degree.
void for_each_harmonic(int n, int degree, const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> m(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      m[static_cast<std::size_t>(i)] = left;
      fn(m);
      if (left != 0) {
        m[static_cast<std::size_t>(i)] = -left;
        fn(m);
      }
      return;
    }
    for (int a = 0; a <= left; ++a) {
      m[static_cast<std::size_t>(i)] = a;
      rec(i + 1, left - a);
      if (a != 0) {
        m[static_cast<std::size_t>(i)] = -a;
        rec(i + 1, left - a);
      }
    }
  };
  rec(0, degree);
}

bool in_scope(int j, std::span<const int> m, DivisorScope scope) {
  const int n = static_cast<int>(m.size());
  bool unit = true;
  for (int i = 0; i < n; ++i) {
    const int want = i == j ? 1 : 0;
    if (std::abs(m[static_cast<std::size_t>(i)]) != want) unit = false;
  }
  if (unit) return false;
  if (scope == DivisorScope::all) return true;
  for (int i = 0; i < n; ++i) {
    const bool odd = (m[static_cast<std::size_t>(i)] % 2) != 0;
    if (odd != (i == j)) return false;
  }
  return true;
}

}  // namespace

ContinuedFraction ContinuedFraction::parse(std::string_view text) {
  const std::string whole(text);
  const auto open = text.find('[');
  const auto close = text.find(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      text.find_first_not_of(' ', close + 1) != std::string_view::npos) {
    throw ConfigError("alpha-cf", "expected 'q1,q2,[p1,p2]', got '" + whole + "'");
  }
  ContinuedFraction cf;
  cf.preperiod = parse_quotients(text.substr(0, open), whole);
  cf.period = parse_quotients(text.substr(open + 1, close - open - 1), whole);
  if (cf.period.empty()) throw ConfigError("alpha-cf", "period must be non-empty in '" + whole + "'");
  return cf;
}

std::string ContinuedFraction::to_string() const {
  std::string out = join_ints(preperiod);
  if (!out.empty()) out += ',';
  return out + '[' + join_ints(period) + ']';
}

template <RealScalar Real>
Real eval_cf(const ContinuedFraction& cf) {
  if (cf.period.empty()) throw ConfigError("alpha-cf", "period must be non-empty");
  // x ↦ 1/(q + x) is the Möbius map [[0, 1], [1, q]]; compose over one period.
  Real a = 1, b = 0, c = 0, d = 1;
  for (int q : cf.period) {
    const Real na = b, nb = a + Real(q) * b;
    const Real nc = d, nd = c + Real(q) * d;
    a = na, b = nb, c = nc, d = nd;
  }
  // Fixed point of x = (a x + b)/(c x + d): c x² + (d − a) x − b = 0, positive root.
  const Real p = d - a;
  const Real disc = num::sqrt(p * p + Real(4) * b * c);
  Real x = p >= Real(0) ? Real(2) * b / (p + disc) : (disc - p) / (Real(2) * c);
  for (auto it = cf.preperiod.rbegin(); it != cf.preperiod.rend(); ++it) x = Real(1) / (Real(*it) + x);
  return x;
}

AngleSpec AngleSpec::explicit_ratio(std::string text) {
  AngleSpec s;
  s.text_ = std::move(text);
  num::parse<double>(s.text_);
  return s;
}

AngleSpec AngleSpec::explicit_ratio(double value) { return explicit_ratio(num::to_string(value)); }

AngleSpec AngleSpec::continued_fraction(ContinuedFraction cf) {
  AngleSpec s;
  s.is_cf_ = true;
  s.cf_ = std::move(cf);
  return s;
}

template <RealScalar Real>
Real AngleSpec::ratio() const {
  return is_cf_ ? eval_cf<Real>(cf_) : num::parse<Real>(text_);
}

std::string AngleSpec::to_string() const { return is_cf_ ? cf_.to_string() : text_; }

template <RealScalar Real>
Real divisor(std::span<const Real> alphas, int j, std::span<const int> m) {
  Real phase = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) phase += Real(m[i]) * alphas[i];
  return Real(2) * num::cos(alphas[static_cast<std::size_t>(j)]) - Real(2) * num::cos(phase);
}

template <RealScalar Real>
DivisorScan min_divisor(std::span<const Real> alphas, int max_degree, DivisorScope scope) {
  const int n = static_cast<int>(alphas.size());
  DivisorScan best;
  best.max_degree = max_degree;
  best.value = -1;
  for (int d = 0; d <= max_degree; ++d) {
    for_each_harmonic(n, d, [&](std::span<const int> m) {
      for (int j = 0; j < n; ++j) {
        if (!in_scope(j, m, scope)) continue;
        const double v = num::to_double(num::abs(divisor<Real>(alphas, j, m)));
        if (best.value < 0 || v < best.value) {
          best.value = v;
          best.j = j;
          best.m.assign(m.begin(), m.end());
        }
      }
    });
  }
  if (best.value < 0) best.value = 0;
  return best;
}

template <RealScalar Real>
DivisorScan first_small_divisor(std::span<const Real> alphas, int max_degree, DivisorScope scope, Real floor) {
  const int n = static_cast<int>(alphas.size());
  DivisorScan hit;
  hit.max_degree = max_degree;
  for (int d = 0; d <= max_degree && hit.m.empty(); ++d) {
    for_each_harmonic(n, d, [&](std::span<const int> m) {
      if (!hit.m.empty()) return;
      for (int j = 0; j < n; ++j) {
        if (!in_scope(j, m, scope)) continue;
        const Real v = num::abs(divisor<Real>(alphas, j, m));
        if (v < floor) {
          hit.value = num::to_double(v);
          hit.j = j;
          hit.m.assign(m.begin(), m.end());
          return;
        }
      }
    });
  }
  return hit;
}

template <RealScalar Real>
FrequencyVector<Real> make_frequencies(std::span<const AngleSpec> specs, int scan_degree) {
  if (specs.empty()) throw ConfigError("n", "at least one frequency is required");
  FrequencyVector<Real> fv;
  fv.n = static_cast<int>(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const std::string field = specs.size() == 1 ? "alpha" : "alpha" + std::to_string(j + 1);
    const Real r = specs[j].ratio<Real>();
    if (r == Real(0.5)) {
      throw ConfigError(field, "α = π gives λ = −1, a degenerate rotation with no locally integrable solution");
    }
    if (!num::isfinite(r) || !(r > Real(0)) || !(r < Real(0.5))) {
      throw ConfigError(field, "α/(2π) = " + num::to_string(num::to_double(r)) +
                                   " must lie in (0, 1/2); reflect α ↦ 2π − α to normalize");
    }
    fv.ratios.push_back(r);
    fv.alphas.push_back(Real(2) * num::pi<Real>() * r);
    fv.lambdas.push_back(num::unit(fv.alphas.back()));
  }
  for (int j = 0; j < fv.n; ++j) {
    for (int l = j + 1; l < fv.n; ++l) {
      const auto& a = fv.lambdas[static_cast<std::size_t>(j)];
      const auto& b = fv.lambdas[static_cast<std::size_t>(l)];
      if (num::abs(a - b) < Real(1e-13) || num::abs(a - std::conj(b)) < Real(1e-13)) {
        throw ConfigError("alpha" + std::to_string(l + 1), "degenerate frequencies: λ" + std::to_string(j + 1) +
                                                               " = λ" + std::to_string(l + 1) + "^{±1}");
      }
    }
  }
  fv.min_divisor_scan = min_divisor<Real>(std::span<const Real>(fv.alphas), scan_degree);
  return fv;
}

SmallDivisorError::SmallDivisorError(int j, std::vector<int> m, int degree, double value)
    : std::runtime_error("small divisor " + num::to_string(value, 3) + " for coordinate " + std::to_string(j + 1) +
                         " at harmonic m = (" + join_ints(m) + "), order " + std::to_string(degree)),
      j_(j),
      m_(std::move(m)),
      degree_(degree),
      value_(value) {}

#define BSERIES_INSTANTIATE(R)                                                                        \
  template R eval_cf<R>(const ContinuedFraction&);                                                    \
  template R AngleSpec::ratio<R>() const;                                                             \
  template R divisor<R>(std::span<const R>, int, std::span<const int>);                               \
  template DivisorScan min_divisor<R>(std::span<const R>, int, DivisorScope);                         \
  template DivisorScan first_small_divisor<R>(std::span<const R>, int, DivisorScope, R);              \
  template FrequencyVector<R> make_frequencies<R>(std::span<const AngleSpec>, int);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
