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

#include "bseries/solution_io.hpp"

#include <ostream>
#include <string>

#include "bseries/detail/order_engine.hpp"
#include "bseries/series_json.hpp"

namespace bseries {

using nlohmann::json;

json to_json(const SolverConfig& config) {
  json doc = {{"n", config.n},
              {"K", config.K},
              {"f0", config.f0},
              {"gauge_a", config.effective_gauge()},
              {"divisor_floor", config.effective_divisor_floor()},
              {"precision", precision_name(config.precision)},
              {"gauge_rule", "zero"},
              {"kernel", kernel_name(config.kernel)},
              {"resonance_tolerance", config.resonance_tolerance}};
  return doc;
}

SolverConfig solver_config_from_json(const json& doc) {
  try {
    SolverConfig c;
    c.n = doc.at("n").get<int>();
    c.K = doc.at("K").get<int>();
    c.f0 = doc.value("f0", c.f0);
    c.gauge_a = doc.value("gauge_a", std::vector<double>{});
    if (doc.contains("divisor_floor")) c.divisor_floor = doc.at("divisor_floor").get<double>();
    c.precision = parse_precision(doc.value("precision", std::string("f64")));
    c.kernel = parse_kernel(doc.value("kernel", std::string("auto")));
    c.resonance_tolerance = doc.value("resonance_tolerance", c.resonance_tolerance);
    return c;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed solver config: ") + e.what());
  }
}

namespace {

json diagnostics_json(const OrderDiagnostics& d) {
  return {{"k", d.k},
          {"resonant_residual", d.resonant_residual},
          {"fermat_residual", d.fermat_residual},
          {"normalization_residual", d.normalization_residual},
          {"min_divisor", d.min_divisor}};
}

}  // namespace

template <RealScalar Real>
json to_json(const SolutionState<Real>& state) {
  const int n = state.config.n;
  json freqs = json::array();
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    freqs.push_back({{"alpha_over_2pi", real_to_json(state.frequencies.ratios[uj])},
                     {"alpha", real_to_json(state.frequencies.alphas[uj])}});
  }
  const auto& scan = state.frequencies.min_divisor_scan;
  json frequencies = {{"coordinates", std::move(freqs)},
                      {"min_divisor", {{"value", scan.value}, {"j", scan.j + 1}, {"m", scan.m}, {"max_degree", scan.max_degree}}}};

  json f_forms = json::array();
  for (int k = 0; k <= state.order; ++k) {
    json coeffs = json::array();
    for (const auto& [s, F] : state.f_form(k)) coeffs.push_back({s, real_to_json(F)});
    f_forms.push_back({{"k", k}, {"coeffs", std::move(coeffs)}});
  }

  json chi_forms = json::array();
  const auto roles = state.roles();
  for (int j = 0; j < n; ++j) {
    for (int k = 1; k <= state.order; ++k) {
      json coeffs = json::array();
      for (const auto& t : state.chi[static_cast<std::size_t>(j)].block(2 * k - 1)) {
        const auto index = state.chi[static_cast<std::size_t>(j)].packing().unpack(t.key);
        std::vector<int> lp, lpp;
        for (int i = 0; i < n; ++i) {
          lp.push_back(index[roles.pair(i).first]);
          lpp.push_back(index[roles.pair(i).second]);
        }
        coeffs.push_back({lp, lpp, real_to_json(t.value.real()), real_to_json(t.value.imag())});
      }
      chi_forms.push_back({{"j", j + 1}, {"k", k}, {"coeffs", std::move(coeffs)}});
    }
  }

  json diagnostics = json::array();
  for (const auto& d : state.diagnostics) diagnostics.push_back(diagnostics_json(d));

  return {{"config", to_json(state.config)},
          {"frequencies", std::move(frequencies)},
          {"order", state.order},
          {"f_forms", std::move(f_forms)},
          {"chi_forms", std::move(chi_forms)},
          {"diagnostics", std::move(diagnostics)}};
}

template <RealScalar Real>
SolutionState<Real> solution_from_json(const json& doc) {
  try {
    const SolverConfig config = solver_config_from_json(doc.at("config"));
    config.validate();
    const int n = config.n;
    FrequencyVector<Real> fv;
    fv.n = n;
    for (const auto& c : doc.at("frequencies").at("coordinates")) {
      fv.ratios.push_back(real_from_json<Real>(c.at("alpha_over_2pi")));
      fv.alphas.push_back(real_from_json<Real>(c.at("alpha")));
      fv.lambdas.push_back(num::unit(fv.alphas.back()));
    }
    if (static_cast<int>(fv.alphas.size()) != n) throw StructuralError("frequency count differs from n");
    const auto& scan = doc.at("frequencies").at("min_divisor");
    fv.min_divisor_scan = {scan.at("value").get<double>(), scan.at("j").get<int>() - 1, scan.at("m").get<std::vector<int>>(),
                           scan.at("max_degree").get<int>()};

    SolutionState<Real> state(config, std::move(fv));
    state.order = doc.at("order").get<int>();
    if (state.order < 0 || state.order > config.K) throw StructuralError("order outside [0, K]");
    for (const auto& form : doc.at("f_forms")) {
      for (const auto& c : form.at("coeffs")) {
        auto s = c.at(0).get<std::vector<int>>();
        if (static_cast<int>(s.size()) != n) throw StructuralError("f coefficient index has the wrong length");
        for (auto& v : s) v *= 2;
        state.f.add_term(MultiIndex(std::move(s)), real_from_json<Real>(c.at(1)));
      }
    }
    const auto roles = state.roles();
    for (const auto& form : doc.at("chi_forms")) {
      const int j = form.at("j").get<int>() - 1;
      if (j < 0 || j >= n) throw StructuralError("chi form coordinate out of range");
      for (const auto& c : form.at("coeffs")) {
        const auto lp = c.at(0).get<std::vector<int>>();
        const auto lpp = c.at(1).get<std::vector<int>>();
        if (static_cast<int>(lp.size()) != n || static_cast<int>(lpp.size()) != n) {
          throw StructuralError("chi coefficient index has the wrong length");
        }
        std::vector<int> e(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
          e[static_cast<std::size_t>(roles.pair(i).first)] = lp[static_cast<std::size_t>(i)];
          e[static_cast<std::size_t>(roles.pair(i).second)] = lpp[static_cast<std::size_t>(i)];
        }
        state.chi[static_cast<std::size_t>(j)].add_term(
            MultiIndex(std::move(e)), std::complex<Real>(real_from_json<Real>(c.at(2)), real_from_json<Real>(c.at(3))));
      }
    }
    for (const auto& d : doc.at("diagnostics")) {
      state.diagnostics.push_back({d.at("k").get<int>(), d.at("resonant_residual").get<double>(),
                                   d.at("fermat_residual").get<double>(), d.at("normalization_residual").get<double>(),
                                   d.at("min_divisor").get<double>()});
    }
    return state;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed solution document: ") + e.what());
  }
}

template <RealScalar Real>
void write_f_csv(std::ostream& os, const SolutionState<Real>& state) {
  const int n = state.config.n;
  for (int i = 1; i <= n; ++i) os << 's' << i << ',';
  os << "F\n";
  for (int k = 0; k <= state.order; ++k) {
    for (const auto& [s, F] : state.f_form(k)) {
      for (int v : s) os << v << ',';
      os << num::to_string(F) << '\n';
    }
  }
}

#define BSERIES_INSTANTIATE(R)                                            \
  template json to_json<R>(const SolutionState<R>&);                      \
  template SolutionState<R> solution_from_json<R>(const json&);           \
  template void write_f_csv<R>(std::ostream&, const SolutionState<R>&);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
