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

#include "bseries/series_json.hpp"

#include <string>

namespace bseries {

template <RealScalar Real>
nlohmann::json real_to_json(Real x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return num::to_string(x);
  }
}

template <RealScalar Real>
Real real_from_json(const nlohmann::json& v) {
  if (v.is_number()) return Real(v.get<double>());
  if (v.is_string()) return num::parse<Real>(v.get<std::string>());
  throw StructuralError("expected a number or a decimal string, got " + v.dump());
}

template <RealScalar Real>
nlohmann::json to_json(const TruncatedSeries<Real>& g) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [index, c] : g.terms()) {
    terms.push_back({index.exponents(), real_to_json(c.real()), real_to_json(c.imag())});
  }
  return {{"num_vars", g.num_vars()}, {"trunc_degree", g.trunc_degree()}, {"terms", std::move(terms)}};
}

template <RealScalar Real>
TruncatedSeries<Real> series_from_json(const nlohmann::json& doc) {
  try {
    const int m = doc.at("num_vars").get<int>();
    const int D = doc.at("trunc_degree").get<int>();
    if (m < 1 || D < 0) throw StructuralError("num_vars must be positive and trunc_degree non-negative");
    std::vector<std::pair<MultiIndex, std::complex<Real>>> terms;
    for (const auto& t : doc.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw StructuralError("term must be [[exponents], re, im]");
      auto exps = t[0].get<std::vector<int>>();
      if (static_cast<int>(exps.size()) != m) throw StructuralError("exponent vector length differs from num_vars");
      for (int e : exps) {
        if (e < 0) throw StructuralError("negative exponent");
      }
      MultiIndex index(std::move(exps));
      if (index.degree() > D) throw StructuralError("term above the truncation degree");
      terms.emplace_back(std::move(index), std::complex<Real>(real_from_json<Real>(t[1]), real_from_json<Real>(t[2])));
    }
    return TruncatedSeries<Real>::from_terms(m, D, terms);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed series document: ") + e.what());
  }
}

#define BSERIES_INSTANTIATE(R)                                                 \
  template nlohmann::json real_to_json<R>(R);                                  \
  template R real_from_json<R>(const nlohmann::json&);                         \
  template nlohmann::json to_json<R>(const TruncatedSeries<R>&);               \
  template TruncatedSeries<R> series_from_json<R>(const nlohmann::json&);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
