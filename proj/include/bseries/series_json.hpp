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

#include <json.hpp>

#include "bseries/series.hpp"

namespace bseries {

// {num_vars, trunc_degree, terms: [[exponents...], re, im]} in graded-lex order.
// binary64 coefficients are JSON numbers and round-trip bit-exactly; extended
// coefficients are written as decimal strings with 36 significant digits.
template <RealScalar Real>
nlohmann::json to_json(const TruncatedSeries<Real>& g);

// Throws StructuralError on malformed documents.
template <RealScalar Real>
TruncatedSeries<Real> series_from_json(const nlohmann::json& doc);

template <RealScalar Real>
nlohmann::json real_to_json(Real x);
template <RealScalar Real>
Real real_from_json(const nlohmann::json& v);

}  // namespace bseries
