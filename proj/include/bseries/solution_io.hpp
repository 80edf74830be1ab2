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

#include <iosfwd>

#include <json.hpp>

#include "bseries/solver.hpp"

namespace bseries {

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& doc);

// {config, frequencies, f_forms: [{k, coeffs: [[s…], F]}], chi_forms, diagnostics}.
template <RealScalar Real>
nlohmann::json to_json(const SolutionState<Real>& state);

// Inverse of to_json; throws StructuralError on malformed input.
template <RealScalar Real>
SolutionState<Real> solution_from_json(const nlohmann::json& doc);

// Columns s1..sn, F; one row per coefficient of f^(2k), k = 0..K.
template <RealScalar Real>
void write_f_csv(std::ostream& os, const SolutionState<Real>& state);

}  // namespace bseries
