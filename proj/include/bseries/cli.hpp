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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bseries/analyzer.hpp"
#include "bseries/frequency.hpp"
#include "bseries/plot.hpp"
#include "bseries/solver.hpp"

namespace bseries {

enum class ExitCode : int { ok = 0, config = 1, small_divisor = 2, consistency = 3, io = 4 };

struct RunConfig {
  std::string subcommand;
  SolverConfig solver;
  std::vector<AngleSpec> frequencies;
  std::string input;     // solution JSON (verify, fit, table) or scan CSV (plot)
  std::string out;       // primary artifact; empty means stdout
  std::string csv;       // secondary CSV artifact
  std::string manifest;  // defaults to <out>.manifest.json
  std::vector<std::string> grid;
  std::optional<FitWindow> window;
  int workers = 0;
  std::uint64_t seed = 1;
  std::vector<double> sphere_epsilons{1e-1, 1e-2, 1e-3};
  PlotOptions plot;
};

// Flat JSON form; keys mirror the long flags with '-' replaced by '_'.
nlohmann::json to_json(const RunConfig& config);
// Throws ConfigError naming the offending field.
RunConfig run_config_from_json(const std::string& subcommand, const nlohmann::json& doc);

// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// Parses argv, runs the subcommand and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bseries
