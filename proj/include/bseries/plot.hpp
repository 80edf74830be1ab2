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

#include <string>
#include <vector>

#include "bseries/analyzer.hpp"

namespace bseries {

struct PlotOptions {
  int width = 720;
  int height = 420;
  std::string title = "b_inf^(-1/2) against alpha/(2 pi)";
};

// Static SVG line chart of a scan; gap and error points break the polyline and
// gap points are marked on the axis.
std::string render_scan_svg(const std::vector<ScanPoint>& points, const PlotOptions& options = {});

}  // namespace bseries
