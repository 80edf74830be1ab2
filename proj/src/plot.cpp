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

#include "bseries/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bseries {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_scan_svg(const std::vector<ScanPoint>& points, const PlotOptions& options) {
  const double left = 60, right = 20, top = 40, bottom = 50;
  const double w = options.width - left - right, h = options.height - top - bottom;

  double x_lo = 0.3, x_hi = 0.5, y_lo = 0, y_hi = 0;
  for (const auto& p : points) {
    x_lo = std::min(x_lo, p.ratio);
    x_hi = std::max(x_hi, p.ratio);
    if (p.status == ScanStatus::ok) y_hi = std::max(y_hi, p.b_inf_inv_sqrt);
  }
  y_hi = y_hi > 0 ? y_hi * 1.1 : 1.0;
  auto sx = [&](double x) { return left + w * (x - x_lo) / (x_hi - x_lo); };
  auto sy = [&](double y) { return top + h * (1.0 - (y - y_lo) / (y_hi - y_lo)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(left + w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(options.title)
      << "</text>\n";
  svg << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w)
      << "\" height=\"" << fmt(h) << "\"/></g>\n";

  for (int t = 0; t <= 4; ++t) {
    const double x = x_lo + (x_hi - x_lo) * t / 4.0;
    const double y = y_lo + (y_hi - y_lo) * t / 4.0;
    svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(top + h + 18) << "\" text-anchor=\"middle\">" << fmt(x, "%.3f")
        << "</text>\n";
    svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(y) + 4) << "\" text-anchor=\"end\">" << fmt(y, "%.3g")
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(options.height - 10.0)
      << "\" text-anchor=\"middle\">alpha/(2 pi)</text>\n";

  // One polyline per run of consecutive successful points.
  std::vector<std::vector<const ScanPoint*>> runs(1);
  for (const auto& p : points) {
    if (p.status == ScanStatus::ok) {
      runs.back().push_back(&p);
    } else if (!runs.back().empty()) {
      runs.emplace_back();
    }
  }
  for (const auto& run : runs) {
    if (run.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"1.5\" points=\"";
    for (const auto* p : run) svg << fmt(sx(p->ratio)) << ',' << fmt(sy(p->b_inf_inv_sqrt)) << ' ';
    svg << "\"/>\n";
  }
  for (const auto& p : points) {
    if (p.status == ScanStatus::ok) continue;
    const char* color = p.status == ScanStatus::gap ? "#c0392b" : "#7f8c8d";
    svg << "<line x1=\"" << fmt(sx(p.ratio)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(sx(p.ratio)) << "\" y2=\""
        << fmt(top + h) << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bseries
