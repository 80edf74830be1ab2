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

#include "bseries/scalar.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "bseries/errors.hpp"

namespace bseries {

const char* precision_name(Precision p) {
  return p == Precision::binary64 ? "f64" : "ext";
}

Precision parse_precision(std::string_view text) {
  if (text == "f64" || text == "binary64") return Precision::binary64;
  if (text == "ext" || text == "extended") return Precision::extended;
  throw ConfigError("precision", "must be f64 or ext, got '" + std::string(text) + "'");
}

namespace num {

namespace {
void check_parsed(const std::string& text, const char* end) {
  if (text.empty() || end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("not a real number: '" + text + "'");
  }
}
}  // namespace

template <>
double parse<double>(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  check_parsed(text, end);
  if (errno == ERANGE) throw std::invalid_argument("out of range: '" + text + "'");
  return value;
}

template <>
Quad parse<Quad>(const std::string& text) {
  char* end = nullptr;
  const Quad value = ::strtoflt128(text.c_str(), &end);
  check_parsed(text, end);
  return value;
}

std::string to_string(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string to_string(Quad x, int digits) {
  char buf[96];
  ::quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, x);
  return buf;
}

}  // namespace num
}  // namespace bseries
