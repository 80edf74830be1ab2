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

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>

#include <quadmath.h>

namespace bseries {

// 113-bit significand; the extended-precision coefficient type.
using Quad = __float128;

template <class T>
concept RealScalar = std::is_same_v<T, double> || std::is_same_v<T, Quad>;

enum class Precision { binary64, extended };

const char* precision_name(Precision p);
Precision parse_precision(std::string_view text);

namespace num {

inline double sqrt(double x) { return std::sqrt(x); }
inline Quad sqrt(Quad x) { return ::sqrtq(x); }
inline double cos(double x) { return std::cos(x); }
inline Quad cos(Quad x) { return ::cosq(x); }
inline double sin(double x) { return std::sin(x); }
inline Quad sin(Quad x) { return ::sinq(x); }
inline double abs(double x) { return std::fabs(x); }
inline Quad abs(Quad x) { return ::fabsq(x); }
inline double log(double x) { return std::log(x); }
inline Quad log(Quad x) { return ::logq(x); }
inline double exp(double x) { return std::exp(x); }
inline Quad exp(Quad x) { return ::expq(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline Quad atan2(Quad y, Quad x) { return ::atan2q(y, x); }
inline double hypot(double x, double y) { return std::hypot(x, y); }
inline Quad hypot(Quad x, Quad y) { return ::hypotq(x, y); }
inline bool isfinite(double x) { return std::isfinite(x); }
inline bool isfinite(Quad x) { return ::finiteq(x) != 0; }

template <RealScalar R>
R pi() {
  if constexpr (std::is_same_v<R, double>) {
    return std::numbers::pi;
  } else {
    return ::acosq(Quad(-1));
  }
}

template <RealScalar R>
R epsilon() {
  if constexpr (std::is_same_v<R, double>) {
    return 0x1p-52;
  } else {
    return ::ldexpq(Quad(1), -112);
  }
}

template <RealScalar R>
R abs(const std::complex<R>& z) {
  return hypot(z.real(), z.imag());
}

// e^{i angle}
template <RealScalar R>
std::complex<R> unit(R angle) {
  return {cos(angle), sin(angle)};
}

inline double to_double(double x) { return x; }
inline double to_double(Quad x) { return static_cast<double>(x); }

// Parses a decimal literal at the full working precision.
template <RealScalar R>
R parse(const std::string& text);

std::string to_string(double x, int digits = 17);
std::string to_string(Quad x, int digits = 36);

}  // namespace num
}  // namespace bseries
