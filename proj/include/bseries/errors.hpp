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

#include <stdexcept>
#include <string>
#include <vector>

namespace bseries {

// Mismatched variable counts, truncation degrees or packings between operands.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the domain of an operation (sqrt of a non-positive constant,
// substitution of a series with a constant term, evaluation outside the ball).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid run or solver configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A divisor λ_j + λ_j⁻¹ − λ^m − λ^{−m} fell below the configured floor.
class SmallDivisorError : public std::runtime_error {
 public:
  SmallDivisorError(int j, std::vector<int> m, int degree, double value);
  int coordinate() const noexcept { return j_; }
  const std::vector<int>& harmonic() const noexcept { return m_; }
  // Homogeneous degree of the χ form that needed the division.
  int degree() const noexcept { return degree_; }
  double value() const noexcept { return value_; }

 private:
  int j_;
  std::vector<int> m_;
  int degree_;
  double value_;
};

// The order-by-order system produced an inconsistent residual.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A ray left the neighbourhood where the truncated surface is trusted.
class EscapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero denominator in a coefficient ratio.
class GapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bseries
