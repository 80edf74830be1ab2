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

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bseries/series.hpp"

namespace bseries::detail {

// All s ∈ ℤ₊ⁿ with ‖s‖ = k, first component descending.
inline std::vector<std::vector<int>> compositions(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      s[static_cast<std::size_t>(i)] = left;
      out.push_back(s);
      return;
    }
    for (int a = left; a >= 0; --a) {
      s[static_cast<std::size_t>(i)] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, k);
  return out;
}

// Incremental state of the order-by-order construction. Order k ≥ 2 runs as
// normalization_diagonal(k), set_f_order(k), reflection_residual(k), set_chi_order(k).
template <RealScalar Real>
class OrderEngine {
 public:
  using Coefficient = std::pair<MultiIndex, std::complex<Real>>;

  virtual ~OrderEngine() = default;

  // χ^(1)_j = a_j (z_j + z̄_j), f = f0 + Σ F_{e_j} x_j².
  virtual void init(std::span<const Real> gauge_a, Real f0, std::span<const Real> f2) = 0;
  // Diagonal coefficients of ⟨L⟩ at degree 2k with f^(2k) and χ^(2k−1) zero,
  // in the order of compositions(n, k).
  virtual std::vector<std::complex<Real>> normalization_diagonal(int k) = 0;
  virtual void set_f_order(int k, std::span<const Real> F) = 0;
  // Degree-(2k−1) coefficients of the reflection equation E_j, per j.
  virtual std::vector<std::vector<Coefficient>> reflection_residual(int k) = 0;
  virtual void set_chi_order(int k, const std::vector<std::vector<Coefficient>>& chi) = 0;

  // Current largest |E_j| coefficient at degree 2k − 1.
  virtual Real fermat_residual(int k) const = 0;
  // Current largest diagonal coefficient of ⟨L⟩ at degree 2k.
  virtual Real normalization_residual(int k) const = 0;

  virtual std::vector<Coefficient> chi_form(int j, int degree) const = 0;
};

// Degree-bucketed streams of every intermediate series of the explicit
// reflection equation, generic over the block representation.
template <RealScalar Real, class Algebra>
class DegreeStreams final : public OrderEngine<Real> {
 public:
  using Block = typename Algebra::Block;
  using Stream = std::vector<Block>;
  using Coefficient = typename OrderEngine<Real>::Coefficient;

  DegreeStreams(Algebra algebra, int n, int K) : alg_(std::move(algebra)), n_(n), K_(K), top_(2 * K) {
    for (int k = 0; k <= K_; ++k) {
      for (auto& s : compositions(n_, k)) {
        id_[s] = static_cast<int>(svec_.size());
        svec_.push_back(std::move(s));
      }
    }
    const std::size_t ns = svec_.size();
    parent_.assign(ns, -1);
    var_.assign(ns, -1);
    norm_.assign(ns, 0);
    minus_.assign(ns, std::vector<int>(static_cast<std::size_t>(n_), -1));
    F_.assign(ns, Real(0));
    for (std::size_t id = 0; id < ns; ++id) {
      const auto& s = svec_[id];
      for (int j = 0; j < n_; ++j) {
        norm_[id] += s[static_cast<std::size_t>(j)];
        if (s[static_cast<std::size_t>(j)] == 0) continue;
        auto t = s;
        --t[static_cast<std::size_t>(j)];
        const int tid = id_.at(t);
        minus_[id][static_cast<std::size_t>(j)] = tid;
        if (parent_[id] < 0) {
          parent_[id] = tid;
          var_[id] = j;
        }
      }
    }
    const auto blank = [&] { return Stream(static_cast<std::size_t>(top_) + 1); };
    const auto blanks = [&](std::size_t count) { return std::vector<Stream>(count, blank()); };
    chi_ = tmc_ = tpc_ = G_ = Nm_ = Np_ = E_ = U_ = H_ = blanks(static_cast<std::size_t>(n_));
    W_ = blanks(ns);
    fc_ = tmf_ = tpf_ = Q_ = Lm_ = iLm_ = Lp_ = iLp_ = blank();
  }

  void init(std::span<const Real> gauge_a, Real f0, std::span<const Real> f2) override {
    f0_ = f0;
    l0_ = Real(2) * num::abs(f0);
    F_[0] = f0;
    for (int j = 0; j < n_; ++j) {
      std::vector<int> e(static_cast<std::size_t>(n_), 0);
      e[static_cast<std::size_t>(j)] = 1;
      F_[static_cast<std::size_t>(id_.at(e))] = f2[static_cast<std::size_t>(j)];
      const auto [z, zbar] = alg_.roles().pair(j);
      const std::complex<Real> a(gauge_a[static_cast<std::size_t>(j)]);
      std::vector<Coefficient> c{{MultiIndex::unit(2 * n_, z), a}, {MultiIndex::unit(2 * n_, zbar), a}};
      chi_[static_cast<std::size_t>(j)][1] = alg_.from_coefficients(c, 1);
    }
    compute_even(0);
    compute_odd(1);
    compute_even(2);
  }

  std::vector<std::complex<Real>> normalization_diagonal(int k) override {
    compute_even(2 * k);
    std::vector<std::complex<Real>> out;
    for (const auto& s : compositions(n_, k)) out.push_back(alg_.diagonal(Lm_[static_cast<std::size_t>(2 * k)], s, 2 * k));
    return out;
  }

  void set_f_order(int k, std::span<const Real> F) override {
    const auto list = compositions(n_, k);
    for (std::size_t i = 0; i < list.size(); ++i) F_[static_cast<std::size_t>(id_.at(list[i]))] = F[i];
    compute_H(2 * k - 2);
  }

  std::vector<std::vector<Coefficient>> reflection_residual(int k) override {
    const int d = 2 * k - 1;
    compute_odd(d);
    std::vector<std::vector<Coefficient>> out;
    for (int j = 0; j < n_; ++j) out.push_back(alg_.coefficients(E_[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)], d));
    return out;
  }

  void set_chi_order(int k, const std::vector<std::vector<Coefficient>>& chi) override {
    const int d = 2 * k - 1;
    for (int j = 0; j < n_; ++j) chi_[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] = alg_.from_coefficients(chi[static_cast<std::size_t>(j)], d);
    compute_odd(d);
    compute_even(2 * k);
    if constexpr (requires(Algebra& a) { a.set_radius(Real(1)); }) keep_in_range(d);
  }

  Real fermat_residual(int k) const override {
    Real best = 0;
    for (int j = 0; j < n_; ++j) {
      best = std::max(best, alg_.max_abs(E_[static_cast<std::size_t>(j)][static_cast<std::size_t>(2 * k - 1)], 2 * k - 1));
    }
    return best;
  }

  Real normalization_residual(int k) const override {
    Real best = 0;
    for (const auto& s : compositions(n_, k)) {
      best = std::max(best, num::abs(alg_.diagonal(Lm_[static_cast<std::size_t>(2 * k)], s, 2 * k)));
    }
    return best;
  }

  std::vector<Coefficient> chi_form(int j, int degree) const override {
    return alg_.coefficients(chi_[static_cast<std::size_t>(j)][static_cast<std::size_t>(degree)], degree);
  }

 private:
  using Acc = typename Algebra::Accumulator;

  static Block& at(Stream& s, int d) { return s[static_cast<std::size_t>(d)]; }
  static const Block& at(const Stream& s, int d) { return s[static_cast<std::size_t>(d)]; }

  Block rotated_sum(const Block& b, int d, int p, Real sign) const {
    Acc acc(alg_);
    acc.add_scaled(b, Real(1));
    acc.add_scaled(alg_.rotate(b, d, p), sign);
    return acc.finish();
  }

  void compute_H(int d) {
    for (int j = 0; j < n_; ++j) {
      Acc acc(alg_);
      for (std::size_t id = 0; id < svec_.size(); ++id) {
        const int sj = svec_[id][static_cast<std::size_t>(j)];
        if (sj == 0 || 2 * (norm_[id] - 1) > d) continue;
        acc.add_scaled(at(W_[static_cast<std::size_t>(minus_[id][static_cast<std::size_t>(j)])], d), Real(2 * sj) * F_[id]);
      }
      at(H_[static_cast<std::size_t>(j)], d) = acc.finish();
    }
  }

  void compute_even(int d) {
    for (int j = 0; j < n_; ++j) {
      Acc acc(alg_);
      for (int i = 1; i < d; i += 2) acc.add_product(at(chi_[static_cast<std::size_t>(j)], i), at(chi_[static_cast<std::size_t>(j)], d - i));
      at(U_[static_cast<std::size_t>(j)], d) = acc.finish();
    }
    for (std::size_t id = 0; id < svec_.size(); ++id) {
      if (2 * norm_[id] > d) continue;
      if (id == 0) {
        at(W_[0], d) = d == 0 ? alg_.constant(Real(1)) : Block{};
        continue;
      }
      const auto& parent = W_[static_cast<std::size_t>(parent_[id])];
      const auto& u = U_[static_cast<std::size_t>(var_[id])];
      Acc acc(alg_);
      for (int i = 2; i <= d - 2 * (norm_[id] - 1); i += 2) acc.add_product(at(u, i), at(parent, d - i));
      at(W_[id], d) = acc.finish();
    }
    {
      Acc acc(alg_);
      for (std::size_t id = 0; id < svec_.size(); ++id) {
        if (2 * norm_[id] <= d) acc.add_scaled(at(W_[id], d), F_[id]);
      }
      at(fc_, d) = acc.finish();
    }
    at(tmf_, d) = rotated_sum(at(fc_, d), d, -1, Real(1));
    at(tpf_, d) = rotated_sum(at(fc_, d), d, +1, Real(1));
    compute_H(d);
    {
      Acc acc(alg_);
      for (int j = 0; j < n_; ++j) {
        for (int i = 1; i < d; i += 2) acc.add_product(at(tmc_[static_cast<std::size_t>(j)], i), at(tmc_[static_cast<std::size_t>(j)], d - i));
      }
      for (int i = 0; i <= d; i += 2) acc.add_product(at(tmf_, i), at(tmf_, d - i));
      at(Q_, d) = acc.finish();
    }
    if (d == 0) {
      at(Lm_, 0) = alg_.constant(l0_);
      at(iLm_, 0) = alg_.constant(Real(1) / l0_);
    } else {
      Acc acc(alg_);
      acc.add_scaled(at(Q_, d), Real(1) / (Real(2) * l0_));
      for (int i = 2; i <= d - 2; i += 2) {
        Acc prod(alg_);
        prod.add_product(at(Lm_, i), at(Lm_, d - i));
        acc.add_scaled(prod.finish(), Real(-1) / (Real(2) * l0_));
      }
      at(Lm_, d) = acc.finish();
      Acc inv(alg_);
      for (int i = 2; i <= d; i += 2) inv.add_product(at(Lm_, i), at(iLm_, d - i));
      Acc scaled(alg_);
      scaled.add_scaled(inv.finish(), Real(-1) / l0_);
      at(iLm_, d) = scaled.finish();
    }
    at(Lp_, d) = d == 0 ? at(Lm_, 0) : alg_.rotate(at(Lm_, d), d, +1);
    at(iLp_, d) = d == 0 ? at(iLm_, 0) : alg_.rotate(at(iLm_, d), d, +1);
  }

  void compute_odd(int d) {
    for (int j = 0; j < n_; ++j) {
      const auto J = static_cast<std::size_t>(j);
      at(tmc_[J], d) = rotated_sum(at(chi_[J], d), d, -1, Real(-1));
      at(tpc_[J], d) = rotated_sum(at(chi_[J], d), d, +1, Real(-1));
      {
        Acc acc(alg_);
        for (int i = 1; i <= d; i += 2) acc.add_product(at(chi_[J], i), at(H_[J], d - i));
        at(G_[J], d) = acc.finish();
      }
      {
        Acc m(alg_), p(alg_);
        m.add_scaled(at(tmc_[J], d), Real(1));
        p.add_scaled(at(tpc_[J], d), Real(1));
        for (int i = 0; i < d; i += 2) {
          m.add_product(at(tmf_, i), at(G_[J], d - i));
          p.add_product(at(tpf_, i), at(G_[J], d - i));
        }
        at(Nm_[J], d) = m.finish();
        at(Np_[J], d) = p.finish();
      }
      {
        Acc acc(alg_);
        for (int i = 1; i <= d; i += 2) {
          acc.add_product(at(Nm_[J], i), at(iLm_, d - i));
          acc.add_product(at(Np_[J], i), at(iLp_, d - i));
        }
        at(E_[J], d) = acc.finish();
      }
    }
  }

  // Rescales the sampling radius when the newest χ block drifts far from
  // unit magnitude, so that high-order blocks stay inside the binary64 range.
  void keep_in_range(int d) {
    Real peak = 0;
    for (int j = 0; j < n_; ++j) peak = std::max(peak, alg_.max_sample(at(chi_[static_cast<std::size_t>(j)], d)));
    if (peak == Real(0) || (peak < Real(1e40) && peak > Real(1e-40))) return;
    const Real c = num::exp(-num::log(peak) / Real(d));
    std::vector<Real> cpow(static_cast<std::size_t>(top_) + 1, Real(1));
    for (int i = 1; i <= top_; ++i) cpow[static_cast<std::size_t>(i)] = cpow[static_cast<std::size_t>(i - 1)] * c;
    auto rescale = [&](Stream& s) {
      for (int i = 0; i <= top_; ++i) {
        for (auto& v : at(s, i)) v *= cpow[static_cast<std::size_t>(i)];
      }
    };
    for (auto* group : {&chi_, &tmc_, &tpc_, &G_, &Nm_, &Np_, &E_, &U_, &H_, &W_}) {
      for (auto& s : *group) rescale(s);
    }
    for (auto* s : {&fc_, &tmf_, &tpf_, &Q_, &Lm_, &iLm_, &Lp_, &iLp_}) rescale(*s);
    alg_.set_radius(alg_.radius() * c);
  }

  Algebra alg_;
  int n_;
  int K_;
  int top_;
  Real f0_ = Real(-0.5);
  Real l0_ = Real(1);

  std::vector<std::vector<int>> svec_;
  std::map<std::vector<int>, int> id_;
  std::vector<int> parent_, var_, norm_;
  std::vector<std::vector<int>> minus_;
  std::vector<Real> F_;

  std::vector<Stream> chi_, tmc_, tpc_, G_, Nm_, Np_, E_;  // odd degrees
  std::vector<Stream> U_, H_, W_;                           // even degrees
  Stream fc_, tmf_, tpf_, Q_, Lm_, iLm_, Lp_, iLp_;         // even degrees
};

}  // namespace bseries::detail
