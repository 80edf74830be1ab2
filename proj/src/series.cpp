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

#include "bseries/series.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace bseries {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw StructuralError("negative exponent in multi-index");
  }
  degree_ = std::accumulate(exps_.begin(), exps_.end(), 0);
}

MultiIndex MultiIndex::zero(int num_vars) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(num_vars), 0));
}

MultiIndex MultiIndex::unit(int num_vars, int i) {
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size() != other.size()) throw StructuralError("multi-index size mismatch");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  return a.exps_ <=> b.exps_;
}

MonomialPacking::MonomialPacking(int num_vars, int max_degree) : num_vars_(num_vars) {
  if (num_vars <= 0 || num_vars > 32) throw StructuralError("variable count must be in [1, 32]");
  bits_ = std::min(64 / num_vars, 32);
  mask_ = (std::uint64_t{1} << bits_) - 1;
  if (max_degree < 0 || static_cast<std::uint64_t>(max_degree) > mask_) {
    throw StructuralError("truncation degree " + std::to_string(max_degree) + " does not fit " +
                          std::to_string(bits_) + "-bit exponents");
  }
}

std::uint64_t MonomialPacking::pack(const MultiIndex& index) const {
  if (index.size() != num_vars_) throw StructuralError("multi-index size does not match series");
  std::uint64_t key = 0;
  for (int i = 0; i < num_vars_; ++i) key |= static_cast<std::uint64_t>(index[i]) << shift(i);
  return key;
}

MultiIndex MonomialPacking::unpack(std::uint64_t key) const {
  std::vector<int> e(static_cast<std::size_t>(num_vars_));
  for (int i = 0; i < num_vars_; ++i) e[static_cast<std::size_t>(i)] = exponent(key, i);
  return MultiIndex(std::move(e));
}

// ---------------------------------------------------------------------------
// TruncatedSeries

template <RealScalar Real>
TruncatedSeries<Real>::TruncatedSeries(int num_vars, int trunc_degree)
    : num_vars_(num_vars),
      trunc_degree_(trunc_degree),
      packing_(num_vars, trunc_degree),
      blocks_(static_cast<std::size_t>(trunc_degree) + 1) {}

template <RealScalar Real>
TruncatedSeries<Real> TruncatedSeries<Real>::constant(int num_vars, int trunc_degree, Scalar c) {
  TruncatedSeries s(num_vars, trunc_degree);
  s.add_term(MultiIndex::zero(num_vars), c);
  return s;
}

template <RealScalar Real>
TruncatedSeries<Real> TruncatedSeries<Real>::variable(int num_vars, int trunc_degree, int i, Scalar c) {
  TruncatedSeries s(num_vars, trunc_degree);
  s.add_term(MultiIndex::unit(num_vars, i), c);
  return s;
}

template <RealScalar Real>
TruncatedSeries<Real> TruncatedSeries<Real>::from_terms(
    int num_vars, int trunc_degree, const std::vector<std::pair<MultiIndex, Scalar>>& terms) {
  TruncatedSeries s(num_vars, trunc_degree);
  for (const auto& [index, c] : terms) s.add_term(index, c);
  return s;
}

template <RealScalar Real>
const HomogeneousBlock<Real>& TruncatedSeries<Real>::block(int d) const {
  static const HomogeneousBlock<Real> empty;
  if (d < 0 || d > trunc_degree_) return empty;
  return blocks_[static_cast<std::size_t>(d)];
}

template <RealScalar Real>
auto TruncatedSeries<Real>::coeff(const MultiIndex& index) const -> Scalar {
  if (index.size() != num_vars_) throw StructuralError("multi-index size does not match series");
  const auto& b = block(index.degree());
  const std::uint64_t key = packing_.pack(index);
  auto it = std::lower_bound(b.begin(), b.end(), key, [](const Term<Real>& t, std::uint64_t k) { return t.key < k; });
  return (it != b.end() && it->key == key) ? it->value : Scalar(0);
}

template <RealScalar Real>
auto TruncatedSeries<Real>::constant_term() const -> Scalar {
  return blocks_[0].empty() ? Scalar(0) : blocks_[0].front().value;
}

template <RealScalar Real>
std::size_t TruncatedSeries<Real>::size() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.size();
  return n;
}

template <RealScalar Real>
int TruncatedSeries<Real>::lowest_degree() const noexcept {
  for (int d = 0; d <= trunc_degree_; ++d) {
    if (!blocks_[static_cast<std::size_t>(d)].empty()) return d;
  }
  return -1;
}

template <RealScalar Real>
auto TruncatedSeries<Real>::terms() const -> std::vector<std::pair<MultiIndex, Scalar>> {
  std::vector<std::pair<MultiIndex, Scalar>> out;
  out.reserve(size());
  for (const auto& b : blocks_) {
    for (const auto& t : b) out.emplace_back(packing_.unpack(t.key), t.value);
  }
  return out;
}

template <RealScalar Real>
void TruncatedSeries<Real>::add_term(const MultiIndex& index, Scalar c) {
  if (index.size() != num_vars_) throw StructuralError("multi-index size does not match series");
  if (index.degree() > trunc_degree_) return;
  auto& b = blocks_[static_cast<std::size_t>(index.degree())];
  const std::uint64_t key = packing_.pack(index);
  auto it = std::lower_bound(b.begin(), b.end(), key, [](const Term<Real>& t, std::uint64_t k) { return t.key < k; });
  if (it != b.end() && it->key == key) {
    it->value += c;
    if (is_negligible(it->value)) b.erase(it);
  } else if (!is_negligible(c)) {
    b.insert(it, Term<Real>{key, c});
  }
}

template <RealScalar Real>
void TruncatedSeries<Real>::set_block(int d, HomogeneousBlock<Real> block) {
  if (d < 0 || d > trunc_degree_) throw StructuralError("block degree outside truncation range");
  blocks_[static_cast<std::size_t>(d)] = std::move(block);
}

// ---------------------------------------------------------------------------
// VariableRoles

template <RealScalar Real>
VariableRoles<Real>::VariableRoles(std::vector<std::pair<int, int>> pairing,
                                   std::vector<std::complex<Real>> eigenvalues)
    : pairing_(std::move(pairing)), eigenvalues_(std::move(eigenvalues)) {
  if (pairing_.size() != eigenvalues_.size() || pairing_.empty()) {
    throw StructuralError("pairing and eigenvalue counts differ");
  }
  const int m = num_vars();
  std::vector<int> seen(static_cast<std::size_t>(m), 0);
  for (auto [a, b] : pairing_) {
    if (a < 0 || b < 0 || a >= m || b >= m || a == b) throw StructuralError("pairing index out of range");
    ++seen[static_cast<std::size_t>(a)];
    ++seen[static_cast<std::size_t>(b)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw StructuralError("pairing is not a perfect matching");
  }
  for (const auto& lambda : eigenvalues_) {
    if (num::abs(num::abs(lambda) - Real(1)) > Real(1e-14)) throw StructuralError("eigenvalue not on the unit circle");
    angles_.push_back(num::atan2(lambda.imag(), lambda.real()));
  }
}

template <RealScalar Real>
VariableRoles<Real> VariableRoles<Real>::standard(std::vector<std::complex<Real>> eigenvalues) {
  const int n = static_cast<int>(eigenvalues.size());
  std::vector<std::pair<int, int>> pairing;
  for (int j = 0; j < n; ++j) pairing.emplace_back(j, n + j);
  return VariableRoles(std::move(pairing), std::move(eigenvalues));
}

template <RealScalar Real>
std::vector<int> VariableRoles<Real>::harmonic(const MultiIndex& index) const {
  std::vector<int> m;
  m.reserve(pairing_.size());
  for (auto [a, b] : pairing_) m.push_back(index[a] - index[b]);
  return m;
}

// ---------------------------------------------------------------------------
// kernels

namespace kernel {

template <RealScalar Real>
void BlockAccumulator<Real>::add_product(const HomogeneousBlock<Real>& a, const HomogeneousBlock<Real>& b) {
  pending_.reserve(pending_.size() + a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) pending_.push_back(Term<Real>{x.key + y.key, x.value * y.value});
  }
}

template <RealScalar Real>
void BlockAccumulator<Real>::add_scaled(const HomogeneousBlock<Real>& a, std::complex<Real> c) {
  for (const auto& x : a) pending_.push_back(Term<Real>{x.key, x.value * c});
}

template <RealScalar Real>
HomogeneousBlock<Real> BlockAccumulator<Real>::finish() {
  // Stable sort keeps insertion order within a key, so sums are reproducible.
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Term<Real>& x, const Term<Real>& y) { return x.key < y.key; });
  HomogeneousBlock<Real> out;
  for (std::size_t i = 0; i < pending_.size();) {
    std::complex<Real> sum = pending_[i].value;
    std::size_t j = i + 1;
    for (; j < pending_.size() && pending_[j].key == pending_[i].key; ++j) sum += pending_[j].value;
    if (!is_negligible(sum)) out.push_back(Term<Real>{pending_[i].key, sum});
    i = j;
  }
  pending_.clear();
  return out;
}

template <RealScalar Real>
HomogeneousBlock<Real> product(const HomogeneousBlock<Real>& a, const HomogeneousBlock<Real>& b) {
  BlockAccumulator<Real> acc;
  acc.add_product(a, b);
  return acc.finish();
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// operations

namespace {

template <RealScalar Real>
void require_compatible(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b) {
  if (a.num_vars() != b.num_vars()) throw StructuralError("operands have different variable counts");
  if (a.trunc_degree() != b.trunc_degree()) throw StructuralError("operands have different truncation degrees");
}

template <RealScalar Real>
void require_roles(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles) {
  if (g.num_vars() != roles.num_vars()) throw StructuralError("series does not use the 2n-variable convention of roles");
}

// Applies fn(key, value) -> new value to every term, dropping negligible results.
template <RealScalar Real, class Fn>
TruncatedSeries<Real> map_terms(const TruncatedSeries<Real>& g, Fn fn) {
  TruncatedSeries<Real> out(g.num_vars(), g.trunc_degree());
  for (int d = 0; d <= g.trunc_degree(); ++d) {
    HomogeneousBlock<Real> b;
    for (const auto& t : g.block(d)) {
      auto v = fn(d, t.key, t.value);
      if (!is_negligible(v)) b.push_back(Term<Real>{t.key, v});
    }
    out.set_block(d, std::move(b));
  }
  return out;
}

template <RealScalar Real>
HomogeneousBlock<Real> add_blocks(const HomogeneousBlock<Real>& a, const HomogeneousBlock<Real>& b, Real sign) {
  HomogeneousBlock<Real> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].key < a[i].key) {
      out.push_back(Term<Real>{b[j].key, sign * b[j].value});
      ++j;
    } else {
      auto v = a[i].value + sign * b[j].value;
      if (!is_negligible(v)) out.push_back(Term<Real>{a[i].key, v});
      ++i;
      ++j;
    }
  }
  return out;
}

template <RealScalar Real>
TruncatedSeries<Real> combine(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b, Real sign) {
  require_compatible(a, b);
  TruncatedSeries<Real> out(a.num_vars(), a.trunc_degree());
  for (int d = 0; d <= a.trunc_degree(); ++d) out.set_block(d, add_blocks(a.block(d), b.block(d), sign));
  return out;
}

// Phase Σ_j p·m_j·α_j of the monomial with the given key.
template <RealScalar Real>
Real rotation_phase(std::uint64_t key, const MonomialPacking& packing, const VariableRoles<Real>& roles, int p) {
  Real phase = 0;
  for (int j = 0; j < roles.n(); ++j) {
    auto [a, b] = roles.pair(j);
    const int m = packing.exponent(key, a) - packing.exponent(key, b);
    if (m != 0) phase += Real(p * m) * roles.angle(j);
  }
  return phase;
}

}  // namespace

template <RealScalar Real>
TruncatedSeries<Real> operator+(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b) {
  return combine(a, b, Real(1));
}

template <RealScalar Real>
TruncatedSeries<Real> operator-(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b) {
  return combine(a, b, Real(-1));
}

template <RealScalar Real>
TruncatedSeries<Real> operator-(const TruncatedSeries<Real>& a) {
  return map_terms(a, [](int, std::uint64_t, const std::complex<Real>& v) { return -v; });
}

template <RealScalar Real>
TruncatedSeries<Real> operator*(const TruncatedSeries<Real>& a, const TruncatedSeries<Real>& b) {
  require_compatible(a, b);
  const int top = a.trunc_degree();
  TruncatedSeries<Real> out(a.num_vars(), top);
  const int la = a.lowest_degree();
  const int lb = b.lowest_degree();
  if (la < 0 || lb < 0) return out;
  for (int d = la + lb; d <= top; ++d) {
    kernel::BlockAccumulator<Real> acc;
    for (int i = la; i <= d - lb; ++i) {
      const auto& x = a.block(i);
      const auto& y = b.block(d - i);
      if (!x.empty() && !y.empty()) acc.add_product(x, y);
    }
    out.set_block(d, acc.finish());
  }
  return out;
}

template <RealScalar Real>
TruncatedSeries<Real> scale(const TruncatedSeries<Real>& a, std::complex<Real> c) {
  return map_terms(a, [c](int, std::uint64_t, const std::complex<Real>& v) { return v * c; });
}

template <RealScalar Real>
TruncatedSeries<Real> rotate(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles, int p) {
  require_roles(g, roles);
  const auto& packing = g.packing();
  return map_terms(g, [&](int, std::uint64_t key, const std::complex<Real>& v) {
    const Real phase = rotation_phase(key, packing, roles, p);
    return phase == Real(0) ? v : v * num::unit(phase);
  });
}

template <RealScalar Real>
TruncatedSeries<Real> central_symmetry(const TruncatedSeries<Real>& g) {
  return map_terms(g, [](int d, std::uint64_t, const std::complex<Real>& v) { return d % 2 == 0 ? v : -v; });
}

template <RealScalar Real>
TruncatedSeries<Real> tau(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles, TauSign sign) {
  return g + central_symmetry(rotate(g, roles, sign == TauSign::plus ? 1 : -1));
}

template <RealScalar Real>
TruncatedSeries<Real> average(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles) {
  require_roles(g, roles);
  const auto& packing = g.packing();
  return map_terms(g, [&](int, std::uint64_t key, const std::complex<Real>& v) {
    for (int j = 0; j < roles.n(); ++j) {
      auto [a, b] = roles.pair(j);
      if (packing.exponent(key, a) != packing.exponent(key, b)) return std::complex<Real>(0);
    }
    return v;
  });
}

template <RealScalar Real>
TruncatedSeries<Real> bracket(const TruncatedSeries<Real>& g, const VariableRoles<Real>& roles) {
  return g - average(g, roles);
}

namespace {

// Horner in variable `var` over the terms of f whose exponents of variables
// < var are fixed by the caller: f = Σ_e x_var^e · f_e(x_{var+1}, …).
template <RealScalar Real>
TruncatedSeries<Real> horner(const std::vector<std::pair<MultiIndex, std::complex<Real>>>& terms, int var,
                             std::span<const TruncatedSeries<Real>> chi) {
  const auto& proto = chi.front();
  TruncatedSeries<Real> zero(proto.num_vars(), proto.trunc_degree());
  if (terms.empty()) return zero;
  if (var == static_cast<int>(chi.size())) {
    std::complex<Real> c(0);
    for (const auto& t : terms) c += t.second;
    return TruncatedSeries<Real>::constant(proto.num_vars(), proto.trunc_degree(), c);
  }
  int top = 0;
  for (const auto& t : terms) top = std::max(top, t.first[var]);
  std::vector<std::vector<std::pair<MultiIndex, std::complex<Real>>>> by_power(static_cast<std::size_t>(top) + 1);
  for (const auto& t : terms) by_power[static_cast<std::size_t>(t.first[var])].push_back(t);
  TruncatedSeries<Real> acc = horner(by_power[static_cast<std::size_t>(top)], var + 1, chi);
  for (int e = top - 1; e >= 0; --e) {
    acc = acc * chi[static_cast<std::size_t>(var)] + horner(by_power[static_cast<std::size_t>(e)], var + 1, chi);
  }
  return acc;
}

}  // namespace

template <RealScalar Real>
TruncatedSeries<Real> substitute(const TruncatedSeries<Real>& f_x, std::span<const TruncatedSeries<Real>> chi) {
  if (chi.empty() || static_cast<int>(chi.size()) != f_x.num_vars()) {
    throw StructuralError("substitution needs one series per variable of f");
  }
  for (const auto& c : chi) {
    require_compatible(c, chi.front());
    if (!c.block(0).empty()) throw DomainError("substituted series has a nonzero constant term");
  }
  return horner(f_x.terms(), 0, chi);
}

template <RealScalar Real>
TruncatedSeries<Real> partial(const TruncatedSeries<Real>& f, int j) {
  if (j < 0 || j >= f.num_vars()) throw StructuralError("partial derivative index out of range");
  const auto& packing = f.packing();
  const std::uint64_t unit = packing.unit_key(j);
  TruncatedSeries<Real> out(f.num_vars(), f.trunc_degree());
  for (int d = 1; d <= f.trunc_degree(); ++d) {
    HomogeneousBlock<Real> b;
    for (const auto& t : f.block(d)) {
      const int e = packing.exponent(t.key, j);
      if (e > 0) b.push_back(Term<Real>{t.key - unit, t.value * Real(e)});
    }
    // Lowering one exponent preserves the key order.
    out.set_block(d - 1, std::move(b));
  }
  return out;
}

template <RealScalar Real>
TruncatedSeries<Real> homogeneous_part(const TruncatedSeries<Real>& g, int d) {
  if (d < 0 || d > g.trunc_degree()) throw StructuralError("degree outside truncation range");
  TruncatedSeries<Real> out(g.num_vars(), g.trunc_degree());
  out.set_block(d, g.block(d));
  return out;
}

template <RealScalar Real>
TruncatedSeries<Real> with_trunc_degree(const TruncatedSeries<Real>& g, int trunc_degree) {
  TruncatedSeries<Real> out(g.num_vars(), trunc_degree);
  for (int d = 0; d <= std::min(trunc_degree, g.trunc_degree()); ++d) out.set_block(d, g.block(d));
  return out;
}

template <RealScalar Real>
TruncatedSeries<Real> reciprocal(const TruncatedSeries<Real>& g) {
  const auto c0 = g.constant_term();
  if (is_negligible(c0)) throw DomainError("reciprocal of a series with zero constant term");
  const int top = g.trunc_degree();
  const int m = g.num_vars();
  auto y = TruncatedSeries<Real>::constant(m, 0, std::complex<Real>(1) / c0);
  // y is correct through degree `known`; each step doubles the count.
  for (int known = 0; known < top;) {
    const int next = std::min(2 * known + 1, top);
    auto yt = with_trunc_degree(y, next);
    auto one = TruncatedSeries<Real>::constant(m, next, std::complex<Real>(1));
    auto err = one - with_trunc_degree(g, next) * yt;
    y = yt + yt * err;
    known = next;
  }
  return with_trunc_degree(y, top);
}

template <RealScalar Real>
TruncatedSeries<Real> sqrt_series(const TruncatedSeries<Real>& g) {
  const auto c0 = g.constant_term();
  if (!(c0.real() > Real(0)) || num::abs(c0.imag()) > Real(1e-14) * c0.real()) {
    throw DomainError("square root needs a positive real constant term");
  }
  const int top = g.trunc_degree();
  const int m = g.num_vars();
  auto h = TruncatedSeries<Real>::constant(m, 0, std::complex<Real>(num::sqrt(c0.real())));
  const std::complex<Real> half(Real(0.5));
  for (int known = 0; known < top;) {
    const int next = std::min(2 * known + 1, top);
    auto ht = with_trunc_degree(h, next);
    auto gt = with_trunc_degree(g, next);
    h = ht + scale((gt - ht * ht) * reciprocal(ht), half);
    known = next;
  }
  return with_trunc_degree(h, top);
}

template <RealScalar Real>
std::complex<Real> evaluate(const TruncatedSeries<Real>& g, std::span<const std::complex<Real>> point) {
  const int m = g.num_vars();
  if (static_cast<int>(point.size()) != m) throw StructuralError("evaluation point has wrong dimension");
  const int top = g.trunc_degree();
  std::vector<std::vector<std::complex<Real>>> powers(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& p = powers[static_cast<std::size_t>(i)];
    p.resize(static_cast<std::size_t>(top) + 1);
    p[0] = 1;
    for (int e = 1; e <= top; ++e) p[static_cast<std::size_t>(e)] = p[static_cast<std::size_t>(e - 1)] * point[static_cast<std::size_t>(i)];
  }
  const auto& packing = g.packing();
  std::complex<Real> sum(0);
  for (int d = top; d >= 0; --d) {
    for (const auto& t : g.block(d)) {
      std::complex<Real> v = t.value;
      for (int i = 0; i < m; ++i) {
        const int e = packing.exponent(t.key, i);
        if (e) v *= powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)];
      }
      sum += v;
    }
  }
  return sum;
}

template <RealScalar Real>
Real max_abs_coeff(const TruncatedSeries<Real>& g, int lo, int hi) {
  Real best = 0;
  for (int d = std::max(lo, 0); d <= std::min(hi, g.trunc_degree()); ++d) {
    for (const auto& t : g.block(d)) best = std::max(best, num::abs(t.value));
  }
  return best;
}

#define BSERIES_INSTANTIATE(R)                                                                                  \
  template class TruncatedSeries<R>;                                                                            \
  template class VariableRoles<R>;                                                                              \
  template class kernel::BlockAccumulator<R>;                                                                   \
  template HomogeneousBlock<R> kernel::product(const HomogeneousBlock<R>&, const HomogeneousBlock<R>&);         \
  template TruncatedSeries<R> operator+(const TruncatedSeries<R>&, const TruncatedSeries<R>&);                  \
  template TruncatedSeries<R> operator-(const TruncatedSeries<R>&, const TruncatedSeries<R>&);                  \
  template TruncatedSeries<R> operator-(const TruncatedSeries<R>&);                                             \
  template TruncatedSeries<R> operator*(const TruncatedSeries<R>&, const TruncatedSeries<R>&);                  \
  template TruncatedSeries<R> scale(const TruncatedSeries<R>&, std::complex<R>);                                \
  template TruncatedSeries<R> rotate(const TruncatedSeries<R>&, const VariableRoles<R>&, int);                  \
  template TruncatedSeries<R> central_symmetry(const TruncatedSeries<R>&);                                      \
  template TruncatedSeries<R> tau(const TruncatedSeries<R>&, const VariableRoles<R>&, TauSign);                 \
  template TruncatedSeries<R> average(const TruncatedSeries<R>&, const VariableRoles<R>&);                      \
  template TruncatedSeries<R> bracket(const TruncatedSeries<R>&, const VariableRoles<R>&);                      \
  template TruncatedSeries<R> substitute(const TruncatedSeries<R>&, std::span<const TruncatedSeries<R>>);       \
  template TruncatedSeries<R> partial(const TruncatedSeries<R>&, int);                                          \
  template TruncatedSeries<R> reciprocal(const TruncatedSeries<R>&);                                            \
  template TruncatedSeries<R> sqrt_series(const TruncatedSeries<R>&);                                           \
  template TruncatedSeries<R> homogeneous_part(const TruncatedSeries<R>&, int);                                 \
  template TruncatedSeries<R> with_trunc_degree(const TruncatedSeries<R>&, int);                                \
  template std::complex<R> evaluate(const TruncatedSeries<R>&, std::span<const std::complex<R>>);               \
  template R max_abs_coeff(const TruncatedSeries<R>&, int, int);

BSERIES_INSTANTIATE(double)
BSERIES_INSTANTIATE(Quad)

#undef BSERIES_INSTANTIATE

}  // namespace bseries
