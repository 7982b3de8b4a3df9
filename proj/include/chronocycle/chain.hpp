// Copyright 2026 The chronocycle Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"

namespace chronocycle {

/// Element of the two-element field.
struct Z2 {
  bool bit = false;

  constexpr Z2() = default;
  constexpr explicit Z2(long long v) : bit((v & 1) != 0) {}

  friend constexpr Z2 operator+(Z2 a, Z2 b) { return Z2(a.bit != b.bit); }
  friend constexpr Z2 operator-(Z2 a, Z2 b) { return a + b; }
  friend constexpr Z2 operator-(Z2 a) { return a; }
  friend constexpr Z2 operator*(Z2 a, Z2 b) { return Z2(a.bit && b.bit); }
  constexpr Z2& operator+=(Z2 o) { return *this = *this + o; }
  friend constexpr bool operator==(Z2, Z2) = default;
};

/// Coefficient domains supported by chains: F2 for reduction, reals for LP.
template <class S>
concept Coefficient = std::same_as<S, Z2> || std::same_as<S, double>;

enum class FieldMode { F2, Real };

template <Coefficient S>
inline constexpr FieldMode field_mode_of = std::same_as<S, Z2> ? FieldMode::F2 : FieldMode::Real;

template <Coefficient S>
constexpr bool is_zero(S x) {
  if constexpr (std::same_as<S, Z2>) {
    return !x.bit;
  } else {
    return x == 0.0;
  }
}

/// Sign of the face that omits vertex `i` under increasing-vertex orientation.
template <Coefficient S>
constexpr S orientation_sign(std::size_t i) {
  if constexpr (std::same_as<S, Z2>) {
    return Z2(1);
  } else {
    return (i % 2 == 0) ? 1.0 : -1.0;
  }
}

template <Coefficient S>
struct Term {
  Index index;
  S coefficient;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse p-chain over filtration indices. Terms are sorted by index and
/// never hold a zero coefficient.
template <Coefficient S>
class Chain {
 public:
  Chain() = default;
  explicit Chain(int dimension) : dimension_(dimension) {}

  /// Accumulates repeated indices and drops the resulting zeros.
  static Chain from_terms(int dimension, std::span<const Term<S>> terms) {
    std::map<Index, S> acc;
    for (const auto& t : terms) acc[t.index] += t.coefficient;
    Chain c(dimension);
    for (const auto& [i, v] : acc)
      if (!is_zero(v)) c.terms_.push_back({i, v});
    return c;
  }

  /// Unit coefficient on every listed index (duplicates accumulate).
  static Chain from_indices(int dimension, std::span<const Index> indices) {
    std::vector<Term<S>> terms;
    terms.reserve(indices.size());
    for (Index i : indices) terms.push_back({i, S(1)});
    return from_terms(dimension, terms);
  }

  int dimension() const { return dimension_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term<S>>& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  std::vector<Index> support() const {
    std::vector<Index> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.index);
    return out;
  }

  S coefficient(Index i) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term<S>& t, Index k) { return t.index < k; });
    return (it != terms_.end() && it->index == i) ? it->coefficient : S{};
  }

  friend Chain operator+(const Chain& a, const Chain& b) {
    if (!a.empty() && !b.empty() && a.dimension_ != b.dimension_)
      throw DataError("cannot add chains of different dimension");
    std::vector<Term<S>> all(a.terms_);
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return from_terms(a.empty() ? b.dimension_ : a.dimension_, all);
  }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.terms_ == b.terms_ && (a.empty() || a.dimension_ == b.dimension_);
  }

 private:
  int dimension_ = 0;
  std::vector<Term<S>> terms_;
};

using F2Chain = Chain<Z2>;
using RealChain = Chain<double>;

/// Throws DataError if some index is out of range or of the wrong dimension.
template <Coefficient S>
void check_chain(const Chain<S>& c, const Filtration& f) {
  for (const auto& t : c) {
    if (t.index >= f.size()) throw DataError("chain index outside filtration");
    if (f.dimension(t.index) != c.dimension())
      throw DataError("chain term has the wrong dimension");
  }
}

/// The boundary of `c`, in the field given by its coefficient type.
template <Coefficient S>
Chain<S> boundary(const Chain<S>& c, const Filtration& f) {
  if (c.dimension() < 1) throw DataError("no boundary below dimension 0");
  check_chain(c, f);
  std::vector<Term<S>> terms;
  for (const auto& t : c) {
    const auto faces = f.facet_indices(t.index);
    for (std::size_t k = 0; k < faces.size(); ++k)
      terms.push_back({faces[k], t.coefficient * orientation_sign<S>(k)});
  }
  return Chain<S>::from_terms(c.dimension() - 1, terms);
}

template <Coefficient S>
bool is_cycle(const Chain<S>& c, const Filtration& f) {
  return c.dimension() == 0 || boundary(c, f).empty();
}

/// Least filtration value at which every simplex of `c` is present.
template <Coefficient S>
double chain_birth(const Chain<S>& c, const Filtration& f) {
  if (c.empty()) throw DataError("birth undefined for zero chain");
  check_chain(c, f);
  double birth = 0.0;
  for (const auto& t : c) birth = std::max(birth, f.value(t.index));
  return birth;
}

/// Lift to the reals with coefficient +1 (increasing-vertex orientation).
inline RealChain lift_to_real(const F2Chain& c) {
  std::vector<Term<double>> terms;
  for (const auto& t : c) terms.push_back({t.index, 1.0});
  return RealChain::from_terms(c.dimension(), terms);
}

/// Reduction mod 2 of an integer-valued real chain; coefficients are rounded
/// to the nearest integer first.
inline F2Chain reduce_mod2(const RealChain& c) {
  std::vector<Term<Z2>> terms;
  for (const auto& t : c) terms.push_back({t.index, Z2(std::llround(t.coefficient))});
  return F2Chain::from_terms(c.dimension(), terms);
}

/// Column-compressed boundary matrix of a whole filtration.
///
/// Column j holds the faces of simplex j sorted by filtration index; in Real
/// mode the face omitting vertex i carries (-1)^i.
class BoundaryMatrix {
 public:
  BoundaryMatrix() = default;

  BoundaryMatrix(const Filtration& f, FieldMode mode) : mode_(mode) {
    offsets_.reserve(f.size() + 1);
    offsets_.push_back(0);
    std::vector<std::pair<Index, std::int8_t>> column;
    for (Index j = 0; j < f.size(); ++j) {
      const auto faces = f.facet_indices(j);
      column.clear();
      for (std::size_t k = 0; k < faces.size(); ++k) {
        const std::int8_t sign = (mode == FieldMode::F2 || k % 2 == 0) ? 1 : -1;
        column.emplace_back(faces[k], sign);
      }
      std::sort(column.begin(), column.end());
      for (const auto& [row, sign] : column) {
        rows_.push_back(row);
        signs_.push_back(sign);
      }
      offsets_.push_back(rows_.size());
    }
  }

  FieldMode mode() const { return mode_; }
  std::size_t columns() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  std::span<const Index> rows(Index j) const {
    return {rows_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
  }
  std::span<const std::int8_t> signs(Index j) const {
    return {signs_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
  }

 private:
  FieldMode mode_ = FieldMode::F2;
  std::vector<std::size_t> offsets_;
  std::vector<Index> rows_;
  std::vector<std::int8_t> signs_;
};

}  // namespace chronocycle
