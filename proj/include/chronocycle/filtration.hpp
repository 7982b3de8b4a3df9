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
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "chronocycle/error.hpp"
#include "chronocycle/simplex.hpp"

namespace chronocycle {

struct FiltrationEntry {
  Simplex simplex;
  double value = 0.0;
};

/// Total order used everywhere: (value, dimension, lexicographic vertices).
inline bool filtration_less(const FiltrationEntry& a, const FiltrationEntry& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.simplex.dimension() != b.simplex.dimension())
    return a.simplex.dimension() < b.simplex.dimension();
  return a.simplex < b.simplex;
}

/// Tag for constructors whose input is closed under faces by construction.
struct assume_closed_t {
  explicit assume_closed_t() = default;
};
inline constexpr assume_closed_t assume_closed{};

/// A simplicial complex whose simplices are ordered by filtration value.
///
/// Immutable after construction. Every face precedes its cofaces and values
/// are non-decreasing along the order.
class Filtration {
 public:
  Filtration() = default;

  /// Sorts `entries` and validates closure: throws DataError when a face is
  /// missing, a face enters after its coface, a value is negative or NaN,
  /// or a simplex is listed twice.
  explicit Filtration(std::vector<FiltrationEntry> entries)
      : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (!(e.value >= 0.0))
        throw DataError("filtration values must be non-negative numbers");
      if (e.simplex.empty()) throw DataError("empty simplex in filtration");
    }
    finalize();
    validate_closure();
  }

  Filtration(std::vector<FiltrationEntry> entries, assume_closed_t)
      : entries_(std::move(entries)) {
    finalize();
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const FiltrationEntry& operator[](Index i) const { return entries_[i]; }
  const Simplex& simplex(Index i) const { return entries_[i].simplex; }
  double value(Index i) const { return entries_[i].value; }
  int dimension(Index i) const { return entries_[i].simplex.dimension(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Highest simplex dimension present, -1 when empty.
  int max_dimension() const { return static_cast<int>(by_dimension_.size()) - 1; }

  double max_value() const { return entries_.empty() ? 0.0 : entries_.back().value; }

  /// Filtration indices of all simplices of dimension `dim`, ascending.
  std::span<const Index> of_dimension(int dim) const {
    if (dim < 0 || dim > max_dimension()) return {};
    return by_dimension_[static_cast<std::size_t>(dim)];
  }

  std::optional<Index> find(const Simplex& s) const {
    const int dim = s.dimension();
    if (dim < 0 || dim > max_dimension()) return std::nullopt;
    const auto& table = lookup_[static_cast<std::size_t>(dim)];
    auto it = std::lower_bound(
        table.begin(), table.end(), s,
        [this](Index i, const Simplex& key) { return entries_[i].simplex < key; });
    if (it == table.end() || !(entries_[*it].simplex == s)) return std::nullopt;
    return *it;
  }

  Index index_of(const Simplex& s) const {
    if (auto i = find(s)) return *i;
    std::ostringstream os;
    os << "simplex " << s << " not in filtration";
    throw DataError(os.str());
  }

  /// Filtration indices of the codimension-1 faces of simplex `i`, in facet
  /// order (entry k omits vertex k).
  std::vector<Index> facet_indices(Index i) const {
    const Simplex& s = entries_[i].simplex;
    std::vector<Index> faces;
    if (s.dimension() == 0) return faces;
    faces.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) faces.push_back(index_of(s.facet(k)));
    return faces;
  }

 private:
  void finalize() {
    std::sort(entries_.begin(), entries_.end(), filtration_less);
    int top = -1;
    for (const auto& e : entries_) top = std::max(top, e.simplex.dimension());
    by_dimension_.assign(static_cast<std::size_t>(top + 1), {});
    for (Index i = 0; i < entries_.size(); ++i)
      by_dimension_[static_cast<std::size_t>(entries_[i].simplex.dimension())].push_back(i);
    lookup_ = by_dimension_;
    for (auto& table : lookup_) {
      std::sort(table.begin(), table.end(), [this](Index a, Index b) {
        return entries_[a].simplex < entries_[b].simplex;
      });
      for (std::size_t k = 1; k < table.size(); ++k) {
        if (entries_[table[k - 1]].simplex == entries_[table[k]].simplex)
          throw DataError("duplicate simplex in filtration");
      }
    }
  }

  void validate_closure() const {
    for (Index i = 0; i < entries_.size(); ++i) {
      const Simplex& s = entries_[i].simplex;
      if (s.dimension() == 0) continue;
      for (std::size_t k = 0; k < s.size(); ++k) {
        auto face = find(s.facet(k));
        if (!face) {
          std::ostringstream os;
          os << "filtration not closed: face " << s.facet(k) << " of " << s
             << " missing";
          throw DataError(os.str());
        }
        if (*face >= i) throw DataError("face enters after its coface");
      }
    }
  }

  std::vector<FiltrationEntry> entries_;
  std::vector<std::vector<Index>> by_dimension_;
  std::vector<std::vector<Index>> lookup_;  // per dimension, lexicographic
};

}  // namespace chronocycle
