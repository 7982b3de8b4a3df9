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
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "chronocycle/chain.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"

namespace chronocycle {

inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

/// In-place symmetric difference of two sorted index lists (F2 addition).
inline void add_f2_column(std::vector<Index>& target, std::span<const Index> source,
                          std::vector<Index>& scratch) {
  scratch.clear();
  scratch.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

/// Which columns keep their change-of-basis column V_j.
///
/// Top-dimension columns only ever kill classes, so their V columns are not
/// needed for representatives and dominate memory on large complexes.
enum class TrackV { All, BelowTopDimension, None };

struct ReduceOptions {
  TrackV track_v = TrackV::All;
};

/// R = boundary * V over F2 with R reduced (distinct lowest ones).
class ReducedDecomposition {
 public:
  std::size_t size() const { return r_.size(); }

  std::span<const Index> r_column(Index j) const { return r_[j]; }
  bool is_zero(Index j) const { return r_[j].empty(); }

  bool has_v(Index j) const { return has_v_[j]; }
  std::span<const Index> v_column(Index j) const {
    if (!has_v_[j]) throw DataError("V column was not tracked for this simplex");
    return v_[j];
  }

  std::optional<Index> lowest_one(Index j) const {
    if (r_[j].empty()) return std::nullopt;
    return r_[j].back();
  }

  /// Column whose lowest one sits in `row`, if any.
  std::optional<Index> column_with_lowest(Index row) const {
    if (pivot_[row] == kNoIndex) return std::nullopt;
    return pivot_[row];
  }

  std::size_t column_additions() const { return additions_; }

 private:
  friend ReducedDecomposition reduce(const Filtration&, const ReduceOptions&);

  std::vector<std::vector<Index>> r_;
  std::vector<std::vector<Index>> v_;
  std::vector<bool> has_v_;
  std::vector<Index> pivot_;
  std::size_t additions_ = 0;
};

/// Standard left-to-right column reduction of the F2 filtration boundary.
inline ReducedDecomposition reduce(const Filtration& f, const ReduceOptions& opts = {}) {
  const std::size_t n = f.size();
  ReducedDecomposition dec;
  dec.r_.resize(n);
  dec.v_.resize(n);
  dec.has_v_.assign(n, false);
  dec.pivot_.assign(n, kNoIndex);
  const int top = f.max_dimension();

  std::vector<Index> scratch;
  for (Index j = 0; j < n; ++j) {
    const bool track = opts.track_v == TrackV::All ||
                       (opts.track_v == TrackV::BelowTopDimension && f.dimension(j) < top);
    std::vector<Index> col = f.facet_indices(j);
    std::sort(col.begin(), col.end());
    std::vector<Index> v;
    if (track) v.push_back(j);
    while (!col.empty()) {
      const Index k = dec.pivot_[col.back()];
      if (k == kNoIndex) break;
      add_f2_column(col, dec.r_[k], scratch);
      if (track) add_f2_column(v, dec.v_[k], scratch);
      ++dec.additions_;
    }
    if (!col.empty()) dec.pivot_[col.back()] = j;
    col.shrink_to_fit();
    dec.r_[j] = std::move(col);
    if (track) {
      dec.v_[j] = std::move(v);
      dec.has_v_[j] = true;
    }
  }
  return dec;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A point of a persistence diagram with the cycle that represents it.
struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;
  Index birth_simplex = 0;
  std::optional<Index> death_simplex;  // empty for essential classes
  F2Chain initial_rep;

  bool essential() const { return !death_simplex.has_value(); }
  double persistence() const { return death - birth; }
};

/// Persistence pairs of degree `dim` with birth < death.
///
/// A finite pair is represented by the R column of its death simplex, an
/// essential class by the V column of its birth simplex.
inline std::vector<PersistencePair> diagram(const ReducedDecomposition& dec, const Filtration& f,
                                            int dim) {
  if (dim < 0 || dim >= f.max_dimension())
    throw DataError("diagram degree must be below the top simplex dimension");
  std::vector<PersistencePair> out;
  for (Index j = 0; j < f.size(); ++j) {
    if (f.dimension(j) != dim + 1 || dec.is_zero(j)) continue;
    const Index low = *dec.lowest_one(j);
    if (f.value(low) == f.value(j)) continue;
    PersistencePair p;
    p.dim = dim;
    p.birth = f.value(low);
    p.death = f.value(j);
    p.birth_simplex = low;
    p.death_simplex = j;
    p.initial_rep = F2Chain::from_indices(dim, dec.r_column(j));
    out.push_back(std::move(p));
  }
  for (Index i : f.of_dimension(dim)) {
    if (!dec.is_zero(i) || dec.column_with_lowest(i)) continue;
    PersistencePair p;
    p.dim = dim;
    p.birth = f.value(i);
    p.birth_simplex = i;
    p.initial_rep = F2Chain::from_indices(dim, dec.v_column(i));
    out.push_back(std::move(p));
  }
  return out;
}

/// Persistence with essential classes truncated at `cap`.
inline double truncated_persistence(const PersistencePair& p, double cap) {
  return (p.essential() ? cap : p.death) - p.birth;
}

/// Span membership over F2: incremental column echelon form keyed by lowest
/// one. Used to decide whether a chain is a boundary.
class F2Span {
 public:
  void add(std::vector<Index> column) {
    std::sort(column.begin(), column.end());
    reduce_in_place(column);
    if (column.empty()) return;
    const Index low = column.back();
    pivots_.emplace(low, std::move(column));
  }

  bool contains(std::vector<Index> target) const {
    std::sort(target.begin(), target.end());
    reduce_in_place(target);
    return target.empty();
  }

  std::size_t rank() const { return pivots_.size(); }

 private:
  void reduce_in_place(std::vector<Index>& column) const {
    std::vector<Index> scratch;
    while (!column.empty()) {
      auto it = pivots_.find(column.back());
      if (it == pivots_.end()) break;
      add_f2_column(column, it->second, scratch);
    }
  }

  std::map<Index, std::vector<Index>> pivots_;  // keyed by lowest one
};

/// True iff `chain` is the boundary of a (p+1)-chain built from simplices
/// whose value is <= `t` (strictly below when `strict`).
inline bool is_boundary_at(const F2Chain& chain, const Filtration& f, double t, bool strict = false) {
  if (chain.empty()) return true;
  F2Span span;
  for (Index j : f.of_dimension(chain.dimension() + 1)) {
    const double v = f.value(j);
    if (strict ? !(v < t) : !(v <= t)) continue;
    span.add(f.facet_indices(j));
  }
  return span.contains(chain.support());
}

}  // namespace chronocycle
