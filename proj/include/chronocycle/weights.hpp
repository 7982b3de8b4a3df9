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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronocycle/chain.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"

namespace chronocycle {

enum class WeightKind { VertexBased, SimplexBased, Length };

inline std::string_view to_string(WeightKind k) {
  switch (k) {
    case WeightKind::VertexBased: return "vertex";
    case WeightKind::SimplexBased: return "simplex";
    case WeightKind::Length: return "length";
  }
  return "?";
}

inline WeightKind weight_kind_from_string(std::string_view s) {
  if (s == "vertex") return WeightKind::VertexBased;
  if (s == "simplex") return WeightKind::SimplexBased;
  if (s == "length") return WeightKind::Length;
  throw DataError("unknown weight kind '" + std::string(s) + "'");
}

/// How the length baseline prices a simplex.
enum class LengthMetric {
  Count,     // identity matrix: unweighted l1 norm
  Euclidean  // simplex diameter (edge length for 1-simplices)
};

/// Time label of each vertex id.
using TimeLabels = std::span<const double>;

struct WeightEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Non-negative sparse matrix over a restricted simplex set P (positions
/// 0..|P|-1), together with its column sums.
///
/// The LP objective sum_i sum_j w_ij |c_j| only reads the column sums, so
/// those are precomputed as the per-simplex cost.
class WeightMatrix {
 public:
  WeightMatrix(WeightKind kind, std::size_t size, std::vector<WeightEntry> entries)
      : kind_(kind), size_(size), entries_(std::move(entries)), column_costs_(size, 0.0) {
    std::sort(entries_.begin(), entries_.end(), [](const WeightEntry& a, const WeightEntry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& e : entries_) {
      if (!(e.value >= 0.0)) throw DataError("weights must be non-negative");
      if (e.row >= size_ || e.col >= size_) throw DataError("weight entry out of range");
    }
    // Sum each column in ascending row order so costs are reproducible.
    std::vector<WeightEntry> by_col(entries_);
    std::stable_sort(by_col.begin(), by_col.end(),
                     [](const WeightEntry& a, const WeightEntry& b) { return a.col < b.col; });
    for (const auto& e : by_col) column_costs_[e.col] += e.value;
  }

  WeightKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  const std::vector<WeightEntry>& entries() const { return entries_; }
  std::span<const double> column_costs() const { return column_costs_; }

  double entry(std::size_t i, std::size_t j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j},
                               [](const WeightEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                                 return e.row != key.first ? e.row < key.first : e.col < key.second;
                               });
    return (it != entries_.end() && it->row == i && it->col == j) ? it->value : 0.0;
  }

  bool is_diagonal() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const WeightEntry& e) { return e.row == e.col; });
  }

  /// sum_i sum_j w_ij |c_j| for a coefficient vector over P.
  double objective(std::span<const double> c) const {
    double total = 0.0;
    for (std::size_t j = 0; j < size_; ++j) total += column_costs_[j] * std::abs(c[j]);
    return total;
  }

 private:
  WeightKind kind_;
  std::size_t size_;
  std::vector<WeightEntry> entries_;
  std::vector<double> column_costs_;
};

inline void check_labels(const Simplex& s, TimeLabels labels) {
  for (Vertex v : s)
    if (v >= labels.size()) throw DataError("vertex without a time label");
}

/// Mean time label of the vertices of `s`.
inline double simplex_time_label(const Simplex& s, TimeLabels labels) {
  check_labels(s, labels);
  double sum = 0.0;
  for (Vertex v : s) sum += labels[v];
  return sum / static_cast<double>(s.size());
}

/// Largest minus smallest vertex label of `s`.
inline double label_spread(const Simplex& s, TimeLabels labels) {
  check_labels(s, labels);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vertex v : s) {
    lo = std::min(lo, labels[v]);
    hi = std::max(hi, labels[v]);
  }
  return hi - lo;
}

/// Two p-simplices are adjacent when they share exactly p vertices.
inline bool adjacent(const Simplex& a, const Simplex& b) {
  if (a.dimension() != b.dimension()) throw DataError("adjacency needs simplices of equal dimension");
  const int p = a.dimension();
  return p >= 1 && a.intersection_size(b) == static_cast<std::size_t>(p);
}

/// Diagonal: each simplex costs the spread of its vertex labels.
inline WeightMatrix vertex_weights(const Filtration& f, std::span<const Index> P, TimeLabels labels) {
  std::vector<WeightEntry> entries;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double w = label_spread(f.simplex(P[i]), labels);
    if (w != 0.0) entries.push_back({i, i, w});
  }
  return WeightMatrix(WeightKind::VertexBased, P.size(), std::move(entries));
}

/// Symmetric: adjacent simplices of P cost the gap between their mean
/// labels. Adjacency is searched within P only.
inline WeightMatrix simplex_weights(const Filtration& f, std::span<const Index> P, TimeLabels labels) {
  std::vector<double> mean(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) mean[i] = simplex_time_label(f.simplex(P[i]), labels);

  // Adjacent p-simplices share exactly one facet, so grouping by facet
  // enumerates every adjacent pair exactly once.
  std::map<Simplex, std::vector<std::size_t>> by_facet;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Simplex& s = f.simplex(P[i]);
    if (s.dimension() < 1) continue;
    for (std::size_t k = 0; k < s.size(); ++k) by_facet[s.facet(k)].push_back(i);
  }
  std::vector<WeightEntry> entries;
  for (const auto& [facet, members] : by_facet) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const double w = std::abs(mean[members[a]] - mean[members[b]]);
        if (w == 0.0) continue;
        entries.push_back({members[a], members[b], w});
        entries.push_back({members[b], members[a], w});
      }
    }
  }
  return WeightMatrix(WeightKind::SimplexBased, P.size(), std::move(entries));
}

/// Diagonal length baseline: ones (simplex count) or simplex diameters.
inline WeightMatrix length_weights(const Filtration& f, std::span<const Index> P,
                                   LengthMetric metric = LengthMetric::Count) {
  std::vector<WeightEntry> entries;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double w = metric == LengthMetric::Count ? 1.0 : f.value(P[i]);
    if (w != 0.0) entries.push_back({i, i, w});
  }
  return WeightMatrix(WeightKind::Length, P.size(), std::move(entries));
}

inline WeightMatrix make_weights(WeightKind kind, const Filtration& f, std::span<const Index> P,
                                 TimeLabels labels, LengthMetric metric = LengthMetric::Count) {
  switch (kind) {
    case WeightKind::VertexBased: return vertex_weights(f, P, labels);
    case WeightKind::SimplexBased: return simplex_weights(f, P, labels);
    case WeightKind::Length: return length_weights(f, P, metric);
  }
  throw DataError("unknown weight kind");
}

/// Largest minus smallest vertex label over the support of `c`.
template <Coefficient S>
double time_dispersion(const Chain<S>& c, const Filtration& f, TimeLabels labels) {
  if (c.empty()) throw DataError("time dispersion undefined for zero chain");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : c) {
    const Simplex& s = f.simplex(t.index);
    check_labels(s, labels);
    for (Vertex v : s) {
      lo = std::min(lo, labels[v]);
      hi = std::max(hi, labels[v]);
    }
  }
  return hi - lo;
}

/// Diagnostic only: for each simplex of the support, the largest mean-label
/// gap to an adjacent simplex that is also in the support, summed.
inline double adjacency_spread_cost(std::span<const Index> support, const Filtration& f,
                                    TimeLabels labels) {
  double total = 0.0;
  for (Index a : support) {
    const Simplex& sa = f.simplex(a);
    const double ta = simplex_time_label(sa, labels);
    double worst = 0.0;
    for (Index b : support) {
      if (a == b || !adjacent(sa, f.simplex(b))) continue;
      worst = std::max(worst, std::abs(ta - simplex_time_label(f.simplex(b), labels)));
    }
    total += worst;
  }
  return total;
}

}  // namespace chronocycle
