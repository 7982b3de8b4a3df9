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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "chronocycle/chain.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"
#include "chronocycle/reduction.hpp"
#include "chronocycle/simplex_solver.hpp"
#include "chronocycle/weights.hpp"

namespace chronocycle {

/// Simplices alive at a relaxed birth b'.
///   P:     p-simplices with value <= b'
///   Qhat:  (p+1)-simplices with value <= b' whose reduced column is nonzero
/// Both hold filtration indices in ascending order.
struct SimplexSets {
  int p = 1;
  double bound = 0.0;
  std::vector<Index> P;
  std::vector<Index> Qhat;
};

inline SimplexSets restrict_sets(const Filtration& f, const ReducedDecomposition& dec, int p,
                                 double bound) {
  if (p < 0) throw DataError("degree must be non-negative");
  SimplexSets s;
  s.p = p;
  s.bound = bound;
  for (Index i : f.of_dimension(p))
    if (f.value(i) <= bound) s.P.push_back(i);
  for (Index j : f.of_dimension(p + 1))
    if (f.value(j) <= bound && !dec.is_zero(j)) s.Qhat.push_back(j);
  if (s.P.empty()) throw DataError("no simplices alive at the relaxed birth");
  return s;
}

/// Signs making an F2 cycle an integral cycle with coefficients +-1.
///
/// 1-cycles are oriented along closed walks (every vertex has even degree).
/// Higher cycles are oriented by propagation across facets shared by exactly
/// two simplices. Returns nullopt when no consistent orientation was found.
inline std::optional<RealChain> orient_cycle(const F2Chain& c, const Filtration& f) {
  check_chain(c, f);
  if (c.empty()) return RealChain(c.dimension());
  if (c.dimension() == 0) return lift_to_real(c);
  const std::vector<Index> cells = c.support();
  const std::size_t n = cells.size();
  std::vector<double> sign(n, 0.0);

  // facet index -> (cell position, position of the facet within the cell)
  std::unordered_map<Index, std::vector<std::pair<std::size_t, std::size_t>>> incidence;
  for (std::size_t a = 0; a < n; ++a) {
    const auto faces = f.facet_indices(cells[a]);
    for (std::size_t k = 0; k < faces.size(); ++k) incidence[faces[k]].emplace_back(a, k);
  }

  if (c.dimension() == 1) {
    std::vector<bool> used(n, false);
    std::unordered_map<Index, std::size_t> cursor;
    for (std::size_t start = 0; start < n; ++start) {
      if (used[start]) continue;
      // Edge facets: position 0 omits the low vertex (head), 1 the tail.
      const auto faces = f.facet_indices(cells[start]);
      const Index origin = faces[1];
      Index at = faces[0];
      used[start] = true;
      sign[start] = 1.0;
      while (at != origin) {
        auto& list = incidence[at];
        std::size_t& pos = cursor[at];
        while (pos < list.size() && used[list[pos].first]) ++pos;
        if (pos == list.size()) return std::nullopt;
        const auto [e, k] = list[pos];
        used[e] = true;
        // Leaving through the tail (k == 1) follows the edge's orientation.
        sign[e] = k == 1 ? 1.0 : -1.0;
        at = f.facet_indices(cells[e])[k == 1 ? 0 : 1];
      }
    }
  } else {
    std::vector<std::size_t> queue;
    for (std::size_t root = 0; root < n; ++root) {
      if (sign[root] != 0.0) continue;
      sign[root] = 1.0;
      queue.assign(1, root);
      while (!queue.empty()) {
        const std::size_t a = queue.back();
        queue.pop_back();
        const auto faces = f.facet_indices(cells[a]);
        for (std::size_t k = 0; k < faces.size(); ++k) {
          const auto& list = incidence[faces[k]];
          if (list.size() != 2) continue;
          const auto [b, kb] = list[0].first == a ? list[1] : list[0];
          const double want = -sign[a] * orientation_sign<double>(k) * orientation_sign<double>(kb);
          if (sign[b] == 0.0) {
            sign[b] = want;
            queue.push_back(b);
          } else if (sign[b] != want) {
            return std::nullopt;
          }
        }
      }
    }
  }

  std::vector<Term<double>> terms;
  for (std::size_t a = 0; a < n; ++a) terms.push_back({cells[a], sign[a]});
  RealChain out = RealChain::from_terms(c.dimension(), terms);
  if (!is_cycle(out, f)) return std::nullopt;
  return out;
}

/// The optimal cycle problem over a restricted simplex set:
///   minimise  sum_j cost_j |c_j|   subject to  c = c0 + A w,
/// with A the signed boundary of Qhat restricted to P. Variables are split
/// into nonnegative parts c+, c-, w+, w-.
struct CycleLP {
  int p = 1;
  std::vector<Index> P;
  std::vector<Index> Qhat;
  std::vector<SparseColumn> A;  // one column per Qhat simplex; rows are positions in P
  std::vector<double> c0;       // over P
  std::vector<double> cost;     // over P
  bool c0_oriented = true;      // false when c0 fell back to the +1 lift

  std::size_t rows() const { return P.size(); }
  std::size_t num_q() const { return Qhat.size(); }
};

/// Assemble the LP. `c0` must be an F2 cycle supported on P.
inline CycleLP build_lp(const SimplexSets& sets, const F2Chain& c0, const WeightMatrix& W,
                        const Filtration& f) {
  if (W.size() != sets.P.size()) throw DataError("weight matrix does not match P");
  if (c0.dimension() != sets.p) throw DataError("initial cycle has the wrong degree");
  check_chain(c0, f);
  if (!is_cycle(c0, f)) throw DataError("initial representative is not a cycle");

  CycleLP lp;
  lp.p = sets.p;
  lp.P = sets.P;
  lp.Qhat = sets.Qhat;
  lp.cost.assign(W.column_costs().begin(), W.column_costs().end());

  std::unordered_map<Index, std::size_t> position;
  position.reserve(lp.P.size());
  for (std::size_t i = 0; i < lp.P.size(); ++i) position.emplace(lp.P[i], i);

  auto oriented = orient_cycle(c0, f);
  lp.c0_oriented = oriented.has_value();
  const RealChain lifted = oriented ? *oriented : lift_to_real(c0);
  lp.c0.assign(lp.P.size(), 0.0);
  for (const auto& t : lifted) {
    auto it = position.find(t.index);
    if (it == position.end()) throw DataError("initial cycle is not supported on P");
    lp.c0[it->second] = t.coefficient;
  }

  lp.A.reserve(lp.Qhat.size());
  for (Index q : lp.Qhat) {
    const auto faces = f.facet_indices(q);
    SparseColumn col;
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      auto it = position.find(faces[k]);
      if (it == position.end()) throw DataError("face of a Qhat simplex lies outside P");
      entries.emplace_back(it->second, orientation_sign<double>(k));
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [r, v] : entries) {
      col.rows.push_back(r);
      col.values.push_back(v);
    }
    lp.A.push_back(std::move(col));
  }
  return lp;
}

/// Column layout [c+ | c- | w+ | w-]; the starting basis takes c+_j where
/// c0_j >= 0 and c-_j otherwise, which is feasible with no artificial phase.
inline StandardFormLp to_standard_form(const CycleLP& lp) {
  const std::size_t m = lp.rows();
  const std::size_t q = lp.num_q();
  StandardFormLp s;
  s.rows = m;
  s.rhs = lp.c0;
  s.columns.reserve(2 * m + 2 * q);
  s.cost.reserve(2 * m + 2 * q);
  for (int sgn : {1, -1}) {
    for (std::size_t j = 0; j < m; ++j) {
      s.columns.push_back({{j}, {static_cast<double>(sgn)}});
      s.cost.push_back(lp.cost[j]);
    }
  }
  for (int sgn : {-1, 1}) {
    for (const auto& col : lp.A) {
      SparseColumn c = col;
      for (double& v : c.values) v *= sgn;
      s.columns.push_back(std::move(c));
      s.cost.push_back(0.0);
    }
  }
  s.initial_basis.resize(m);
  for (std::size_t j = 0; j < m; ++j) s.initial_basis[j] = lp.c0[j] >= 0.0 ? j : m + j;
  return s;
}

struct CycleSolution {
  std::vector<double> c;        // over P
  std::vector<double> w;        // over Qhat
  double objective = 0.0;       // sum_j cost_j |c_j|
  std::vector<Index> support;   // filtration indices with |c_j| > round_tol
  double residual = 0.0;        // max |c - c0 - A w|
  std::size_t pivots = 0;
  bool fractional = false;      // some |c_j| away from an integer
};

struct SolveOptions {
  double round_tol = 1e-6;
  double residual_tol = 1e-8;
};

/// Sum of costs over support positions, accumulated in ascending order.
inline double support_cost(std::span<const double> cost, std::span<const std::size_t> positions) {
  double total = 0.0;
  for (std::size_t j : positions) total += cost[j];
  return total;
}

inline double lp_residual(const CycleLP& lp, std::span<const double> c, std::span<const double> w) {
  std::vector<double> r(lp.rows());
  for (std::size_t j = 0; j < lp.rows(); ++j) r[j] = c[j] - lp.c0[j];
  for (std::size_t k = 0; k < lp.num_q(); ++k)
    for (std::size_t e = 0; e < lp.A[k].rows.size(); ++e)
      r[lp.A[k].rows[e]] -= lp.A[k].values[e] * w[k];
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

template <LpBackend Backend>
CycleSolution solve_cycle_lp(const CycleLP& lp, const Backend& backend,
                             const SolveOptions& opts = {}) {
  const StandardFormLp s = to_standard_form(lp);
  const LpSolution x = backend.solve(s);
  if (x.x.size() != s.cols()) throw SolverError("backend returned a solution of the wrong size");
  const std::size_t m = lp.rows();
  const std::size_t q = lp.num_q();

  CycleSolution out;
  out.pivots = x.pivots;
  out.c.resize(m);
  out.w.resize(q);
  for (std::size_t j = 0; j < m; ++j) out.c[j] = x.x[j] - x.x[m + j];
  for (std::size_t k = 0; k < q; ++k) out.w[k] = x.x[2 * m + q + k] - x.x[2 * m + k];
  // -A w+ + A w- with w = w+ - w- means c = c0 + A w.
  for (double& v : out.w) v = -v;

  double scale = 1.0;
  for (double v : lp.c0) scale = std::max(scale, std::abs(v));
  out.residual = lp_residual(lp, out.c, out.w);
  if (out.residual > opts.residual_tol * scale)
    throw SolverError("solution violates the cycle constraint");

  std::vector<std::size_t> positions;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = std::abs(out.c[j]);
    if (a <= opts.round_tol) continue;
    positions.push_back(j);
    out.support.push_back(lp.P[j]);
    if (std::abs(a - std::round(a)) > opts.round_tol) out.fractional = true;
  }
  out.objective = 0.0;
  for (std::size_t j : positions) out.objective += lp.cost[j] * std::abs(out.c[j]);
  return out;
}

inline CycleSolution solve_cycle_lp(const CycleLP& lp, const SolveOptions& opts = {}) {
  return solve_cycle_lp(lp, RevisedSimplex{}, opts);
}

/// Exhaustive minimum over the F2 coset c0 + span(boundaries of Qhat).
struct OracleResult {
  double objective = 0.0;
  std::vector<Index> support;  // filtration indices
};

inline constexpr std::size_t kOracleMaxQ = 20;

inline OracleResult oracle_optimal(const CycleLP& lp, const F2Chain& c0, const Filtration& f) {
  if (lp.num_q() > kOracleMaxQ) throw DataError("oracle limited to 20 boundary columns");
  const std::size_t m = lp.rows();
  std::unordered_map<Index, std::size_t> position;
  for (std::size_t i = 0; i < m; ++i) position.emplace(lp.P[i], i);
  const std::size_t words = (m + 63) / 64;
  auto bits_of = [&](std::span<const Index> idx) {
    std::vector<std::uint64_t> b(words, 0);
    for (Index i : idx) {
      const std::size_t j = position.at(i);
      b[j / 64] ^= std::uint64_t{1} << (j % 64);
    }
    return b;
  };
  std::vector<std::uint64_t> cur = bits_of(c0.support());
  std::vector<std::vector<std::uint64_t>> cols;
  for (Index q : lp.Qhat) {
    const auto faces = f.facet_indices(q);
    cols.push_back(bits_of(faces));
  }

  auto evaluate = [&](const std::vector<std::uint64_t>& b, std::vector<std::size_t>& pos) {
    pos.clear();
    for (std::size_t j = 0; j < m; ++j)
      if ((b[j / 64] >> (j % 64)) & 1U) pos.push_back(j);
    return support_cost(lp.cost, pos);
  };

  std::vector<std::size_t> pos;
  std::vector<std::size_t> best_pos;
  double best = evaluate(cur, best_pos);
  const std::uint64_t total = std::uint64_t{1} << lp.num_q();
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(g));
    for (std::size_t w = 0; w < words; ++w) cur[w] ^= cols[flip][w];
    const double v = evaluate(cur, pos);
    if (v < best) {
      best = v;
      best_pos = pos;
    }
  }
  OracleResult out;
  out.objective = best;
  for (std::size_t j : best_pos) out.support.push_back(lp.P[j]);
  return out;
}

/// Standard-form LP in CPLEX LP text format.
inline void write_lp_text(std::ostream& os, const StandardFormLp& s) {
  os.precision(17);
  os << "\\ chronocycle standard-form cycle LP\n";
  os << "Minimize\n obj:";
  bool any = false;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    if (s.cost[j] == 0.0) continue;
    os << (any ? " + " : " ") << s.cost[j] << " x" << j;
    any = true;
  }
  if (!any) os << " 0 x0";
  os << "\nSubject To\n";
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(s.rows);
  for (std::size_t j = 0; j < s.cols(); ++j)
    for (std::size_t k = 0; k < s.columns[j].rows.size(); ++k)
      rows[s.columns[j].rows[k]].emplace_back(j, s.columns[j].values[k]);
  for (std::size_t r = 0; r < s.rows; ++r) {
    os << " r" << r << ":";
    for (const auto& [j, v] : rows[r]) os << (v < 0 ? " - " : " + ") << std::abs(v) << " x" << j;
    os << " = " << s.rhs[r] << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < s.cols(); ++j) os << " x" << j << " >= 0\n";
  os << "End\n";
}

}  // namespace chronocycle
