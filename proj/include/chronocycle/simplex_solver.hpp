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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chronocycle/error.hpp"

namespace chronocycle {

struct SparseColumn {
  std::vector<std::size_t> rows;
  std::vector<double> values;
};

/// min cost.x  subject to  A x = rhs,  x >= 0.
struct StandardFormLp {
  std::size_t rows = 0;
  std::vector<SparseColumn> columns;
  std::vector<double> cost;
  std::vector<double> rhs;
  /// Optional feasible starting basis (one column per row). Without it the
  /// solver runs a phase with artificial variables first.
  std::vector<std::size_t> initial_basis;

  std::size_t cols() const { return columns.size(); }
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

/// Anything that turns a standard-form problem into an optimal solution.
template <class B>
concept LpBackend = requires(const B& b, const StandardFormLp& lp) {
  { b.solve(lp) } -> std::convertible_to<LpSolution>;
};

enum class PricingRule {
  Bland,   // smallest eligible index enters; cannot cycle
  Dantzig  // most negative reduced cost; falls back to Bland when stalling
};

struct SimplexOptions {
  PricingRule pricing = PricingRule::Bland;
  std::size_t max_pivots = 1'000'000;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t refactor_interval = 200;
};

namespace detail {

/// Basis matrix B whose columns are either unit columns (one nonzero) or
/// general columns. With U the unit columns covering rows R and G the rest,
/// every solve reduces to the k x k block M = B[T, G] on the rows T not in R.
/// M^{-1} is kept explicitly and updated in O(k^2) per column exchange.
class UnitSchurBasis {
 public:
  UnitSchurBasis(const std::vector<SparseColumn>& columns, std::size_t rows)
      : columns_(columns), m_(rows), row_owner_(rows, kNone), t_index_(rows, kNone) {}

  std::size_t general_count() const { return g_.size(); }
  std::size_t column_at(std::size_t pos) const { return basis_[pos]; }

  /// Rebuilds the factorisation for `basis` (one column per row).
  void factor(const std::vector<std::size_t>& basis) {
    basis_ = basis;
    std::fill(row_owner_.begin(), row_owner_.end(), kNone);
    std::fill(t_index_.begin(), t_index_.end(), kNone);
    g_index_.assign(m_, kNone);
    g_.clear();
    t_.clear();
    for (std::size_t pos = 0; pos < m_; ++pos) {
      const auto& c = columns_[basis_[pos]];
      if (c.rows.size() == 1 && row_owner_[c.rows[0]] == kNone && c.values[0] != 0.0) {
        row_owner_[c.rows[0]] = pos;
      } else {
        g_index_[pos] = g_.size();
        g_.push_back(pos);
      }
    }
    for (std::size_t r = 0; r < m_; ++r)
      if (row_owner_[r] == kNone) {
        t_index_[r] = t_.size();
        t_.push_back(r);
      }
    if (t_.size() != g_.size()) throw SolverError("singular basis");
    const auto k = static_cast<Eigen::Index>(g_.size());
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& c = columns_[basis_[g_[static_cast<std::size_t>(j)]]];
      for (std::size_t e = 0; e < c.rows.size(); ++e) {
        const std::size_t ti = t_index_[c.rows[e]];
        if (ti != kNone) mat(static_cast<Eigen::Index>(ti), j) = c.values[e];
      }
    }
    reserve(g_.size());
    if (k > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
      if (!lu.isInvertible()) throw SolverError("singular basis");
      minv_.topLeftCorner(k, k) = lu.inverse();
    }
  }

  /// x = B^{-1} a, indexed by basis position. `xg` receives the G part.
  void solve(const SparseColumn& a, Eigen::VectorXd& x, Eigen::VectorXd& xg) const {
    const auto k = static_cast<Eigen::Index>(g_.size());
    Eigen::VectorXd at = Eigen::VectorXd::Zero(k);
    x.setZero(static_cast<Eigen::Index>(m_));
    for (std::size_t e = 0; e < a.rows.size(); ++e) {
      const std::size_t ti = t_index_[a.rows[e]];
      if (ti != kNone) at[static_cast<Eigen::Index>(ti)] += a.values[e];
      else x[static_cast<Eigen::Index>(a.rows[e])] += a.values[e];  // scratch: row-indexed rhs
    }
    xg = k > 0 ? Eigen::VectorXd(minv_.topLeftCorner(k, k) * at) : Eigen::VectorXd();
    // Subtract B_G x_G on covered rows, then divide by the unit values.
    for (Eigen::Index j = 0; j < k; ++j) {
      const double v = xg[j];
      if (v == 0.0) continue;
      const auto& c = columns_[basis_[g_[static_cast<std::size_t>(j)]]];
      for (std::size_t e = 0; e < c.rows.size(); ++e)
        if (t_index_[c.rows[e]] == kNone) x[static_cast<Eigen::Index>(c.rows[e])] -= c.values[e] * v;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t pos = row_owner_[r];
      if (pos == kNone) continue;
      out[static_cast<Eigen::Index>(pos)] = x[static_cast<Eigen::Index>(r)] / columns_[basis_[pos]].values[0];
    }
    for (Eigen::Index j = 0; j < k; ++j) out[static_cast<Eigen::Index>(g_[static_cast<std::size_t>(j)])] = xg[j];
    x = std::move(out);
  }

  /// y with B^T y = cb, where cb is indexed by basis position.
  Eigen::VectorXd solve_transposed(const Eigen::VectorXd& cb) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t pos = row_owner_[r];
      if (pos != kNone)
        y[static_cast<Eigen::Index>(r)] = cb[static_cast<Eigen::Index>(pos)] / columns_[basis_[pos]].values[0];
    }
    const auto k = static_cast<Eigen::Index>(g_.size());
    if (k == 0) return y;
    Eigen::VectorXd rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t pos = g_[static_cast<std::size_t>(j)];
      const auto& c = columns_[basis_[pos]];
      double v = cb[static_cast<Eigen::Index>(pos)];
      for (std::size_t e = 0; e < c.rows.size(); ++e)
        if (t_index_[c.rows[e]] == kNone) v -= c.values[e] * y[static_cast<Eigen::Index>(c.rows[e])];
      rhs[j] = v;
    }
    const Eigen::VectorXd yt = minv_.topLeftCorner(k, k).transpose() * rhs;
    for (Eigen::Index i = 0; i < k; ++i) y[static_cast<Eigen::Index>(t_[static_cast<std::size_t>(i)])] = yt[i];
    return y;
  }

  /// Column `entering` replaces the one at basis position `pos`; `u` and `ug`
  /// come from solve() on the entering column.
  void exchange(std::size_t pos, std::size_t entering, const Eigen::VectorXd& u, const Eigen::VectorXd& ug) {
    const auto& q = columns_[entering];
    const bool q_unit = q.rows.size() == 1 && q.values[0] != 0.0;
    const bool p_unit = g_index_[pos] == kNone;
    const auto k = static_cast<Eigen::Index>(g_.size());
    if (q_unit && p_unit) {
      const std::size_t i = q.rows[0];
      const std::size_t i_old = columns_[basis_[pos]].rows[0];
      if (i != i_old) {
        // Row i of M is replaced by row i_old of the general columns.
        const auto r = static_cast<Eigen::Index>(t_index_[i]);
        if (t_index_[i] == kNone) throw SolverError("singular basis");
        const Eigen::RowVectorXd v = general_row(i_old);
        const double denom = v[r];
        if (std::abs(denom) < 1e-12) throw SolverError("singular basis");
        Eigen::RowVectorXd z = v;
        z[r] -= 1.0;
        const Eigen::VectorXd col = minv_.topLeftCorner(k, k).col(r);
        minv_.topLeftCorner(k, k).noalias() -= col * (z / denom);
        t_[static_cast<std::size_t>(r)] = i_old;
        t_index_[i_old] = static_cast<std::size_t>(r);
        t_index_[i] = kNone;
        row_owner_[i_old] = kNone;
      }
      row_owner_[i] = pos;
    } else if (!q_unit && !p_unit) {
      const auto s = static_cast<Eigen::Index>(g_index_[pos]);
      const double piv = ug[s];
      auto mi = minv_.topLeftCorner(k, k);
      mi.row(s) /= piv;
      const Eigen::RowVectorXd rs = mi.row(s);
      for (Eigen::Index r = 0; r < k; ++r)
        if (r != s && ug[r] != 0.0) mi.row(r) -= ug[r] * rs;
    } else if (!q_unit && p_unit) {
      // Border M with the row freed by the leaving unit column and the new column.
      const std::size_t i_old = columns_[basis_[pos]].rows[0];
      const Eigen::RowVectorXd v = general_row(i_old);
      double aq = 0.0;
      for (std::size_t e = 0; e < q.rows.size(); ++e)
        if (q.rows[e] == i_old) aq += q.values[e];
      double bw = 0.0;
      const Eigen::VectorXd brow = general_row_raw(i_old);
      if (k > 0) bw = brow.dot(ug);
      const double s = aq - bw;
      if (std::abs(s) < 1e-12) throw SolverError("singular basis");
      reserve(g_.size() + 1);
      auto mi = minv_.topLeftCorner(k + 1, k + 1);
      if (k > 0) {
        mi.topLeftCorner(k, k).noalias() += ug * (v / s);
        mi.topRightCorner(k, 1) = -ug / s;
        mi.bottomLeftCorner(1, k) = -v / s;
      }
      mi(k, k) = 1.0 / s;
      g_index_[pos] = g_.size();
      g_.push_back(pos);
      t_index_[i_old] = t_.size();
      t_.push_back(i_old);
      row_owner_[i_old] = kNone;
    } else {
      // Unit column enters on an uncovered row; drop that row and the leaving
      // general column from M.
      const std::size_t i = q.rows[0];
      if (t_index_[i] == kNone) throw SolverError("singular basis");
      const auto r = static_cast<Eigen::Index>(t_index_[i]);
      const auto s = static_cast<Eigen::Index>(g_index_[pos]);
      auto mi = minv_.topLeftCorner(k, k);
      const double nsr = mi(s, r);
      if (std::abs(nsr) < 1e-12) throw SolverError("singular basis");
      const Eigen::VectorXd cr = mi.col(r);
      const Eigen::RowVectorXd rs = mi.row(s);
      mi.noalias() -= cr * (rs / nsr);
      const Eigen::Index last = k - 1;
      mi.row(s) = mi.row(last);
      mi.col(r) = mi.col(last);
      g_[static_cast<std::size_t>(s)] = g_[static_cast<std::size_t>(last)];
      g_index_[g_[static_cast<std::size_t>(s)]] = static_cast<std::size_t>(s);
      g_.pop_back();
      t_[static_cast<std::size_t>(r)] = t_[static_cast<std::size_t>(last)];
      t_index_[t_[static_cast<std::size_t>(r)]] = static_cast<std::size_t>(r);
      t_.pop_back();
      g_index_[pos] = kNone;
      t_index_[i] = kNone;
      row_owner_[i] = pos;
    }
    (void)u;
    basis_[pos] = entering;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void reserve(std::size_t k) {
    const auto need = static_cast<Eigen::Index>(k);
    if (minv_.rows() >= need) return;
    const Eigen::Index cap = std::max<Eigen::Index>(need, std::max<Eigen::Index>(16, 2 * minv_.rows()));
    Eigen::MatrixXd bigger = Eigen::MatrixXd::Zero(cap, cap);
    const auto keep = static_cast<Eigen::Index>(g_.size());
    const Eigen::Index old = std::min(keep, minv_.rows());
    bigger.topLeftCorner(old, old) = minv_.topLeftCorner(old, old);
    minv_ = std::move(bigger);
  }

  /// Entries of the general columns in row `row`, ordered like G.
  Eigen::VectorXd general_row_raw(std::size_t row) const {
    const auto k = static_cast<Eigen::Index>(g_.size());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& c = columns_[basis_[g_[static_cast<std::size_t>(j)]]];
      for (std::size_t e = 0; e < c.rows.size(); ++e)
        if (c.rows[e] == row) b[j] += c.values[e];
    }
    return b;
  }

  /// general_row_raw(row)^T M^{-1}.
  Eigen::RowVectorXd general_row(std::size_t row) const {
    const auto k = static_cast<Eigen::Index>(g_.size());
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(k);
    if (k == 0) return v;
    const Eigen::VectorXd b = general_row_raw(row);
    for (Eigen::Index j = 0; j < k; ++j)
      if (b[j] != 0.0) v += b[j] * minv_.topLeftCorner(k, k).row(j);
    return v;
  }

  const std::vector<SparseColumn>& columns_;
  std::size_t m_;
  std::vector<std::size_t> basis_;      // basis position -> column
  std::vector<std::size_t> row_owner_;  // row -> basis position of its unit column
  std::vector<std::size_t> t_index_;    // row -> index in t_
  std::vector<std::size_t> g_index_;    // basis position -> index in g_
  std::vector<std::size_t> g_;          // general basis positions (columns of M)
  std::vector<std::size_t> t_;          // uncovered rows (rows of M)
  Eigen::MatrixXd minv_;                // top-left k x k block holds M^{-1}
};

}  // namespace detail

/// Revised simplex method.
///
/// The basis is factored as unit columns plus a dense block for the
/// remaining columns (see detail::UnitSchurBasis); problems whose columns
/// are mostly slacks or split variables stay cheap even with many rows.
class RevisedSimplex {
 public:
  RevisedSimplex() = default;
  explicit RevisedSimplex(SimplexOptions options) : options_(options) {}

  const SimplexOptions& options() const { return options_; }

  LpSolution solve(const StandardFormLp& lp) const {
    validate(lp);
    if (!lp.initial_basis.empty()) {
      State s(lp, lp.initial_basis, lp.cost, lp.cols());
      run(s);
      return finish(lp, s);
    }
    return solve_two_phase(lp);
  }

 private:
  struct State {
    State(const StandardFormLp& lp_, std::vector<std::size_t> basis_, std::vector<double> cost_,
          std::size_t enterable_)
        : lp(lp_), basis(std::move(basis_)), cost(std::move(cost_)), enterable(enterable_),
          factor(lp_.columns, lp_.rows) {}

    const StandardFormLp& lp;
    std::vector<std::size_t> basis;
    std::vector<double> cost;
    std::size_t enterable;  // columns >= this index never enter
    std::vector<bool> in_basis;
    detail::UnitSchurBasis factor;
    Eigen::VectorXd xb;
    Eigen::VectorXd y;
    std::size_t pivots = 0;
    std::size_t since_refactor = 0;
  };

  static void validate(const StandardFormLp& lp) {
    if (lp.cost.size() != lp.cols()) throw SolverError("cost vector size mismatch");
    if (lp.rhs.size() != lp.rows) throw SolverError("rhs size mismatch");
    for (const auto& c : lp.columns) {
      if (c.rows.size() != c.values.size()) throw SolverError("malformed sparse column");
      for (std::size_t r : c.rows)
        if (r >= lp.rows) throw SolverError("sparse column row out of range");
    }
    if (!lp.initial_basis.empty() && lp.initial_basis.size() != lp.rows)
      throw SolverError("initial basis must hold one column per row");
  }

  static double dot(const Eigen::VectorXd& y, const SparseColumn& col) {
    double s = 0.0;
    for (std::size_t k = 0; k < col.rows.size(); ++k)
      s += y[static_cast<Eigen::Index>(col.rows[k])] * col.values[k];
    return s;
  }

  static Eigen::VectorXd basic_costs(const State& s) {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(s.basis.size()));
    for (std::size_t i = 0; i < s.basis.size(); ++i) cb[static_cast<Eigen::Index>(i)] = s.cost[s.basis[i]];
    return cb;
  }

  void refactor(State& s) const {
    s.factor.factor(s.basis);
    SparseColumn rhs;
    for (std::size_t r = 0; r < s.lp.rows; ++r)
      if (s.lp.rhs[r] != 0.0) {
        rhs.rows.push_back(r);
        rhs.values.push_back(s.lp.rhs[r]);
      }
    Eigen::VectorXd xg;
    s.factor.solve(rhs, s.xb, xg);
    for (Eigen::Index i = 0; i < s.xb.size(); ++i)
      if (s.xb[i] < 0.0 && s.xb[i] > -1e-9) s.xb[i] = 0.0;
    s.y = s.factor.solve_transposed(basic_costs(s));
    s.since_refactor = 0;
  }

  void run(State& s) const {
    const std::size_t n = s.lp.cols();
    s.in_basis.assign(n, false);
    for (std::size_t b : s.basis) {
      if (b >= n) throw SolverError("basis column out of range");
      s.in_basis[b] = true;
    }
    refactor(s);
    for (Eigen::Index i = 0; i < s.xb.size(); ++i)
      if (s.xb[i] < -1e-7) throw SolverError("initial basis is infeasible");

    const auto m = static_cast<Eigen::Index>(s.lp.rows);
    std::size_t degenerate_streak = 0;
    Eigen::VectorXd u(m);
    Eigen::VectorXd ug;
    for (;;) {
      const bool bland = options_.pricing == PricingRule::Bland || degenerate_streak > 50;
      std::size_t entering = n;
      double best = -options_.optimality_tol;
      for (std::size_t j = 0; j < s.enterable; ++j) {
        if (s.in_basis[j]) continue;
        const double d = s.cost[j] - dot(s.y, s.lp.columns[j]);
        if (d < best) {
          entering = j;
          best = d;
          if (bland) break;
        }
      }
      if (entering == n) return;
      if (s.pivots >= options_.max_pivots) throw SolverError("solver stalled");

      s.factor.solve(s.lp.columns[entering], u, ug);

      // Basic columns that may never enter (phase-one artificials kept at
      // zero on redundant rows) leave as soon as the direction touches them.
      Eigen::Index leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const std::size_t col = s.basis[static_cast<std::size_t>(i)];
        const bool pinned = col >= s.enterable;
        if (pinned ? std::abs(u[i]) <= options_.pivot_tol : u[i] <= options_.pivot_tol) continue;
        const double ratio = pinned ? 0.0 : std::max(0.0, s.xb[i]) / u[i];
        const bool tie = leave >= 0 && std::abs(ratio - theta) <= 1e-12 * (1.0 + theta);
        if ((!tie && ratio < theta) || (tie && col < s.basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          theta = std::min(theta, ratio);
        }
      }
      if (leave < 0) throw SolverError("linear program is unbounded");
      degenerate_streak = theta == 0.0 ? degenerate_streak + 1 : 0;

      s.xb -= theta * u;
      s.xb[leave] = theta;
      s.factor.exchange(static_cast<std::size_t>(leave), entering, u, ug);
      s.in_basis[s.basis[static_cast<std::size_t>(leave)]] = false;
      s.in_basis[entering] = true;
      s.basis[static_cast<std::size_t>(leave)] = entering;
      ++s.pivots;
      if (++s.since_refactor >= options_.refactor_interval) {
        refactor(s);
      } else {
        s.y = s.factor.solve_transposed(basic_costs(s));
      }
    }
  }

  static LpSolution finish(const StandardFormLp& lp, const State& s) {
    LpSolution out;
    out.x.assign(lp.cols(), 0.0);
    for (std::size_t i = 0; i < s.basis.size(); ++i)
      if (s.basis[i] < lp.cols()) out.x[s.basis[i]] = std::max(0.0, s.xb[static_cast<Eigen::Index>(i)]);
    for (std::size_t j = 0; j < lp.cols(); ++j) out.objective += lp.cost[j] * out.x[j];
    out.pivots = s.pivots;
    return out;
  }

  LpSolution solve_two_phase(const StandardFormLp& lp) const {
    // Phase one: artificial identity columns (rows flipped so rhs >= 0).
    StandardFormLp aux = lp;
    const std::size_t n = lp.cols();
    for (auto& c : aux.columns)
      for (std::size_t k = 0; k < c.rows.size(); ++k)
        if (lp.rhs[c.rows[k]] < 0.0) c.values[k] = -c.values[k];
    for (auto& r : aux.rhs) r = std::abs(r);
    std::vector<double> phase1_cost(n, 0.0);
    std::vector<std::size_t> basis;
    for (std::size_t r = 0; r < lp.rows; ++r) {
      aux.columns.push_back({{r}, {1.0}});
      phase1_cost.push_back(1.0);
      basis.push_back(n + r);
    }
    aux.cost = phase1_cost;
    State p1(aux, basis, phase1_cost, aux.cols());
    run(p1);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < p1.basis.size(); ++i)
      if (p1.basis[i] >= n) infeasibility += std::max(0.0, p1.xb[static_cast<Eigen::Index>(i)]);
    if (infeasibility > 1e-7) throw SolverError("linear program is infeasible");

    // Phase two on the original costs; artificials may stay basic at zero on
    // redundant rows but can never re-enter.
    std::vector<double> cost2 = lp.cost;
    cost2.resize(aux.cols(), 0.0);
    State p2(aux, p1.basis, cost2, n);
    p2.pivots = p1.pivots;
    run(p2);
    LpSolution out = finish(aux, p2);
    out.x.resize(n);
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += lp.cost[j] * out.x[j];
    return out;
  }

  SimplexOptions options_;
};

static_assert(LpBackend<RevisedSimplex>);

}  // namespace chronocycle
