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
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "chronocycle/chain.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"
#include "chronocycle/lp.hpp"
#include "chronocycle/reduction.hpp"
#include "chronocycle/weights.hpp"

namespace chronocycle {

namespace relax {
struct Full {};
/// epsilon = rho * (d - b), rho in (0, 1].
struct Fraction {
  double rho = 0.9;
};
/// epsilon given directly; must not exceed d - b.
struct AbsoluteBound {
  double epsilon = 0.0;
};
}  // namespace relax

using RelaxationPolicy = std::variant<relax::Full, relax::Fraction, relax::AbsoluteBound>;

inline std::string describe(const RelaxationPolicy& policy) {
  struct {
    std::string operator()(relax::Full) const { return "full"; }
    std::string operator()(relax::Fraction f) const { return "fraction:" + std::to_string(f.rho); }
    std::string operator()(relax::AbsoluteBound a) const {
      return "absolute:" + std::to_string(a.epsilon);
    }
  } visitor;
  return std::visit(visitor, policy);
}

/// Birth allowed for the optimized representative.
inline double relaxed_birth(const PersistencePair& pair, const RelaxationPolicy& policy) {
  if (std::holds_alternative<relax::Full>(policy)) return pair.birth;
  if (pair.essential()) throw DataError("relaxation is undefined for an essential class");
  const double span = pair.death - pair.birth;
  if (const auto* fr = std::get_if<relax::Fraction>(&policy)) {
    if (!(fr->rho > 0.0 && fr->rho <= 1.0)) throw DataError("relaxation fraction must lie in (0, 1]");
    if (fr->rho == 1.0) return pair.birth;
    return std::max(pair.birth, pair.death - fr->rho * span);
  }
  const double eps = std::get<relax::AbsoluteBound>(policy).epsilon;
  if (!(eps > 0.0)) throw DataError("relaxation epsilon must be positive");
  if (eps > span) throw DataError("relaxation epsilon exceeds the class persistence");
  return pair.death - eps;
}

struct OptimizeOptions {
  LengthMetric length_metric = LengthMetric::Count;
  SolveOptions solve;
  SimplexOptions simplex;
  std::optional<double> threshold;  // minimum persistence; default half the largest finite one
  unsigned threads = 0;             // 0: hardware concurrency
};

struct OptimizedRepresentative {
  PersistencePair pair;
  RelaxationPolicy policy;
  WeightKind kind = WeightKind::VertexBased;
  double relaxed_birth = 0.0;
  std::size_t p_size = 0;
  std::size_t q_size = 0;
  bool c0_oriented = true;
  CycleSolution solution;
  RealChain chain{0};      // solution as a chain over the filtration
  F2Chain rounded{0};      // chain mod 2 after rounding
  bool rounded_is_cycle = true;
  double dispersion = 0.0;                  // on the rounded support
  std::optional<double> weighted_dispersion;  // on the full support, fractional solutions only
};

inline OptimizedRepresentative optimize_class(const PersistencePair& pair, const RelaxationPolicy& policy,
                                              WeightKind kind, const Filtration& f,
                                              const ReducedDecomposition& dec, TimeLabels labels,
                                              const OptimizeOptions& opts = {}) {
  OptimizedRepresentative out;
  out.pair = pair;
  out.policy = policy;
  out.kind = kind;
  out.relaxed_birth = relaxed_birth(pair, policy);

  const SimplexSets sets = restrict_sets(f, dec, pair.dim, out.relaxed_birth);
  const WeightMatrix W = make_weights(kind, f, sets.P, labels, opts.length_metric);
  const CycleLP lp = build_lp(sets, pair.initial_rep, W, f);
  out.p_size = lp.rows();
  out.q_size = lp.num_q();
  out.c0_oriented = lp.c0_oriented;
  out.solution = solve_cycle_lp(lp, RevisedSimplex(opts.simplex), opts.solve);

  std::vector<Term<double>> terms;
  for (std::size_t j = 0; j < lp.rows(); ++j)
    if (std::abs(out.solution.c[j]) > opts.solve.round_tol) terms.push_back({lp.P[j], out.solution.c[j]});
  out.chain = RealChain::from_terms(pair.dim, terms);
  out.rounded = reduce_mod2(out.chain);
  out.rounded_is_cycle = !out.rounded.empty() && is_cycle(out.rounded, f);

  const double support_dispersion = time_dispersion(out.chain, f, labels);
  out.dispersion = out.rounded.empty() ? support_dispersion : time_dispersion(out.rounded, f, labels);
  if (out.solution.fractional || !out.rounded_is_cycle) out.weighted_dispersion = support_dispersion;
  return out;
}

/// Default significance threshold: half the largest finite persistence.
inline double default_threshold(std::span<const PersistencePair> pairs) {
  double best = 0.0;
  for (const auto& p : pairs)
    if (!p.essential()) best = std::max(best, p.persistence());
  return 0.5 * best;
}

/// Pairs at or above the threshold, most persistent first.
inline std::vector<PersistencePair> significant_pairs(std::span<const PersistencePair> pairs,
                                                      double threshold) {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs)
    if (p.persistence() >= threshold) out.push_back(p);
  std::stable_sort(out.begin(), out.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.birth_simplex < b.birth_simplex;
  });
  return out;
}

/// One representative per significant pair and requested kind, ordered by
/// persistence (descending) and then by the order of `kinds`. Essential
/// classes are only optimized under the Full policy.
inline std::vector<OptimizedRepresentative> optimize_all(std::span<const PersistencePair> pairs,
                                                         const RelaxationPolicy& policy,
                                                         std::span<const WeightKind> kinds,
                                                         const Filtration& f,
                                                         const ReducedDecomposition& dec,
                                                         TimeLabels labels,
                                                         const OptimizeOptions& opts = {}) {
  const double threshold = opts.threshold ? *opts.threshold : default_threshold(pairs);
  struct Job {
    const PersistencePair* pair;
    WeightKind kind;
  };
  const auto selected = significant_pairs(pairs, threshold);
  std::vector<Job> jobs;
  for (const auto& p : selected) {
    if (p.essential() && !std::holds_alternative<relax::Full>(policy)) continue;
    for (WeightKind k : kinds) jobs.push_back({&p, k});
  }

  std::vector<std::optional<OptimizedRepresentative>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < jobs.size(); i += threads) {
      try {
        results[i] = optimize_class(*jobs[i].pair, policy, jobs[i].kind, f, dec, labels, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    threads = 1;
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  std::vector<OptimizedRepresentative> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

/// True iff a and b differ by a boundary of simplices with value <= t.
inline bool homologous(const F2Chain& a, const F2Chain& b, const Filtration& f, double t) {
  if (a.dimension() != b.dimension()) throw DataError("chains of different degree");
  return is_boundary_at(a + b, f, t);
}

}  // namespace chronocycle
