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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "chronocycle/reduction.hpp"
#include "chronocycle/rips.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cc = chronocycle;
using cc::Simplex;

namespace {

std::vector<double> distinct_values(const cc::Filtration& f) {
  std::vector<double> v;
  for (const auto& e : f) v.push_back(e.value);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Every count #{pairs : birth <= s, death > t} must equal the rank of
/// H_p(K_s) -> H_p(K_t).
void expect_diagram_matches_ranks(const cc::Filtration& f, int p) {
  const auto dec = cc::reduce(f);
  const auto pd = cc::diagram(dec, f, p);
  const auto values = distinct_values(f);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a; b < values.size(); ++b) {
      const double s = values[a];
      const double t = values[b];
      int count = 0;
      for (const auto& q : pd)
        if (q.birth <= s && q.death > t) ++count;
      ASSERT_EQ(count, oracle::persistent_betti(f, p, s, t)) << "p=" << p << " s=" << s << " t=" << t;
    }
  }
}

}  // namespace

TEST(Reduce, SingleEdgeKillsAComponent) {
  cc::Filtration f({{Simplex{0}, 0.0}, {Simplex{1}, 0.0}, {Simplex{0, 1}, 1.0}});
  const auto dec = cc::reduce(f);
  EXPECT_EQ(dec.lowest_one(2), std::optional<cc::Index>(1));
  EXPECT_EQ(dec.column_with_lowest(1), std::optional<cc::Index>(2));
  EXPECT_TRUE(dec.is_zero(0));
}

TEST(Reduce, RIsReducedAndEqualsBoundaryTimesV) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    cc::RipsConfig rc;
    rc.max_dim = 1 + trial % 2;
    const auto f = cc::build_rips(oracle::random_cloud(rng, 4 + trial % 6), rc);
    const auto dec = cc::reduce(f);
    std::set<cc::Index> lows;
    for (cc::Index j = 0; j < f.size(); ++j) {
      if (const auto low = dec.lowest_one(j)) {
        ASSERT_TRUE(lows.insert(*low).second);
      }
      // Recompute boundary(V_j) over F2.
      std::map<cc::Index, int> acc;
      for (cc::Index k : dec.v_column(j))
        for (cc::Index face : f.facet_indices(k)) acc[face] ^= 1;
      std::vector<cc::Index> bv;
      for (const auto& [row, bit] : acc)
        if (bit) bv.push_back(row);
      const auto r = dec.r_column(j);
      ASSERT_EQ(bv, std::vector<cc::Index>(r.begin(), r.end()));
    }
  }
}

TEST(Reduce, TopDimensionVColumnsCanBeSkipped) {
  std::mt19937_64 rng(3);
  const auto f = cc::build_rips(oracle::random_cloud(rng, 8));
  const auto full = cc::reduce(f);
  const auto lean = cc::reduce(f, {cc::TrackV::BelowTopDimension});
  for (cc::Index j = 0; j < f.size(); ++j) {
    const auto a = full.r_column(j);
    const auto b = lean.r_column(j);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    EXPECT_EQ(lean.has_v(j), f.dimension(j) < f.max_dimension());
  }
  EXPECT_THROW(lean.v_column(f.of_dimension(2)[0]), cc::DataError);
}

TEST(Diagram, BentCylinder) {
  const auto f = fixtures::bent_cylinder();
  const auto dec = cc::reduce(f);
  auto pd = cc::diagram(dec, f, 1);
  ASSERT_EQ(pd.size(), 2u);
  std::sort(pd.begin(), pd.end(), [](const auto& a, const auto& b) { return a.death < b.death; });
  EXPECT_EQ(pd[0].birth, 1.0);
  EXPECT_EQ(pd[0].death, 2.0);
  EXPECT_EQ(pd[1].birth, 1.0);
  EXPECT_TRUE(pd[1].essential());
  EXPECT_TRUE(std::isinf(pd[1].death));
  expect_diagram_matches_ranks(f, 1);
}

TEST(Diagram, EquilateralTriangleHasNoLoop) {
  const double h = std::sqrt(3.0) / 2.0;
  const auto f = cc::build_rips(cc::LabeledPointCloud(2, {0.0, 0.0, 1.0, 0.0, 0.5, h}, {0, 1, 2}));
  EXPECT_TRUE(cc::diagram(cc::reduce(f), f, 1).empty());
}

TEST(Diagram, UnitSquareLoop) {
  const auto f = cc::build_rips(cc::LabeledPointCloud(2, {0, 0, 1, 0, 1, 1, 0, 1}, {0, 1, 2, 3}));
  const auto pd = cc::diagram(cc::reduce(f), f, 1);
  ASSERT_EQ(pd.size(), 1u);
  EXPECT_DOUBLE_EQ(pd[0].birth, 1.0);
  EXPECT_DOUBLE_EQ(pd[0].death, std::sqrt(2.0));
  EXPECT_EQ(oracle::betti(f, 1, 1.0 - 1e-9), 0);
  EXPECT_EQ(oracle::betti(f, 1, 1.0), 1);
  EXPECT_EQ(oracle::betti(f, 1, std::sqrt(2.0)), 0);
}

TEST(Diagram, DegreeMustBeBelowTopDimension) {
  const auto f = cc::build_rips(cc::LabeledPointCloud(2, {0, 0, 1, 0, 1, 1, 0, 1}, {0, 1, 2, 3}));
  EXPECT_THROW(cc::diagram(cc::reduce(f), f, 2), cc::DataError);
}

TEST(Diagram, MatchesRankOracleOnRandomFiltrations) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    cc::RipsConfig rc;
    rc.max_dim = 2;
    const auto f = cc::build_rips(oracle::random_cloud(rng, 5 + trial % 4, 3), rc);
    expect_diagram_matches_ranks(f, 0);
    expect_diagram_matches_ranks(f, 1);
    expect_diagram_matches_ranks(f, 2);
  }
}

TEST(Diagram, NoisyCircleHasOneDominantLoop) {
  const auto f = cc::build_rips(oracle::circle_cloud(30, 1.0, 0.05, 7));
  const auto pd = cc::diagram(cc::reduce(f), f, 1);
  std::vector<double> pers;
  for (const auto& p : pd) pers.push_back(p.persistence());
  std::sort(pers.rbegin(), pers.rend());
  ASSERT_FALSE(pers.empty());
  if (pers.size() > 1) {
    EXPECT_GT(pers[0], 3.0 * pers[1]);
  }
  // Ranks at ten values spread over the filtration agree with the diagram.
  const double top = f.max_value();
  for (int k = 1; k <= 10; ++k) {
    const double t = top * k / 11.0;
    int alive = 0;
    for (const auto& p : pd)
      if (p.birth <= t && p.death > t) ++alive;
    EXPECT_EQ(alive, oracle::betti(f, 1, t));
  }
}

TEST(Diagram, RepresentativesAreCyclesBornAtBirthAndKilledAtDeath) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = cc::build_rips(oracle::random_cloud(rng, 6 + trial % 5, 2));
    const auto pd = cc::diagram(cc::reduce(f), f, 1);
    for (const auto& p : pd) {
      ASSERT_TRUE(cc::is_cycle(p.initial_rep, f));
      ASSERT_EQ(cc::chain_birth(p.initial_rep, f), p.birth);
      if (p.essential()) continue;
      const auto support = p.initial_rep.support();
      EXPECT_TRUE(oracle::is_boundary(f, 1, support, p.death));
      EXPECT_FALSE(oracle::is_boundary(f, 1, support, std::nextafter(p.death, 0.0)));
      EXPECT_TRUE(cc::is_boundary_at(p.initial_rep, f, p.death));
      EXPECT_FALSE(cc::is_boundary_at(p.initial_rep, f, p.death, true));
    }
  }
}

TEST(Diagram, InvariantUnderVertexRelabelling) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pc = oracle::random_cloud(rng, 9, 2);
    std::vector<std::size_t> perm(pc.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> coords;
    std::vector<double> labels;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const auto p = pc.point(perm[i]);
      coords.insert(coords.end(), p.begin(), p.end());
      labels.push_back(static_cast<double>(i));
    }
    const cc::LabeledPointCloud other(2, coords, labels);
    auto multiset = [](const cc::LabeledPointCloud& c) {
      const auto f = cc::build_rips(c);
      std::multiset<std::pair<double, double>> out;
      for (const auto& p : cc::diagram(cc::reduce(f), f, 1)) out.emplace(p.birth, p.death);
      return out;
    };
    EXPECT_EQ(multiset(pc), multiset(other));
  }
}

TEST(Span, MembershipMatchesDenseOracle) {
  std::mt19937_64 rng(5);
  const auto f = cc::build_rips(oracle::random_cloud(rng, 7));
  const double t = f.max_value() * 0.6;
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cc::Index> pick;
    for (cc::Index i : f.of_dimension(1))
      if (f.value(i) <= t && coin(rng)) pick.push_back(i);
    const auto c = cc::F2Chain::from_indices(1, pick);
    EXPECT_EQ(cc::is_boundary_at(c, f, t), oracle::is_boundary(f, 1, pick, t));
  }
}
