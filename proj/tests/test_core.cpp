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

#include <random>
#include <sstream>

#include "chronocycle/chain.hpp"
#include "chronocycle/filtration.hpp"
#include "chronocycle/rips.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cc = chronocycle;
using cc::F2Chain;
using cc::Filtration;
using cc::RealChain;
using cc::Simplex;

namespace {

Filtration full_simplex(int dim) {
  std::vector<cc::Vertex> all;
  for (int v = 0; v <= dim; ++v) all.push_back(static_cast<cc::Vertex>(v));
  std::vector<cc::FiltrationEntry> e;
  for (unsigned mask = 1; mask < (1u << all.size()); ++mask) {
    std::vector<cc::Vertex> vs;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask & (1u << i)) vs.push_back(all[i]);
    e.push_back({Simplex(std::span<const cc::Vertex>(vs)), static_cast<double>(vs.size() - 1)});
  }
  return Filtration(std::move(e));
}

}  // namespace

TEST(Simplex, RejectsUnsortedAndDuplicateVertices) {
  EXPECT_THROW(Simplex({2, 1}), cc::DataError);
  EXPECT_THROW(Simplex({1, 1}), cc::DataError);
  EXPECT_THROW(Simplex(std::span<const cc::Vertex>{}), cc::DataError);
  EXPECT_EQ(Simplex::from_unsorted({3, 0, 2}), (Simplex{0, 2, 3}));
}

TEST(Simplex, FacetOmitsTheGivenPosition) {
  const Simplex s{1, 4, 7};
  EXPECT_EQ(s.dimension(), 2);
  EXPECT_EQ(s.facet(0), (Simplex{4, 7}));
  EXPECT_EQ(s.facet(1), (Simplex{1, 7}));
  EXPECT_EQ(s.facet(2), (Simplex{1, 4}));
  EXPECT_EQ(s.intersection_size(Simplex{4, 7, 9}), 2u);
  std::ostringstream os;
  os << s;
  EXPECT_EQ(os.str(), "{1,4,7}");
}

TEST(Filtration, OrdersByValueThenDimensionThenVertices) {
  Filtration f({{Simplex{0, 1}, 1.0}, {Simplex{1}, 0.0}, {Simplex{0}, 0.0}, {Simplex{2}, 1.0}});
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f.simplex(0), Simplex{0});
  EXPECT_EQ(f.simplex(1), Simplex{1});
  EXPECT_EQ(f.simplex(2), Simplex{2});
  EXPECT_EQ(f.simplex(3), (Simplex{0, 1}));
  EXPECT_EQ(f.index_of(Simplex{0, 1}), 3u);
  EXPECT_FALSE(f.find(Simplex{1, 2}).has_value());
}

TEST(Filtration, RejectsMissingFacesAndEarlyCofaces) {
  EXPECT_THROW(Filtration({{Simplex{0}, 0.0}, {Simplex{0, 1}, 1.0}}), cc::DataError);
  EXPECT_THROW(Filtration({{Simplex{0}, 0.0}, {Simplex{1}, 2.0}, {Simplex{0, 1}, 1.0}}), cc::DataError);
  EXPECT_THROW(Filtration({{Simplex{0}, -1.0}}), cc::DataError);
  EXPECT_THROW(Filtration({{Simplex{0}, 0.0}, {Simplex{0}, 0.0}}), cc::DataError);
}

TEST(Boundary, TriangleOverF2) {
  const Filtration f = full_simplex(2);
  const auto tri = F2Chain::from_indices(2, std::vector<cc::Index>{f.index_of(Simplex{0, 1, 2})});
  const auto b = cc::boundary(tri, f);
  EXPECT_EQ(b.size(), 3u);
  for (const Simplex& e : {Simplex{0, 1}, Simplex{0, 2}, Simplex{1, 2}})
    EXPECT_EQ(b.coefficient(f.index_of(e)), cc::Z2(1));
}

TEST(Boundary, TriangleOverRealsUsesAlternatingSigns) {
  const Filtration f = full_simplex(2);
  const auto tri = cc::lift_to_real(F2Chain::from_indices(2, std::vector<cc::Index>{f.index_of(Simplex{0, 1, 2})}));
  const auto b = cc::boundary(tri, f);
  EXPECT_EQ(b.coefficient(f.index_of(Simplex{1, 2})), 1.0);
  EXPECT_EQ(b.coefficient(f.index_of(Simplex{0, 2})), -1.0);
  EXPECT_EQ(b.coefficient(f.index_of(Simplex{0, 1})), 1.0);
}

TEST(Boundary, BoundaryOfBoundaryOfTetrahedronVanishes) {
  const Filtration f = full_simplex(3);
  const std::vector<cc::Index> tet{f.index_of(Simplex{0, 1, 2, 3})};
  EXPECT_TRUE(cc::boundary(cc::boundary(F2Chain::from_indices(3, tet), f), f).empty());
  EXPECT_TRUE(cc::boundary(cc::boundary(cc::lift_to_real(F2Chain::from_indices(3, tet)), f), f).empty());
}

TEST(Boundary, DimensionZeroIsAnError) {
  const Filtration f = full_simplex(1);
  EXPECT_THROW(cc::boundary(F2Chain::from_indices(0, std::vector<cc::Index>{0}), f), cc::DataError);
}

TEST(Boundary, RandomFiltrationsAreClosedAndSquareToZero) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 6;
    cc::RipsConfig rc;
    rc.max_dim = 2;
    const Filtration f = cc::build_rips(oracle::random_cloud(rng, n), rc);
    const cc::BoundaryMatrix f2(f, cc::FieldMode::F2);
    const cc::BoundaryMatrix re(f, cc::FieldMode::Real);
    for (cc::Index j = 0; j < f.size(); ++j) {
      for (cc::Index face : f2.rows(j)) ASSERT_LT(face, j);
      ASSERT_EQ(f2.rows(j).size(), f.dimension(j) == 0 ? 0u : static_cast<std::size_t>(f.dimension(j) + 1));
      if (f.dimension(j) < 2) continue;
      std::map<cc::Index, int> acc_real;
      std::map<cc::Index, int> acc_f2;
      const auto rows = re.rows(j);
      const auto signs = re.signs(j);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto rr = re.rows(rows[k]);
        const auto ss = re.signs(rows[k]);
        for (std::size_t m = 0; m < rr.size(); ++m) {
          acc_real[rr[m]] += signs[k] * ss[m];
          acc_f2[rr[m]] += 1;
        }
      }
      for (const auto& [row, v] : acc_real) ASSERT_EQ(v, 0);
      for (const auto& [row, v] : acc_f2) ASSERT_EQ(v % 2, 0);
    }
  }
}

TEST(Boundary, RealBoundaryReducesToF2Boundary) {
  std::mt19937_64 rng(5);
  cc::RipsConfig rc;
  rc.max_dim = 2;
  const Filtration f = cc::build_rips(oracle::random_cloud(rng, 7), rc);
  for (cc::Index j = 0; j < f.size(); ++j) {
    if (f.dimension(j) == 0) continue;
    const std::vector<cc::Index> one{j};
    const auto f2 = cc::boundary(F2Chain::from_indices(f.dimension(j), one), f);
    const auto re = cc::boundary(cc::lift_to_real(F2Chain::from_indices(f.dimension(j), one)), f);
    EXPECT_EQ(cc::reduce_mod2(re), f2);
  }
}

TEST(Chain, AdditionCancelsOverF2AndDropsZeros) {
  const std::vector<cc::Index> a{1, 2, 3};
  const std::vector<cc::Index> b{2, 3, 4};
  const auto s = F2Chain::from_indices(1, a) + F2Chain::from_indices(1, b);
  EXPECT_EQ(s.support(), (std::vector<cc::Index>{1, 4}));
  const std::vector<cc::Term<double>> t{{5, 1.0}, {5, -1.0}, {6, 2.0}};
  EXPECT_EQ(RealChain::from_terms(1, t).support(), std::vector<cc::Index>{6});
}

TEST(ChainBirth, IsTheLatestValue) {
  Filtration f({{Simplex{0}, 0.0}, {Simplex{1}, 0.0}, {Simplex{2}, 0.0}, {Simplex{0, 1}, 0.2}, {Simplex{1, 2}, 0.5}});
  const std::vector<cc::Index> idx{f.index_of(Simplex{0, 1}), f.index_of(Simplex{1, 2})};
  EXPECT_DOUBLE_EQ(cc::chain_birth(F2Chain::from_indices(1, idx), f), 0.5);
  EXPECT_DOUBLE_EQ(cc::chain_birth(F2Chain::from_indices(0, std::vector<cc::Index>{0}), f), 0.0);
  EXPECT_THROW(cc::chain_birth(F2Chain(1), f), cc::DataError);
}

TEST(ChainBirth, SquareCycleIsBornWithItsLatestEdge) {
  // Unit square corners: sides at 1, diagonals at sqrt(2).
  cc::LabeledPointCloud pc(2, {0, 0, 1, 0, 1, 1, 0, 1}, {0, 1, 2, 3});
  const Filtration f = cc::build_rips(pc);
  std::vector<cc::Index> sides;
  for (const Simplex& e : {Simplex{0, 1}, Simplex{1, 2}, Simplex{2, 3}, Simplex{0, 3}}) sides.push_back(f.index_of(e));
  const auto c = F2Chain::from_indices(1, sides);
  EXPECT_TRUE(cc::is_cycle(c, f));
  double latest = 0.0;
  for (cc::Index i : sides) latest = std::max(latest, f.value(i));
  EXPECT_DOUBLE_EQ(cc::chain_birth(c, f), latest);
  EXPECT_DOUBLE_EQ(latest, 1.0);
}

TEST(Fixtures, LabelledComplexHasOneIndependentCycle) {
  const auto c = fixtures::labelled_complex();
  EXPECT_EQ(c.filtration.of_dimension(0).size(), 8u);
  EXPECT_EQ(c.filtration.of_dimension(1).size(), 12u);
  EXPECT_EQ(c.filtration.of_dimension(2).size(), 4u);
  EXPECT_EQ(oracle::betti(c.filtration, 1, 1.0), 1);
  EXPECT_EQ(oracle::betti(c.filtration, 0, 1.0), 1);
}
