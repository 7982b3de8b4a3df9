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

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "chronocycle/filtration.hpp"
#include "chronocycle/simplex.hpp"

namespace fixtures {

using chronocycle::Filtration;
using chronocycle::FiltrationEntry;
using chronocycle::Simplex;
using chronocycle::Vertex;

inline constexpr double kPi = std::numbers::pi;

/// Eight time-labelled vertices, twelve edges and four filled triangles.
/// Vertex ids follow time order; letters name the vertices.
struct LabelledComplex {
  Filtration filtration;
  std::vector<double> labels;
  std::map<char, Vertex> id;

  Simplex edge(char a, char b) const { return Simplex::from_unsorted({id.at(a), id.at(b)}); }

  /// Closed walk through the named vertices, as a sorted list of edges.
  std::vector<Simplex> walk(const std::string& path) const {
    std::vector<Simplex> out;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.push_back(edge(path[i], path[i + 1]));
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline LabelledComplex labelled_complex() {
  LabelledComplex c;
  // F=0, E=pi/3, D=2pi/3, B=pi, A=4pi/3, H=5pi/3, G=2pi, C=3pi
  const std::string order = "FEDBAHGC";
  const double thirds[] = {0, 1, 2, 3, 4, 5, 6, 9};
  for (std::size_t i = 0; i < order.size(); ++i) {
    c.id[order[i]] = static_cast<Vertex>(i);
    c.labels.push_back(thirds[i] * kPi / 3.0);
  }
  std::vector<FiltrationEntry> entries;
  for (std::size_t i = 0; i < order.size(); ++i) entries.push_back({Simplex{static_cast<Vertex>(i)}, 0.0});
  for (const char* e : {"BC", "AB", "BD", "DE", "EF", "FH", "HA", "AC", "CD", "HG", "GE", "FG"})
    entries.push_back({c.edge(e[0], e[1]), 1.0});
  for (const char* t : {"ABC", "BCD", "FGH", "EFG"})
    entries.push_back({Simplex::from_unsorted({c.id.at(t[0]), c.id.at(t[1]), c.id.at(t[2])}), 1.0});
  c.filtration = Filtration(std::move(entries));
  return c;
}

/// The cycle highlighted in both weighting illustrations:
/// 4pi/3 - pi - 2pi/3 - pi/3 - 2pi - 5pi/3 - 4pi/3.
inline const std::string kFigureCycle = "ABDEGHA";

/// Two triangles a b c (value 1) and a' b' c' (value 1) joined by a band of
/// six triangles entering at value 2.
inline Filtration bent_cylinder() {
  // a b c = 0 1 2, a' b' c' = 3 4 5
  std::vector<FiltrationEntry> e;
  for (Vertex v = 0; v < 6; ++v) e.push_back({Simplex{v}, 0.0});
  for (auto [u, v] : {std::pair{0u, 1u}, {1u, 2u}, {0u, 2u}, {3u, 4u}, {4u, 5u}, {3u, 5u}})
    e.push_back({Simplex{u, v}, 1.0});
  for (auto [u, v] : {std::pair{0u, 3u}, {0u, 4u}, {1u, 4u}, {1u, 5u}, {2u, 5u}, {2u, 3u}})
    e.push_back({Simplex{u, v}, 2.0});
  const Vertex tri[6][3] = {{0, 4, 3}, {0, 1, 4}, {1, 5, 4}, {1, 2, 5}, {2, 3, 5}, {2, 0, 3}};
  for (const auto& t : tri) e.push_back({Simplex::from_unsorted({t[0], t[1], t[2]}), 2.0});
  return Filtration(std::move(e));
}

/// A 4-cycle 0-1-2-3 with an extra vertex 4 and filled triangle {0,1,4}.
/// All simplices at value 1 except the triangle at 2. Replacing edge 01 by
/// the detour 04+14 is homologous but longer, so the 4-edge cycle is optimal.
inline Filtration square_with_ear() {
  std::vector<FiltrationEntry> e;
  for (Vertex v = 0; v < 5; ++v) e.push_back({Simplex{v}, 0.0});
  for (auto [u, v] : {std::pair{0u, 1u}, {1u, 2u}, {2u, 3u}, {0u, 3u}, {0u, 4u}, {1u, 4u}})
    e.push_back({Simplex{u, v}, 1.0});
  e.push_back({Simplex{0, 1, 4}, 2.0});
  return Filtration(std::move(e));
}

}  // namespace fixtures
