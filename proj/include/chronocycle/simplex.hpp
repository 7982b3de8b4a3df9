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
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "chronocycle/error.hpp"

namespace chronocycle {

using Vertex = std::uint32_t;
/// Position of a simplex inside a filtration.
using Index = std::uint32_t;

/// Largest simplex dimension the library stores (H_3 needs 4-simplices).
inline constexpr int kMaxSimplexDimension = 4;

/// An abstract simplex: a strictly increasing list of vertex ids.
///
/// Vertices live inline (no heap allocation) since Rips filtrations hold
/// millions of them.
class Simplex {
 public:
  static constexpr std::size_t kCapacity = kMaxSimplexDimension + 1;

  Simplex() = default;

  Simplex(std::initializer_list<Vertex> vertices)
      : Simplex(std::span<const Vertex>(vertices.begin(), vertices.size())) {}

  /// Throws DataError unless `vertices` is non-empty and strictly increasing.
  explicit Simplex(std::span<const Vertex> vertices) {
    if (vertices.empty()) throw DataError("simplex needs at least one vertex");
    if (vertices.size() > kCapacity)
      throw DataError("simplex dimension exceeds supported maximum");
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      if (vertices[i - 1] >= vertices[i])
        throw DataError("simplex vertices must be strictly increasing");
    }
    std::copy(vertices.begin(), vertices.end(), vertices_.begin());
    size_ = static_cast<std::uint8_t>(vertices.size());
  }

  /// Sorts the input first; duplicates are still rejected.
  static Simplex from_unsorted(std::vector<Vertex> vertices) {
    std::sort(vertices.begin(), vertices.end());
    return Simplex(std::span<const Vertex>(vertices));
  }

  int dimension() const { return static_cast<int>(size_) - 1; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::span<const Vertex> vertices() const { return {vertices_.data(), size_}; }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.begin() + size_; }

  /// The face obtained by deleting the vertex in position `omit`.
  Simplex facet(std::size_t omit) const {
    Simplex face;
    std::size_t k = 0;
    for (std::size_t i = 0; i < size_; ++i)
      if (i != omit) face.vertices_[k++] = vertices_[i];
    face.size_ = static_cast<std::uint8_t>(size_ - 1);
    return face;
  }

  bool contains(Vertex v) const {
    return std::binary_search(begin(), end(), v);
  }

  /// Number of shared vertices.
  std::size_t intersection_size(const Simplex& other) const {
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < size_ && j < other.size_) {
      if (vertices_[i] < other.vertices_[j]) {
        ++i;
      } else if (other.vertices_[j] < vertices_[i]) {
        ++j;
      } else {
        ++count, ++i, ++j;
      }
    }
    return count;
  }

  /// Lexicographic on the vertex sequence.
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(),
                                                  b.begin(), b.end());
  }
  friend bool operator==(const Simplex& a, const Simplex& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const Simplex& s) {
    os << '{';
    for (std::size_t i = 0; i < s.size_; ++i) os << (i ? "," : "") << s[i];
    return os << '}';
  }

 private:
  std::array<Vertex, kCapacity> vertices_{};
  std::uint8_t size_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = s.size();
    for (Vertex v : s) h = h * 0x9E3779B97F4A7C15ull + std::hash<Vertex>{}(v);
    return h;
  }
};

}  // namespace chronocycle
