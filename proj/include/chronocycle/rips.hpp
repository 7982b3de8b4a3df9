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
#include <optional>
#include <span>
#include <vector>

#include "chronocycle/embedding.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/filtration.hpp"

namespace chronocycle {

struct RipsConfig {
  int max_dim = 1;                   // homology degree of interest; simplices go to max_dim + 1
  std::optional<double> max_radius;  // empty: the cloud diameter, i.e. the full complex
  std::size_t max_simplices = 40'000'000;
};

/// Dense symmetric matrix of Euclidean distances.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const LabeledPointCloud& pc) : n_(pc.size()), d_(n_ * n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      const auto p = pc.point(i);
      for (std::size_t j = i + 1; j < n_; ++j) {
        const auto q = pc.point(j);
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
        d_[i * n_ + j] = d_[j * n_ + i] = std::sqrt(s);
      }
    }
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  double diameter() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
  }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

namespace detail {

class CliqueEnumerator {
 public:
  CliqueEnumerator(const DistanceMatrix& dist, double radius, int top_dim, std::size_t cap,
                   std::vector<FiltrationEntry>& out)
      : dist_(dist), radius_(radius), top_dim_(top_dim), cap_(cap), out_(out) {
    const std::size_t n = dist.size();
    higher_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (dist(i, j) <= radius_) higher_[i].push_back(static_cast<Vertex>(j));
  }

  void run() {
    for (std::size_t i = 0; i < dist_.size(); ++i) {
      stack_.assign(1, static_cast<Vertex>(i));
      emit(0.0);
      if (top_dim_ >= 1) extend(higher_[i], 0.0);
    }
  }

 private:
  void emit(double value) {
    if (out_.size() >= cap_) throw DataError("simplex count exceeds the configured cap");
    out_.push_back({Simplex(std::span<const Vertex>(stack_)), value});
  }

  // `candidates`: common higher neighbours of every vertex on the stack.
  void extend(const std::vector<Vertex>& candidates, double value) {
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const Vertex v = candidates[c];
      double next = value;
      for (Vertex u : stack_) next = std::max(next, dist_(u, v));
      stack_.push_back(v);
      emit(next);
      if (static_cast<int>(stack_.size()) <= top_dim_) {
        std::vector<Vertex> common;
        const auto& nb = higher_[v];
        std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(c) + 1,
                              candidates.end(), nb.begin(), nb.end(), std::back_inserter(common));
        if (!common.empty()) extend(common, next);
      }
      stack_.pop_back();
    }
  }

  const DistanceMatrix& dist_;
  double radius_;
  int top_dim_;
  std::size_t cap_;
  std::vector<FiltrationEntry>& out_;
  std::vector<std::vector<Vertex>> higher_;
  std::vector<Vertex> stack_;
};

}  // namespace detail

/// Vietoris-Rips filtration: every simplex of diameter <= radius, valued by
/// its diameter, up to dimension max_dim + 1. Vertex ids are point indices.
inline Filtration build_rips(const LabeledPointCloud& pc, const RipsConfig& cfg = {}) {
  if (pc.empty()) throw DataError("cannot build a Rips filtration of an empty cloud");
  if (cfg.max_dim < 1 || cfg.max_dim > 3) throw DataError("max_dim must lie in [1, 3]");
  if (cfg.max_radius && !(*cfg.max_radius > 0.0)) throw DataError("max_radius must be positive");

  const DistanceMatrix dist(pc);
  const double radius = cfg.max_radius ? *cfg.max_radius : dist.diameter();
  std::vector<FiltrationEntry> entries;
  detail::CliqueEnumerator(dist, radius, cfg.max_dim + 1, cfg.max_simplices, entries).run();
  return Filtration(std::move(entries), assume_closed);
}

}  // namespace chronocycle
