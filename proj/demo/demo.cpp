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

// Library tour: a noisy sine goes through embedding, Rips persistence and
// the three cycle optimizations; prints one line per representative.

#include <cstdio>
#include <numbers>
#include <random>

#include "chronocycle/chronocycle.hpp"

int main() {
  namespace cc = chronocycle;

  const std::size_t n = 200;
  const double dt = 8.0 * std::numbers::pi / static_cast<double>(n - 1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(dt * static_cast<double>(i)) + noise(rng);

  const auto emb = cc::embed(cc::TimeSeries(0.0, dt, v));
  std::printf("embedding: d=%d tau=%.4f points=%zu\n", emb.params.dimension, emb.params.tau, emb.cloud.size());

  const auto cloud = cc::subsample(emb.cloud, 100);
  const auto f = cc::build_rips(cloud);
  const auto dec = cc::reduce(f, {cc::TrackV::BelowTopDimension});
  const auto pd = cc::diagram(dec, f, 1);
  std::printf("rips: %zu simplices, %zu H1 pairs\n", f.size(), pd.size());

  const std::vector<cc::WeightKind> kinds{cc::WeightKind::VertexBased, cc::WeightKind::SimplexBased,
                                          cc::WeightKind::Length};
  for (const auto& r : cc::optimize_all(pd, cc::relax::Full{}, kinds, f, dec, cloud.labels())) {
    std::printf("  [%.3f, %.3f) %-7s objective=%-9.4f edges=%-3zu dispersion=%.3f\n", r.pair.birth, r.pair.death,
                std::string(cc::to_string(r.kind)).c_str(), r.solution.objective, r.rounded.size(), r.dispersion);
  }
  return 0;
}
