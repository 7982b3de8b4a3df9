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

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chronocycle/embedding.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/io.hpp"
#include "chronocycle/lp.hpp"
#include "chronocycle/optimizer.hpp"
#include "chronocycle/reduction.hpp"
#include "chronocycle/rips.hpp"
#include "chronocycle/weights.hpp"

namespace chronocycle {

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;

  std::string synth_kind = "noisy_sine";
  std::size_t synth_samples = 1000;
  double synth_sigma = 0.1;
  double synth_t_end = 0.0;  // <= 0: 8 pi for noisy_sine, 60 pi for double_sine

  double threshold_fraction = 0.1;
  std::size_t tau_grid_size = 200;
  double tau_max = 0.0;

  int max_dim = 1;
  std::optional<double> max_radius;
  std::size_t subsample = 1000;
  std::size_t max_simplices = 40'000'000;

  std::size_t optimize_subsample = 500;
  RelaxationPolicy policy = relax::Full{};
  std::vector<WeightKind> kinds{WeightKind::VertexBased, WeightKind::SimplexBased, WeightKind::Length};
  std::optional<double> significance;
  LengthMetric length_metric = LengthMetric::Count;
  double round_tol = 1e-6;
  double residual_tol = 1e-8;
  bool dump_lp = false;
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x)) throw UsageError(key + ": expected a number, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_count(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw UsageError(key + ": integer out of range");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError(key + ": expected true or false");
}

}  // namespace detail

/// "full", "fraction:0.9" or "absolute:0.25".
inline RelaxationPolicy parse_policy(const std::string& v) {
  if (v == "full") return relax::Full{};
  const auto colon = v.find(':');
  const std::string mode = v.substr(0, colon);
  if (colon == std::string::npos) throw UsageError("policy: expected full, fraction:<rho> or absolute:<eps>");
  const double x = detail::parse_real("policy", v.substr(colon + 1));
  if (mode == "fraction") {
    if (!(x > 0.0 && x <= 1.0)) throw UsageError("policy: fraction must lie in (0, 1]");
    return relax::Fraction{x};
  }
  if (mode == "absolute") {
    if (!(x > 0.0)) throw UsageError("policy: epsilon must be positive");
    return relax::AbsoluteBound{x};
  }
  throw UsageError("policy: unknown mode '" + mode + "'");
}

inline std::vector<WeightKind> parse_kinds(const std::string& v) {
  std::vector<WeightKind> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = io::trim(item);
    try {
      out.push_back(weight_kind_from_string(item));
    } catch (const DataError& e) {
      throw UsageError(std::string("kinds: ") + e.what());
    }
  }
  if (out.empty()) throw UsageError("kinds: at least one weight kind is required");
  return out;
}

/// Applies `key = value` settings on top of `cfg`, validating every field.
inline void apply_settings(PipelineConfig& cfg, const std::map<std::string, std::string>& kv) {
  using detail::parse_count;
  using detail::parse_real;
  for (const auto& [key, v] : kv) {
    if (key == "input") {
      cfg.input = v;
    } else if (key == "out_dir") {
      cfg.out_dir = v;
    } else if (key == "seed") {
      cfg.seed = parse_count(key, v);
    } else if (key == "synth_kind") {
      if (v != "noisy_sine" && v != "double_sine") throw UsageError("synth_kind: expected noisy_sine or double_sine");
      cfg.synth_kind = v;
    } else if (key == "synth_samples") {
      cfg.synth_samples = parse_count(key, v);
      if (cfg.synth_samples < 4) throw UsageError("synth_samples: need at least 4 samples");
    } else if (key == "synth_sigma") {
      cfg.synth_sigma = parse_real(key, v);
      if (cfg.synth_sigma < 0.0) throw UsageError("synth_sigma: must be non-negative");
    } else if (key == "synth_t_end") {
      cfg.synth_t_end = parse_real(key, v);
    } else if (key == "threshold_fraction") {
      cfg.threshold_fraction = parse_real(key, v);
      if (!(cfg.threshold_fraction > 0.0 && cfg.threshold_fraction <= 1.0))
        throw UsageError("threshold_fraction: must lie in (0, 1]");
    } else if (key == "tau_grid_size") {
      cfg.tau_grid_size = parse_count(key, v);
      if (cfg.tau_grid_size < 1) throw UsageError("tau_grid_size: must be positive");
    } else if (key == "tau_max") {
      cfg.tau_max = parse_real(key, v);
    } else if (key == "max_dim") {
      const auto d = parse_count(key, v);
      if (d < 1 || d > 3) throw UsageError("max_dim: must lie in [1, 3]");
      cfg.max_dim = static_cast<int>(d);
    } else if (key == "max_radius") {
      if (v.empty() || v == "none") {
        cfg.max_radius.reset();
      } else {
        cfg.max_radius = parse_real(key, v);
        if (!(*cfg.max_radius > 0.0)) throw UsageError("max_radius: must be positive");
      }
    } else if (key == "subsample") {
      cfg.subsample = parse_count(key, v);
      if (cfg.subsample < 2) throw UsageError("subsample: need at least 2 points");
    } else if (key == "max_simplices") {
      cfg.max_simplices = parse_count(key, v);
    } else if (key == "optimize_subsample") {
      cfg.optimize_subsample = parse_count(key, v);
      if (cfg.optimize_subsample < 2) throw UsageError("optimize_subsample: need at least 2 points");
    } else if (key == "policy") {
      cfg.policy = parse_policy(v);
    } else if (key == "kinds") {
      cfg.kinds = parse_kinds(v);
    } else if (key == "significance") {
      if (v.empty() || v == "auto") {
        cfg.significance.reset();
      } else {
        cfg.significance = parse_real(key, v);
        if (*cfg.significance < 0.0) throw UsageError("significance: must be non-negative");
      }
    } else if (key == "length_metric") {
      if (v == "count") cfg.length_metric = LengthMetric::Count;
      else if (v == "euclidean") cfg.length_metric = LengthMetric::Euclidean;
      else throw UsageError("length_metric: expected count or euclidean");
    } else if (key == "round_tol") {
      cfg.round_tol = parse_real(key, v);
      if (!(cfg.round_tol > 0.0)) throw UsageError("round_tol: must be positive");
    } else if (key == "residual_tol") {
      cfg.residual_tol = parse_real(key, v);
      if (!(cfg.residual_tol > 0.0)) throw UsageError("residual_tol: must be positive");
    } else if (key == "dump_lp") {
      cfg.dump_lp = detail::parse_bool(key, v);
    } else {
      throw UsageError("unknown setting '" + key + "'");
    }
  }
}

// ---------------------------------------------------------------- synth

inline TimeSeries synthesize(const PipelineConfig& cfg) {
  const bool noisy = cfg.synth_kind == "noisy_sine";
  const double pi = std::numbers::pi;
  const double t_end = cfg.synth_t_end > 0.0 ? cfg.synth_t_end : (noisy ? 8.0 * pi : 60.0 * pi);
  const std::size_t n = cfg.synth_samples;
  const double dt = t_end / static_cast<double>(n - 1);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.synth_sigma > 0.0 ? cfg.synth_sigma : 1.0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    if (noisy) {
      v[i] = std::sin(t) + (cfg.synth_sigma > 0.0 ? noise(rng) : 0.0);
    } else {
      v[i] = 2.0 * std::sin(t) + 1.8 * std::sin(std::sqrt(3.0) * t);
    }
  }
  return TimeSeries(0.0, dt, std::move(v));
}

// ---------------------------------------------------------------- PCA

/// Projection onto the leading three principal components (zero padded
/// below three dimensions). Each axis is signed so that its largest loading
/// is positive.
inline std::vector<std::array<double, 3>> pca3(const LabeledPointCloud& pc) {
  const auto n = static_cast<Eigen::Index>(pc.size());
  const auto d = static_cast<Eigen::Index>(pc.dimension());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) x(i, k) = pc.point(static_cast<std::size_t>(i))[static_cast<std::size_t>(k)];
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / std::max<double>(1.0, static_cast<double>(n - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  std::vector<std::array<double, 3>> out(pc.size(), {0.0, 0.0, 0.0});
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(3, d); ++c) {
    Eigen::VectorXd axis = eig.eigenvectors().col(d - 1 - c);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis[arg] < 0.0) axis = -axis;
    const Eigen::VectorXd proj = x * axis;
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = proj[i];
  }
  return out;
}

// ---------------------------------------------------------------- commands

struct PersistenceRun {
  std::vector<std::size_t> ids;  // filtration vertex -> embedding point
  LabeledPointCloud cloud;
  Filtration filtration;
  ReducedDecomposition decomposition;
  std::vector<PersistencePair> pairs;  // degrees 1..max_dim
};

inline PersistenceRun persistence(const LabeledPointCloud& full, std::size_t k, const PipelineConfig& cfg) {
  PersistenceRun run;
  run.ids = k >= full.size() ? subsample_indices(full.size(), full.size()) : subsample_indices(full.size(), k);
  run.cloud = select_points(full, run.ids);
  RipsConfig rc;
  rc.max_dim = cfg.max_dim;
  rc.max_radius = cfg.max_radius;
  rc.max_simplices = cfg.max_simplices;
  run.filtration = build_rips(run.cloud, rc);
  run.decomposition = reduce(run.filtration, {TrackV::BelowTopDimension});
  for (int dim = 1; dim <= cfg.max_dim && dim < run.filtration.max_dimension(); ++dim) {
    auto pd = diagram(run.decomposition, run.filtration, dim);
    run.pairs.insert(run.pairs.end(), pd.begin(), pd.end());
  }
  return run;
}

inline std::filesystem::path cmd_synth(const PipelineConfig& cfg) {
  const auto path = cfg.out_dir / "series.csv";
  std::ostringstream os;
  io::write_series_csv(os, synthesize(cfg));
  io::write_text(path, os.str());
  return path;
}

inline std::filesystem::path cmd_embed(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("embed needs an input series (input = <csv>)");
  const TimeSeries ts = io::read_series_csv(cfg.input);
  EmbeddingConfig ec;
  ec.threshold_fraction = cfg.threshold_fraction;
  ec.tau_grid_size = cfg.tau_grid_size;
  ec.tau_max = cfg.tau_max;
  const auto path = cfg.out_dir / "embedding.json";
  io::write_json(path, io::embedding_json(embed(ts, ec)));
  return path;
}

inline std::filesystem::path cmd_ph(const PipelineConfig& cfg) {
  const auto emb = io::parse_embedding(io::read_json(cfg.out_dir / "embedding.json"));
  const auto run = persistence(emb.cloud, cfg.subsample, cfg);
  io::json j;
  j["schema"] = io::kSchemaVersion;
  j["points"] = run.ids.size();
  j["max_dim"] = cfg.max_dim;
  j["max_radius"] = cfg.max_radius ? io::json(*cfg.max_radius) : io::json(nullptr);
  j["simplices"] = run.filtration.size();
  j["pairs"] = io::diagram_json(run.pairs, run.filtration, run.ids);
  const auto path = cfg.out_dir / "diagram.json";
  io::write_json(path, j);
  return path;
}

inline std::filesystem::path cmd_optimize(const PipelineConfig& cfg) {
  const auto emb = io::parse_embedding(io::read_json(cfg.out_dir / "embedding.json"));
  const auto run = persistence(emb.cloud, cfg.optimize_subsample, cfg);
  OptimizeOptions opts;
  opts.length_metric = cfg.length_metric;
  opts.solve.round_tol = cfg.round_tol;
  opts.solve.residual_tol = cfg.residual_tol;
  opts.threshold = cfg.significance;

  io::json reps = io::json::array();
  io::json thresholds = io::json::object();
  std::size_t counter = 0;
  for (int dim = 1; dim <= cfg.max_dim; ++dim) {
    std::vector<PersistencePair> pd;
    for (const auto& p : run.pairs)
      if (p.dim == dim) pd.push_back(p);
    const double threshold = cfg.significance ? *cfg.significance : default_threshold(pd);
    thresholds[std::to_string(dim)] = threshold;
    const auto results =
        optimize_all(pd, cfg.policy, cfg.kinds, run.filtration, run.decomposition, run.cloud.labels(), opts);
    for (const auto& r : results) {
      reps.push_back(io::representative_json(r, run.filtration, run.ids, run.cloud.labels()));
      if (cfg.dump_lp) {
        const auto sets = restrict_sets(run.filtration, run.decomposition, r.pair.dim, r.relaxed_birth);
        const auto W = make_weights(r.kind, run.filtration, sets.P, run.cloud.labels(), cfg.length_metric);
        std::ostringstream os;
        write_lp_text(os, to_standard_form(build_lp(sets, r.pair.initial_rep, W, run.filtration)));
        io::write_text(cfg.out_dir / ("lp_" + std::to_string(counter) + "_" + std::string(to_string(r.kind)) + ".lp"),
                       os.str());
      }
      ++counter;
    }
  }
  io::json j;
  j["schema"] = io::kSchemaVersion;
  j["points"] = run.ids.size();
  j["policy"] = describe(cfg.policy);
  j["thresholds"] = thresholds;
  j["representatives"] = reps;
  const auto path = cfg.out_dir / "representatives.json";
  io::write_json(path, j);
  return path;
}

inline std::vector<std::filesystem::path> cmd_export(const PipelineConfig& cfg) {
  std::vector<std::filesystem::path> written;
  const auto dir = cfg.out_dir;
  auto fmt = [](double v) { return io::format_double(v); };

  if (std::filesystem::exists(dir / "diagram.json")) {
    const auto j = io::read_json(dir / "diagram.json");
    std::ostringstream os;
    os << "dim,birth,death\n";
    for (const auto& p : j.at("pairs"))
      os << p.at("dim").get<int>() << ',' << fmt(p.at("birth").get<double>()) << ','
         << (p.at("death").is_null() ? std::string("inf") : fmt(p.at("death").get<double>())) << '\n';
    io::write_text(dir / "diagram.csv", os.str());
    written.push_back(dir / "diagram.csv");
  }

  const auto emb = io::parse_embedding(io::read_json(dir / "embedding.json"));
  {
    const auto proj = pca3(emb.cloud);
    std::ostringstream os;
    os << "pc1,pc2,pc3,label\n";
    for (std::size_t i = 0; i < proj.size(); ++i)
      os << fmt(proj[i][0]) << ',' << fmt(proj[i][1]) << ',' << fmt(proj[i][2]) << ',' << fmt(emb.cloud.label(i)) << '\n';
    io::write_text(dir / "pca.csv", os.str());
    written.push_back(dir / "pca.csv");
  }

  if (std::filesystem::exists(dir / "representatives.json") && !cfg.input.empty()) {
    const TimeSeries ts = io::read_series_csv(cfg.input);
    const auto j = io::read_json(dir / "representatives.json");
    std::size_t counter = 0;
    for (const auto& rep : j.at("representatives")) {
      std::vector<bool> marked(ts.size(), false);
      for (const auto& simplex : rep.at("support"))
        for (const auto& v : simplex) {
          const double label = emb.cloud.label(v.get<std::size_t>());
          const auto k = static_cast<long long>(std::llround((label - ts.t0()) / ts.dt()));
          if (k >= 0 && static_cast<std::size_t>(k) < ts.size()) marked[static_cast<std::size_t>(k)] = true;
        }
      std::ostringstream os;
      os << "t,value,in_support\n";
      for (std::size_t i = 0; i < ts.size(); ++i)
        os << fmt(ts.time(i)) << ',' << fmt(ts[i]) << ',' << (marked[i] ? 1 : 0) << '\n';
      const auto path = dir / ("overlay_" + std::to_string(counter++) + "_" + rep.at("kind").get<std::string>() + ".csv");
      io::write_text(path, os.str());
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace chronocycle
