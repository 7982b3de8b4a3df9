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

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chronocycle/embedding.hpp"
#include "chronocycle/error.hpp"
#include "chronocycle/optimizer.hpp"
#include "chronocycle/reduction.hpp"

namespace chronocycle::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// ---------------------------------------------------------------- CSV series

/// Rows `t,value`; a header row is optional. Sample times must be evenly
/// spaced to within 1e-6 of the step.
inline TimeSeries read_series_csv(std::istream& in) {
  std::vector<double> t;
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("line " + std::to_string(lineno) + ": expected t,value");
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double ta = std::strtod(a.c_str(), &end_a);
    const double vb = std::strtod(b.c_str(), &end_b);
    const bool numeric = !a.empty() && !b.empty() && *end_a == '\0' && *end_b == '\0';
    if (!numeric) {
      if (t.empty() && v.empty() && lineno == 1) continue;  // header
      throw DataError("line " + std::to_string(lineno) + ": not numeric");
    }
    if (!std::isfinite(ta) || !std::isfinite(vb)) throw DataError("line " + std::to_string(lineno) + ": not finite");
    t.push_back(ta);
    v.push_back(vb);
  }
  if (t.size() < 2) throw DataError("series needs at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) throw DataError("sample times must increase");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double expected = t.front() + dt * static_cast<double>(i);
    if (std::abs(t[i] - expected) > 1e-6 * dt) throw DataError("sample times are not evenly spaced");
  }
  return TimeSeries(t.front(), dt, std::move(v));
}

inline TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_series_csv(in);
}

inline void write_series_csv(std::ostream& out, const TimeSeries& ts) {
  out << "t,value\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    out << format_double(ts.time(i)) << ',' << format_double(ts[i]) << '\n';
}

// ---------------------------------------------------------------- JSON files

inline json to_json(const Simplex& s) {
  json a = json::array();
  for (Vertex v : s) a.push_back(v);
  return a;
}

/// Simplex with vertex ids mapped through `ids` (e.g. subsample -> point).
inline json to_json(const Simplex& s, std::span<const std::size_t> ids) {
  json a = json::array();
  for (Vertex v : s) a.push_back(ids.empty() ? std::size_t{v} : ids[v]);
  return a;
}

inline json death_json(double death) { return std::isinf(death) ? json(nullptr) : json(death); }

inline json embedding_json(const Embedding& e) {
  json j;
  j["schema"] = kSchemaVersion;
  j["dimension"] = e.params.dimension;
  j["tau"] = e.params.tau;
  j["spectrum"] = json::array();
  for (const auto& p : e.spectrum.peaks)
    j["spectrum"].push_back({{"frequency", p.frequency}, {"amplitude", p.amplitude}});
  j["orthogonality"] = json::array();
  for (const auto& [tau, score] : e.scan.curve) j["orthogonality"].push_back({tau, score});
  j["points"] = json::array();
  for (std::size_t i = 0; i < e.cloud.size(); ++i) {
    const auto p = e.cloud.point(i);
    j["points"].push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["labels"] = std::vector<double>(e.cloud.labels().begin(), e.cloud.labels().end());
  return j;
}

struct EmbeddingFile {
  EmbeddingParams params;
  LabeledPointCloud cloud;
};

inline EmbeddingFile parse_embedding(const json& j) {
  try {
    if (j.at("schema").get<int>() != kSchemaVersion) throw DataError("unsupported embedding schema");
    EmbeddingFile out;
    out.params.dimension = j.at("dimension").get<int>();
    out.params.tau = j.at("tau").get<double>();
    std::vector<double> coords;
    const auto& pts = j.at("points");
    for (const auto& p : pts) {
      if (p.size() != static_cast<std::size_t>(out.params.dimension))
        throw DataError("embedding point has the wrong dimension");
      for (const auto& x : p) coords.push_back(x.get<double>());
    }
    out.cloud = LabeledPointCloud(static_cast<std::size_t>(out.params.dimension), std::move(coords),
                                  j.at("labels").get<std::vector<double>>());
    return out;
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed embedding file: ") + ex.what());
  }
}

/// Diagram entries; `ids` maps filtration vertex ids to point ids.
inline json diagram_json(std::span<const PersistencePair> pairs, const Filtration& f,
                         std::span<const std::size_t> ids) {
  json arr = json::array();
  for (const auto& p : pairs) {
    json e;
    e["dim"] = p.dim;
    e["birth"] = p.birth;
    e["death"] = death_json(p.death);
    e["birth_simplex"] = to_json(f.simplex(p.birth_simplex), ids);
    e["death_simplex"] = p.death_simplex ? to_json(f.simplex(*p.death_simplex), ids) : json(nullptr);
    json rep = json::array();
    for (const auto& t : p.initial_rep) rep.push_back(to_json(f.simplex(t.index), ids));
    e["representative"] = rep;
    arr.push_back(std::move(e));
  }
  return arr;
}

inline json representative_json(const OptimizedRepresentative& r, const Filtration& f,
                                 std::span<const std::size_t> ids, TimeLabels labels) {
  json e;
  e["pair"] = {{"dim", r.pair.dim}, {"birth", r.pair.birth}, {"death", death_json(r.pair.death)}};
  e["kind"] = std::string(to_string(r.kind));
  e["policy"] = describe(r.policy);
  e["relaxed_birth"] = r.relaxed_birth;
  e["lp_size"] = {{"P", r.p_size}, {"Qhat", r.q_size}, {"pivots", r.solution.pivots}};
  e["objective"] = r.solution.objective;
  e["residual"] = r.solution.residual;
  e["fractional"] = r.solution.fractional;
  e["rounded_is_cycle"] = r.rounded_is_cycle;
  e["dispersion"] = r.dispersion;
  e["weighted_dispersion"] = r.weighted_dispersion ? json(*r.weighted_dispersion) : json(nullptr);
  json support = json::array();
  json coeffs = json::array();
  json trace = json::array();
  for (const auto& t : r.chain) {
    const Simplex& s = f.simplex(t.index);
    support.push_back(to_json(s, ids));
    coeffs.push_back(t.coefficient);
    json times = json::array();
    for (Vertex v : s) times.push_back(labels[v]);
    trace.push_back(std::move(times));
  }
  e["support"] = std::move(support);
  e["coefficients"] = std::move(coeffs);
  e["time_trace"] = std::move(trace);
  return e;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw DataError(path.string() + ": " + ex.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------- config

/// `key = value` lines; `#` starts a comment, `[section]` lines are ignored.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  return parse_config(in);
}

}  // namespace chronocycle::io
