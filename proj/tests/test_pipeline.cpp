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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "chronocycle/pipeline.hpp"

namespace cc = chronocycle;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chronocycle_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(CHRONOCYCLE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  std::istringstream in(
      "# comment\n[persistence]\nmax_dim = 2   # trailing\nmax_radius=4.5\n\npolicy = \"fraction:0.9\"\n");
  const auto kv = cc::io::parse_config(in);
  cc::PipelineConfig cfg;
  cc::apply_settings(cfg, kv);
  EXPECT_EQ(cfg.max_dim, 2);
  ASSERT_TRUE(cfg.max_radius.has_value());
  EXPECT_EQ(*cfg.max_radius, 4.5);
  ASSERT_TRUE(std::holds_alternative<cc::relax::Fraction>(cfg.policy));
  EXPECT_EQ(std::get<cc::relax::Fraction>(cfg.policy).rho, 0.9);
}

TEST(Config, RejectsBadValues) {
  auto apply = [](std::string key, std::string value) {
    cc::PipelineConfig cfg;
    cc::apply_settings(cfg, {{key, value}});
  };
  EXPECT_THROW(apply("max_dim", "0"), cc::UsageError);
  EXPECT_THROW(apply("max_dim", "4"), cc::UsageError);
  EXPECT_THROW(apply("max_radius", "-1"), cc::UsageError);
  EXPECT_THROW(apply("threshold_fraction", "1.5"), cc::UsageError);
  EXPECT_THROW(apply("subsample", "1"), cc::UsageError);
  EXPECT_THROW(apply("subsample", "ten"), cc::UsageError);
  EXPECT_THROW(apply("policy", "fraction:0"), cc::UsageError);
  EXPECT_THROW(apply("policy", "absolute:-2"), cc::UsageError);
  EXPECT_THROW(apply("policy", "half"), cc::UsageError);
  EXPECT_THROW(apply("kinds", "vertex,banana"), cc::UsageError);
  EXPECT_THROW(apply("synth_kind", "square"), cc::UsageError);
  EXPECT_THROW(apply("dump_lp", "maybe"), cc::UsageError);
  EXPECT_THROW(apply("no_such_key", "1"), cc::UsageError);
  std::istringstream bad("just a line\n");
  EXPECT_THROW(cc::io::parse_config(bad), cc::UsageError);
}

TEST(Config, PolicyAndKinds) {
  EXPECT_TRUE(std::holds_alternative<cc::relax::Full>(cc::parse_policy("full")));
  EXPECT_EQ(std::get<cc::relax::AbsoluteBound>(cc::parse_policy("absolute:0.25")).epsilon, 0.25);
  const auto kinds = cc::parse_kinds(" length , vertex");
  ASSERT_EQ(kinds.size(), 2u);
  EXPECT_EQ(kinds[0], cc::WeightKind::Length);
  EXPECT_EQ(kinds[1], cc::WeightKind::VertexBased);
}

TEST(SeriesCsv, RoundTripsExactly) {
  cc::PipelineConfig cfg;
  cfg.synth_samples = 50;
  cfg.seed = 9;
  const auto ts = cc::synthesize(cfg);
  std::stringstream ss;
  cc::io::write_series_csv(ss, ts);
  EXPECT_EQ(ss.str().substr(0, 8), "t,value\n");
  const auto back = cc::io::read_series_csv(ss);
  ASSERT_EQ(back.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(back[i], ts[i]);
  EXPECT_EQ(back.dt(), ts.dt());
}

TEST(SeriesCsv, HeaderIsOptionalAndSpacingIsChecked) {
  std::istringstream plain("0,1\n0.5,2\n1.0,3\n");
  EXPECT_EQ(cc::io::read_series_csv(plain).size(), 3u);
  std::istringstream uneven("t,value\n0,1\n0.5,2\n1.5,3\n");
  EXPECT_THROW(cc::io::read_series_csv(uneven), cc::DataError);
  std::istringstream junk("t,value\n0,1\nx,2\n");
  EXPECT_THROW(cc::io::read_series_csv(junk), cc::DataError);
  std::istringstream one("0,1\n");
  EXPECT_THROW(cc::io::read_series_csv(one), cc::DataError);
}

TEST(Synth, DefaultsAndDeterminism) {
  cc::PipelineConfig cfg;
  cfg.synth_kind = "double_sine";
  const auto ds = cc::synthesize(cfg);
  EXPECT_EQ(ds.size(), 1000u);
  EXPECT_NEAR(ds.t_end(), 60.0 * std::numbers::pi, 1e-9);

  cc::PipelineConfig clean;
  clean.synth_sigma = 0.0;
  const auto pure = cc::synthesize(clean);
  for (std::size_t i = 0; i < pure.size(); ++i) EXPECT_EQ(pure[i], std::sin(pure.time(i)));

  cc::PipelineConfig a;
  a.seed = 5;
  cc::PipelineConfig b = a;
  cc::PipelineConfig c = a;
  c.seed = 6;
  EXPECT_EQ(cc::synthesize(a).values()[17], cc::synthesize(b).values()[17]);
  EXPECT_NE(cc::synthesize(a).values()[17], cc::synthesize(c).values()[17]);
}

TEST(Pca, ProjectsOntoLeadingAxes) {
  // Points spread along x, then y, barely along z.
  std::vector<double> coords;
  std::vector<double> labels;
  for (int i = 0; i < 20; ++i) {
    const double t = i - 9.5;
    coords.insert(coords.end(), {10.0 * t, 3.0 * std::sin(static_cast<double>(i)), 0.01 * (i % 2)});
    labels.push_back(i);
  }
  const auto proj = cc::pca3(cc::LabeledPointCloud(3, coords, labels));
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(std::abs(proj[static_cast<std::size_t>(i)][0]), std::abs(10.0 * (i - 9.5)), 0.5);
}

TEST(Pipeline, EndToEndInProcess) {
  const auto dir = fresh_dir("inproc");
  cc::PipelineConfig cfg;
  cfg.out_dir = dir;
  cfg.seed = 3;
  cfg.synth_samples = 200;
  cc::cmd_synth(cfg);
  cfg.input = dir / "series.csv";
  cc::cmd_embed(cfg);
  cfg.subsample = 80;
  cfg.optimize_subsample = 60;
  cc::cmd_ph(cfg);
  cc::cmd_optimize(cfg);
  const auto written = cc::cmd_export(cfg);

  const auto emb = cc::io::read_json(dir / "embedding.json");
  EXPECT_EQ(emb.at("schema"), 1);
  EXPECT_EQ(emb.at("dimension"), 2);
  EXPECT_FALSE(emb.at("orthogonality").empty());
  const auto n_points = emb.at("labels").size();

  const auto diag = cc::io::read_json(dir / "diagram.json");
  EXPECT_EQ(diag.at("points"), 80);
  EXPECT_FALSE(diag.at("pairs").empty());

  const auto reps = cc::io::read_json(dir / "representatives.json");
  EXPECT_EQ(reps.at("schema"), 1);
  EXPECT_EQ(reps.at("policy"), "full");
  ASSERT_GE(reps.at("representatives").size(), 3u);
  for (const auto& r : reps.at("representatives")) {
    for (const auto& s : r.at("support"))
      for (const auto& v : s) EXPECT_LT(v.get<std::size_t>(), n_points);
    EXPECT_EQ(r.at("support").size(), r.at("coefficients").size());
    EXPECT_EQ(r.at("support").size(), r.at("time_trace").size());
  }

  EXPECT_EQ(slurp(dir / "diagram.csv").substr(0, 16), "dim,birth,death\n");
  EXPECT_EQ(slurp(dir / "pca.csv").substr(0, 18), "pc1,pc2,pc3,label\n");
  const auto overlay = slurp(dir / "overlay_0_vertex.csv");
  EXPECT_EQ(overlay.substr(0, 18), "t,value,in_support");
  EXPECT_NE(overlay.find(",1\n"), std::string::npos);
  EXPECT_GE(written.size(), 5u);
}

TEST(Pipeline, OptimizeCanDumpLps) {
  const auto dir = fresh_dir("dump");
  cc::PipelineConfig cfg;
  cfg.out_dir = dir;
  cfg.synth_samples = 120;
  cc::cmd_synth(cfg);
  cfg.input = dir / "series.csv";
  cc::cmd_embed(cfg);
  cfg.optimize_subsample = 40;
  cfg.kinds = {cc::WeightKind::Length};
  cfg.dump_lp = true;
  cc::cmd_optimize(cfg);
  EXPECT_TRUE(fs::exists(dir / "lp_0_length.lp"));
  EXPECT_NE(slurp(dir / "lp_0_length.lp").find("Subject To"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto dir = fresh_dir("cli");
  const std::string out = " --out-dir " + dir.string();
  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("frobnicate"), 1);
  EXPECT_EQ(cli("embed" + out), 1);
  EXPECT_EQ(cli("synth noisy_sine --set bogus=1" + out), 1);
  EXPECT_EQ(cli("synth noisy_sine --set max_dim=9" + out), 1);
  EXPECT_EQ(cli("synth noisy_sine --config " + (dir / "missing.toml").string() + out), 1);
  EXPECT_EQ(cli("--help"), 0);

  cc::io::write_text(dir / "flat.csv", "t,value\n0,1\n1,1\n2,1\n3,1\n4,1\n5,1\n6,1\n7,1\n");
  EXPECT_EQ(cli("embed --input " + (dir / "flat.csv").string() + out), 2);
  EXPECT_EQ(cli("ph" + out), 2);  // no embedding yet
}

TEST(Cli, SynthIsByteIdenticalForAFixedSeed) {
  const auto a = fresh_dir("cli_a");
  const auto b = fresh_dir("cli_b");
  ASSERT_EQ(cli("synth noisy_sine --seed 11 --set synth_samples=300 --out-dir " + a.string()), 0);
  ASSERT_EQ(cli("synth noisy_sine --seed 11 --set synth_samples=300 --out-dir " + b.string()), 0);
  EXPECT_EQ(slurp(a / "series.csv"), slurp(b / "series.csv"));
  ASSERT_EQ(cli("synth double_sine --out-dir " + a.string()), 0);
  EXPECT_EQ(cc::io::read_series_csv(a / "series.csv").size(), 1000u);
}

TEST(Cli, ConfigFileFeedsEveryCommand) {
  const auto dir = fresh_dir("cli_cfg");
  cc::io::write_text(dir / "run.toml",
                     "[synth]\nsynth_samples = 150\nseed = 2\n[persistence]\nsubsample = 50\n"
                     "optimize_subsample = 40\nkinds = vertex\nout_dir = " +
                         dir.string() + "\ninput = " + (dir / "series.csv").string() + "\n");
  const std::string cfg = " --config " + (dir / "run.toml").string();
  ASSERT_EQ(cli("synth" + cfg), 0);
  ASSERT_EQ(cli("embed" + cfg), 0);
  ASSERT_EQ(cli("ph" + cfg), 0);
  ASSERT_EQ(cli("optimize" + cfg), 0);
  ASSERT_EQ(cli("export" + cfg), 0);
  const auto reps = cc::io::read_json(dir / "representatives.json");
  for (const auto& r : reps.at("representatives")) EXPECT_EQ(r.at("kind"), "vertex");
  EXPECT_TRUE(fs::exists(dir / "overlay_0_vertex.csv"));
}
