// Copyright (c) 2026, The pdncg Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdncg/errors.hpp"
#include "pdncg/experiment.hpp"

namespace pdncg::cli {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pdncg_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  const std::string s = slurp(p);
  return s.substr(0, s.find('\n'));
}

TEST(Config, ParsesKeyValueText) {
  const KeyValues kv = parse_config_text(
      "# comment\n"
      "\n"
      "  mu =  1e-4   # trailing\n"
      "precond=never\n"
      "out = some dir\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("mu"), "1e-4");
  EXPECT_EQ(kv.at("precond"), "never");
  EXPECT_EQ(kv.at("out"), "some dir");
  EXPECT_THROW(parse_config_text("novalue\n"), ParameterError);
  EXPECT_THROW(parse_config_text(" = 3\n"), ParameterError);
}

TEST(Config, FromKeys) {
  const ExperimentConfig d = ExperimentConfig::from_keys({});
  EXPECT_EQ(d.p, 64u);
  EXPECT_DOUBLE_EQ(d.ratio, 0.25);
  EXPECT_DOUBLE_EQ(d.c, 2.29e-2);
  EXPECT_DOUBLE_EQ(d.mu, 1e-5);

  const ExperimentConfig c = ExperimentConfig::from_keys(
      {{"problem", "l1-analysis-tiny"}, {"n", "12"}, {"precond", "always"}, {"noise_db", "inf"},
       {"seed", "9"}, {"spectrum_mu", "1e-2, 1e-4"}, {"dual_warm", "reinit"}});
  EXPECT_EQ(c.problem, ProblemKind::L1AnalysisTiny);
  EXPECT_EQ(c.n, 12u);
  EXPECT_EQ(c.solver.precond, PrecondPolicy::Always);
  EXPECT_TRUE(std::isinf(c.noise_db));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.solver.seed, 9u);
  EXPECT_EQ(c.spectrum_mu, (std::vector<double>{1e-2, 1e-4}));
  EXPECT_EQ(c.solver.dual_warm, DualWarmStart::Reinitialize);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ExperimentConfig::from_keys({{"bogus", "1"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"ratio", "0"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"ratio", "1.5"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"mu", "abc"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"precond", "sometimes"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"problem", "x"}}), ParameterError);
  EXPECT_THROW(ExperimentConfig::from_keys({{"rho", "-1"}}), ParameterError);
}

TEST(Config, EveryKnownKeyIsAccepted) {
  // Keys take a representative value each; none may be rejected as unknown.
  for (const auto& k : config_keys()) {
    try {
      ExperimentConfig::from_keys({{k, "1"}});
    } catch (const ParameterError& e) {
      EXPECT_EQ(std::string(e.what()).find("unknown key"), std::string::npos) << k;
    }
  }
}

TEST(Overrides, ParsesFlags) {
  const KeyValues kv = parse_overrides({"--mu", "1e-3", "--noise-db=30", "--precond", "never"});
  EXPECT_EQ(kv.at("mu"), "1e-3");
  EXPECT_EQ(kv.at("noise_db"), "30");
  EXPECT_EQ(kv.at("precond"), "never");
  EXPECT_THROW(parse_overrides({"--mu"}), ParameterError);
  EXPECT_THROW(parse_overrides({"mu", "3"}), ParameterError);
}

TEST(Overrides, FlagsWinOverFile) {
  const fs::path d = scratch("overrides");
  {
    std::ofstream f(d / "run.cfg");
    f << "mu = 1e-2\nc = 0.5\n";
  }
  KeyValues kv = read_config_file(d / "run.cfg");
  for (auto& [k, v] : parse_overrides({"--mu", "1e-7"})) kv[k] = v;
  const ExperimentConfig cfg = ExperimentConfig::from_keys(kv);
  EXPECT_DOUBLE_EQ(cfg.mu, 1e-7);
  EXPECT_DOUBLE_EQ(cfg.c, 0.5);
  EXPECT_THROW(read_config_file(d / "missing.cfg"), Error);
}

TEST(Pgm, RoundTripsBothFormats) {
  const fs::path d = scratch("pgm");
  GrayImage img{5, 3, {}};
  for (std::size_t i = 0; i < 15; ++i) img.pixels.push_back(static_cast<double>(i * 17) / 255.0);
  for (bool binary : {true, false}) {
    const fs::path f = d / (binary ? "a.pgm" : "b.pgm");
    write_pgm(f, img, binary);
    EXPECT_EQ(slurp(f).substr(0, 2), binary ? "P5" : "P2");
    const GrayImage back = read_pgm(f);
    EXPECT_EQ(back.width, 5u);
    EXPECT_EQ(back.height, 3u);
    ASSERT_EQ(back.pixels.size(), img.pixels.size());
    for (std::size_t i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(back.pixels[i], img.pixels[i]);
  }
}

TEST(Pgm, ReadsCommentsAndWideMaxval) {
  const fs::path d = scratch("pgm_wide");
  {
    std::ofstream f(d / "w.pgm");
    f << "P2\n# comment\n2 1\n1000\n0 500\n";
  }
  const GrayImage img = read_pgm(d / "w.pgm");
  ASSERT_EQ(img.pixels.size(), 2u);
  EXPECT_DOUBLE_EQ(img.pixels[1], 0.5);
  {
    std::ofstream f(d / "bad.pgm");
    f << "P7\n1 1\n255\n0\n";
  }
  EXPECT_THROW(read_pgm(d / "bad.pgm"), Error);
  EXPECT_THROW(read_pgm(d / "absent.pgm"), Error);
}

ExperimentConfig small_itv(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.p = 16;
  cfg.ratio = 0.5;
  cfg.out = out;
  cfg.seed = 3;
  cfg.solver.seed = 3;
  return cfg;
}

TEST(Experiment, WritesArtifacts) {
  const fs::path d = scratch("artifacts");
  const ExperimentResult r = run_experiment(small_itv(d));
  for (const char* f : {"reconstruction.pgm", "original.pgm", "trace.csv", "summary.csv"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  EXPECT_EQ(first_line(d / "trace.csv"),
            "stage,iteration,c,mu,objective,grad_norm,cg_iterations,step,preconditioned");
  EXPECT_EQ(first_line(d / "summary.csv"), "psnr,snr,outer_iterations,total_cg,converged");
  const GrayImage rec = read_pgm(d / "reconstruction.pgm");
  EXPECT_EQ(rec.width, 16u);
  EXPECT_EQ(rec.height, 16u);
  EXPECT_TRUE(r.summary.converged);
  EXPECT_GT(r.summary.outer_iterations, 0);
}

TEST(Experiment, ZeroNoiseFullSamplingRecovers) {
  ExperimentConfig cfg = small_itv(scratch("full"));
  cfg.ratio = 1.0;
  cfg.noise_db = std::numeric_limits<double>::infinity();
  cfg.c = 1e-4;
  cfg.mu = 1e-6;
  const ExperimentResult r = run_experiment(cfg, false);
  EXPECT_GE(r.summary.psnr, 40.0);
}

TEST(Experiment, SameSeedIsByteIdentical) {
  const fs::path d1 = scratch("det1");
  const fs::path d2 = scratch("det2");
  run_experiment(small_itv(d1));
  run_experiment(small_itv(d2));
  for (const char* f : {"trace.csv", "summary.csv", "reconstruction.pgm"}) {
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
  ExperimentConfig other = small_itv(scratch("det3"));
  other.seed = 4;
  other.solver.seed = 4;
  run_experiment(other);
  EXPECT_NE(slurp(d1 / "summary.csv"), slurp(other.out / "summary.csv"));
}

TEST(Experiment, ImageFileProblem) {
  const fs::path d = scratch("imgfile");
  GrayImage img{16, 16, Vec(256, 0.0)};
  for (std::size_t c = 4; c < 12; ++c) {
    for (std::size_t r = 4; r < 12; ++r) img.pixels[c * 16 + r] = 1.0;
  }
  write_pgm(d / "box.pgm", img);
  ExperimentConfig cfg = small_itv(d / "out");
  cfg.problem = ProblemKind::ItvImageFile;
  cfg.image = (d / "box.pgm").string();
  const ExperimentResult r = run_experiment(cfg, false);
  EXPECT_EQ(r.x.size(), 256u);
  EXPECT_GT(r.summary.psnr, 15.0);
  cfg.image = (d / "nope.pgm").string();
  EXPECT_THROW(run_experiment(cfg, false), Error);
}

TEST(Experiment, TinyAnalysisProblem) {
  ExperimentConfig cfg;
  cfg.problem = ProblemKind::L1AnalysisTiny;
  cfg.n = 16;
  cfg.ratio = 0.75;
  cfg.noise_db = 40.0;
  cfg.c = 1e-3;
  cfg.mu = 1e-6;
  const ExperimentResult r = run_experiment(cfg, false);
  EXPECT_TRUE(r.summary.converged);
  EXPECT_GT(r.summary.snr, 20.0);
}

TEST(Spectrum, IdentityPreconditionerFilesMatch) {
  const fs::path d = scratch("spec_identity");
  ExperimentConfig cfg = small_itv(d);
  cfg.p = 16;
  cfg.spectrum_mu = {1e-3};
  cfg.solver.precond = PrecondPolicy::Never;
  const SpectrumStudyResult r = run_spectrum_study(cfg);
  ASSERT_FALSE(r.systems.empty());
  EXPECT_EQ(slurp(d / "spectrum_mu0.001_bhat.csv"), slurp(d / "spectrum_mu0.001_precond.csv"));
  EXPECT_EQ(slurp(d / "spectrum_mu0.001_bhat.dat"), slurp(d / "spectrum_mu0.001_precond.dat"));
  EXPECT_TRUE(fs::exists(d / "spectral_summary.csv"));
}

TEST(Spectrum, PreconditionedSpectraCluster) {
  ExperimentConfig cfg = small_itv(scratch("spec_pc"));
  cfg.p = 16;
  cfg.spectrum_mu = {1e-5};
  cfg.solver.precond = PrecondPolicy::Always;
  const SpectrumStudyResult r = run_spectrum_study(cfg, false);
  ASSERT_FALSE(r.systems.empty());
  for (const auto& s : r.systems) {
    EXPECT_GT(s.precond.band_fraction(), s.bhat.band_fraction()) << "iteration " << s.iteration;
    EXPECT_LE(s.pcg_iterations, s.cg_iterations) << "iteration " << s.iteration;
    const double iqr_pc = s.precond.quantile(0.75) - s.precond.quantile(0.25);
    const double iqr_b = s.bhat.quantile(0.75) - s.bhat.quantile(0.25);
    EXPECT_LT(iqr_pc, iqr_b) << "iteration " << s.iteration;
  }
}

TEST(Spectrum, RefusesLargeProblems) {
  ExperimentConfig cfg;
  cfg.p = 128;
  EXPECT_THROW(run_spectrum_study(cfg, false), TooLargeError);
}

TEST(Sweep, RunsEachValue) {
  const fs::path d = scratch("sweep");
  ExperimentConfig cfg = small_itv(d);
  cfg.p = 16;
  cfg.sweep_key = "mu";
  cfg.sweep_values = {"1e-3", "1e-4"};
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(first_line(d / "sweep.csv"), "mu,psnr,snr,outer_iterations,total_cg,converged");
  EXPECT_TRUE(fs::exists(d / "run_0" / "summary.csv"));
  EXPECT_TRUE(fs::exists(d / "run_1" / "summary.csv"));
  cfg.sweep_key = "nonsense";
  EXPECT_THROW(run_sweep(cfg, false), ParameterError);
}

}  // namespace
}  // namespace pdncg::cli
