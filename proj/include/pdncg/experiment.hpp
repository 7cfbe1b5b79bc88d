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

#pragma once

// Experiment driver shared by the command-line tool and the acceptance runner.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdncg/diagnostics.hpp"
#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/solver.hpp"

namespace pdncg::cli {

using KeyValues = std::map<std::string, std::string>;

// `key = value` lines; `#` starts a comment; blank lines are skipped.
KeyValues parse_config_text(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& path);
// `--key value` and `--key=value` pairs; dashes in keys become underscores.
KeyValues parse_overrides(const std::vector<std::string>& args);

enum class ProblemKind { ItvPhantom, ItvImageFile, L1AnalysisTiny };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::ItvPhantom;
  std::size_t p = 64;      // image side for itv problems
  std::size_t n = 16;      // signal length for l1-analysis-tiny
  std::size_t sparsity = 3;
  std::string image;       // itv-image-file input
  double ratio = 0.25;     // m / n
  double noise_db = 20.0;  // +inf disables noise
  double c = 2.29e-2;
  double mu = 1e-5;
  bool continuation = true;
  // Stop once PSNR (images) or SNR (signals) reaches this value.
  std::optional<double> target_db;
  SolverConfig solver;
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;

  // spectrum
  std::vector<double> spectrum_mu{1e-3, 1e-5};
  // sweep
  std::string sweep_key = "mu";
  std::vector<std::string> sweep_values;
  // ablation
  double ablation_target = 0.1;
  double reference_tol = 1e-9;

  static ExperimentConfig from_keys(const KeyValues& kv);
};

// Recognised keys, for --key overrides.
const std::vector<std::string>& config_keys();

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  Vec pixels;  // column-major, values in [0, 1]
};

GrayImage read_pgm(const std::filesystem::path& path);
// 8-bit P5 (binary) or P2 (plain); values are clipped to [0, 1].
void write_pgm(const std::filesystem::path& path, const GrayImage& img, bool binary = true);

struct Problem {
  LinearMap a;
  Dictionary w;
  Vec b;
  Vec truth;
  std::size_t side = 0;  // nonzero for image problems
};

Problem build_problem(const ExperimentConfig& cfg);

struct RunSummary {
  double psnr = 0.0;
  double snr = 0.0;
  int outer_iterations = 0;
  int total_cg = 0;
  bool converged = false;
};

struct ExperimentResult {
  ContinuationResult solve;
  RunSummary summary;
  Vec x;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

struct SystemRecord {
  double mu = 0.0;
  int iteration = 0;
  SpectralReport bhat;
  SpectralReport precond;
  int cg_iterations = 0;
  int pcg_iterations = 0;
};

struct SpectrumStudyResult {
  std::vector<SystemRecord> systems;
};

SpectrumStudyResult run_spectrum_study(const ExperimentConfig& cfg, bool write_files = true);

struct SweepRow {
  std::string value;
  RunSummary summary;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool write_files = true);

struct AblationRow {
  std::string setting;
  bool continuation = false;
  bool preconditioning = false;
  bool reached = false;
  int cg_to_target = 0;
  int outer_to_target = 0;
  double final_error = 0.0;
  // Per outer iteration: cumulative CG/PCG iterations and relative error.
  std::vector<std::pair<int, double>> curve;
};

std::vector<AblationRow> run_ablation(const ExperimentConfig& cfg, bool write_files = true);

}  // namespace pdncg::cli
