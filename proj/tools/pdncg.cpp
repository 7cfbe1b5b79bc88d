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

#include <cstdio>
#include <algorithm>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdncg/errors.hpp"
#include "pdncg/experiment.hpp"

namespace {

using pdncg::cli::KeyValues;

struct Common {
  std::string config;
  std::string seed;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value configuration file");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "output directory");
  sub->allow_extras();
}

pdncg::cli::ExperimentConfig load(const Common& c, const std::vector<std::string>& extras) {
  KeyValues kv;
  if (!c.config.empty()) kv = pdncg::cli::read_config_file(c.config);
  for (auto& [k, v] : pdncg::cli::parse_overrides(extras)) kv[k] = v;
  if (!c.seed.empty()) kv["seed"] = c.seed;
  if (!c.out.empty()) kv["out"] = c.out;
  return pdncg::cli::ExperimentConfig::from_keys(kv);
}

void print_summary(const pdncg::cli::RunSummary& s) {
  std::printf("psnr %.4f  snr %.4f  outer %d  cg %d  converged %d\n", s.psnr, s.snr,
              s.outer_iterations, s.total_cg, s.converged ? 1 : 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdNCG compressed-sensing reconstruction"};
  app.require_subcommand(1);
  Common common;
  auto* solve = app.add_subcommand("solve", "reconstruct one problem");
  auto* spectrum = app.add_subcommand("spectrum", "dense spectra of every Newton system");
  auto* sweep = app.add_subcommand("sweep", "repeat solve over sweep_values of sweep_key");
  auto* ablation = app.add_subcommand("ablation", "continuation x preconditioning comparison");
  for (auto* s : {solve, spectrum, sweep, ablation}) add_common(s, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CLI::App* used = app.get_subcommands().front();
    const auto cfg = load(common, used->remaining());
    if (used == solve) {
      print_summary(pdncg::cli::run_experiment(cfg).summary);
    } else if (used == spectrum) {
      const auto r = pdncg::cli::run_spectrum_study(cfg);
      for (const auto& s : r.systems) {
        std::printf("mu %.3g  iter %d  band %.3f -> %.3f  cg %d  pcg %d\n", s.mu, s.iteration,
                    s.bhat.band_fraction(), s.precond.band_fraction(), s.cg_iterations,
                    s.pcg_iterations);
      }
    } else if (used == sweep) {
      for (const auto& row : pdncg::cli::run_sweep(cfg)) {
        std::printf("%s = %s  ", cfg.sweep_key.c_str(), row.value.c_str());
        print_summary(row.summary);
      }
    } else {
      for (const auto& row : pdncg::cli::run_ablation(cfg)) {
        std::printf("%-22s reached %d  cg %d  outer %d  final error %.3e\n", row.setting.c_str(),
                    row.reached ? 1 : 0, row.cg_to_target, row.outer_to_target, row.final_error);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pdncg: %s\n", e.what());
    return 1;
  }
  return 0;
}
