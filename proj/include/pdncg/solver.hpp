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

// PCG inner solver, Armijo backtracking, the pdNCG outer loop and the (c, mu)
// continuation driver.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/pdsystem.hpp"
#include "pdncg/preconditioner.hpp"
#include "pdncg/vector.hpp"

namespace pdncg {

enum class PrecondPolicy { Never, Always, Late };
enum class DualWarmStart { Carry, Reinitialize };

struct SolverConfig {
  double eta = 0.1;
  double tau1 = 0.9;
  double tau2 = 1e-3;
  int max_backtracks = 10;
  int max_outer = 500;
  int max_cg = 200;
  double rho = 0.5;
  double precond_activation_mu = 1e-4;
  PrecondPolicy precond = PrecondPolicy::Late;
  // Stop when ||grad f|| <= tol * max(1, ||A^T b||).
  double tol = 1e-6;
  // Same rule for the intermediate continuation stages.
  double stage_tol = 1e-3;
  DualWarmStart dual_warm = DualWarmStart::Carry;
  std::uint64_t seed = 0;

  // Throws ParameterError on any out-of-range field.
  void validate() const;
};

using OperatorFn = std::function<Vec(std::span<const double>)>;
using ObjectiveFn = std::function<double(std::span<const double>)>;

struct PcgResult {
  Vec dx;
  int iterations = 0;
  // ||op(dx) - rhs|| / ||rhs|| (zero when rhs = 0).
  double residual = 0.0;
  bool converged = false;
};

// Conjugate gradients from dx = 0 until ||op(dx) - rhs|| <= eta ||rhs|| on the
// true residual, or max_cg iterations.
PcgResult pcg(const OperatorFn& op, std::span<const double> rhs, const Preconditioner& pc,
              double eta, int max_cg);

struct LineSearchResult {
  double alpha = 0.0;
  int backtracks = 0;
  // False when no j <= max_backtracks passed, or dx was not a descent direction.
  bool sufficient = false;
  bool descent = true;
  double value = 0.0;  // f(x + alpha dx)
};

LineSearchResult line_search(const ObjectiveFn& f, std::span<const double> grad,
                             std::span<const double> x, std::span<const double> dx, double tau1,
                             double tau2, int max_backtracks);
// Same, with f(x) already known.
LineSearchResult line_search(const ObjectiveFn& f, double fx, std::span<const double> grad,
                             std::span<const double> x, std::span<const double> dx, double tau1,
                             double tau2, int max_backtracks);

struct TraceEntry {
  int stage = 0;
  int iteration = 0;
  double c = 0.0;
  double mu = 0.0;
  double objective = 0.0;
  double grad_norm = 0.0;
  int cg_iterations = 0;
  double step = 0.0;
  double dual_inf_norm = 0.0;
  bool preconditioned = false;
  bool cg_converged = true;
  bool sufficient_decrease = true;
};

struct SolveHooks {
  // Called after every outer iteration; returning true stops the solve.
  std::function<bool(const TraceEntry&, const Iterate&)> observer;
  // Called with every Newton system, its preconditioner and the right-hand
  // side -grad f before PCG runs on it.
  std::function<void(const NewtonSystem&, const Preconditioner&, const TraceEntry&,
                     std::span<const double>)>
      on_system;
};

struct PdncgResult {
  Iterate iterate;
  std::vector<TraceEntry> trace;
  bool converged = false;
  bool stopped_by_observer = false;
  int total_cg = 0;
};

// One pdNCG solve at fixed (c, mu). `use_precond` selects make_preconditioner
// over the identity. `stage` only labels trace rows.
PdncgResult pdncg(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                  double mu, const SolverConfig& config, const Iterate& warm_start,
                  bool use_precond, const SolveHooks& hooks = {}, int stage = 0,
                  std::optional<double> tol = std::nullopt);

int compute_theta(double c_final, double mu_final);

struct ContinuationSchedule {
  std::vector<double> c;
  std::vector<double> mu;
  std::size_t size() const { return c.size(); }
};

ContinuationSchedule make_schedule(double c_final, double mu_final);

struct StageResult {
  double c = 0.0;
  double mu = 0.0;
  bool preconditioned = false;
  PdncgResult result;
};

struct ContinuationResult {
  Iterate iterate;
  std::vector<StageResult> stages;
  bool stopped_by_observer = false;
  int total_cg() const;
  int total_outer() const;
};

// Runs the schedule, each stage warm-started from the previous one. Errors
// from a stage are rethrown with the stage index in the message.
ContinuationResult continuation(const LinearMap& a, const Dictionary& w, std::span<const double> b,
                                double c_final, double mu_final, const SolverConfig& config,
                                const SolveHooks& hooks = {});

// Single stage at (c, mu) without continuation, preconditioned per policy.
ContinuationResult direct_solve(const LinearMap& a, const Dictionary& w, std::span<const double> b,
                                double c, double mu, const SolverConfig& config,
                                const SolveHooks& hooks = {});

}  // namespace pdncg
