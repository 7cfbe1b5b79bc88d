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

#include "pdncg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"
#include "pdncg/smoothing.hpp"

namespace pdncg {

void SolverConfig::validate() const {
  if (!(eta >= 0.0 && eta < 1.0)) throw ParameterError("eta must lie in [0, 1)");
  if (!(tau1 > 0.0 && tau1 < 1.0)) throw ParameterError("tau1 must lie in (0, 1)");
  if (!(tau2 > 0.0 && tau2 < 0.5)) throw ParameterError("tau2 must lie in (0, 1/2)");
  if (max_backtracks < 0) throw ParameterError("max_backtracks must be nonnegative");
  if (max_outer < 0) throw ParameterError("max_outer must be nonnegative");
  if (max_cg < 1) throw ParameterError("max_cg must be positive");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (!(precond_activation_mu > 0.0)) throw ParameterError("precond_activation_mu must be positive");
  if (!(tol >= 0.0)) throw ParameterError("tol must be nonnegative");
  if (!(stage_tol >= 0.0)) throw ParameterError("stage_tol must be nonnegative");
}

PcgResult pcg(const OperatorFn& op, std::span<const double> rhs, const Preconditioner& pc,
              double eta, int max_cg) {
  const std::size_t n = rhs.size();
  PcgResult res;
  res.dx.assign(n, 0.0);
  const double bn = kernels::norm2(rhs);
  if (bn == 0.0) {
    res.converged = true;
    return res;
  }
  const double target = eta * bn;
  Vec r(rhs.begin(), rhs.end());
  Vec z = pc.solve(r);
  Vec p = z;
  double rz = kernels::dot(r, z);
  double rn = bn;

  auto true_residual = [&]() {
    Vec t = op(res.dx);
    for (std::size_t i = 0; i < n; ++i) t[i] = rhs[i] - t[i];
    return t;
  };

  for (int it = 1; it <= max_cg; ++it) {
    const Vec q = op(p);
    const double pq = kernels::dot(p, q);
    if (!(pq > 0.0)) {
      throw DefinitenessError("pcg: nonpositive curvature <p, Bp> = " + std::to_string(pq));
    }
    const double alpha = rz / pq;
    kernels::axpy(alpha, p, res.dx);
    kernels::axpy(-alpha, q, r);
    res.iterations = it;
    if (it % 25 == 0) r = true_residual();
    rn = kernels::norm2(r);
    if (rn <= target) {
      if (it % 25 != 0) {
        r = true_residual();
        rn = kernels::norm2(r);
      }
      if (rn <= target) {
        res.converged = true;
        break;
      }
    }
    z = pc.solve(r);
    const double rz_new = kernels::dot(r, z);
    kernels::xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  if (!res.converged) rn = kernels::norm2(true_residual());
  res.residual = rn / bn;
  return res;
}

LineSearchResult line_search(const ObjectiveFn& f, std::span<const double> grad,
                             std::span<const double> x, std::span<const double> dx, double tau1,
                             double tau2, int max_backtracks) {
  return line_search(f, f(x), grad, x, dx, tau1, tau2, max_backtracks);
}

LineSearchResult line_search(const ObjectiveFn& f, double fx, std::span<const double> grad,
                             std::span<const double> x, std::span<const double> dx, double tau1,
                             double tau2, int max_backtracks) {
  require_size(grad.size(), x.size(), "line_search gradient");
  require_size(dx.size(), x.size(), "line_search direction");
  LineSearchResult res;
  const double slope = kernels::dot(grad, dx);
  if (!(slope < 0.0)) {
    res.descent = false;
    res.value = fx;
    return res;
  }
  Vec trial(x.size());
  double alpha = 1.0;
  for (int j = 0; j <= max_backtracks; ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * dx[i];
    const double ft = f(trial);
    res.alpha = alpha;
    res.backtracks = j;
    res.value = ft;
    if (ft <= fx + tau2 * alpha * slope) {
      res.sufficient = true;
      return res;
    }
    if (j < max_backtracks) alpha *= tau1;
  }
  return res;
}

PdncgResult pdncg(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                  double mu, const SolverConfig& config, const Iterate& warm_start,
                  bool use_precond, const SolveHooks& hooks, int stage,
                  std::optional<double> tol) {
  config.validate();
  const std::size_t n = w.signal_size();
  const std::size_t l = w.analysis_size();
  require_size(warm_start.x.size(), n, "pdncg warm start x");
  require_size(warm_start.g_re.size(), l, "pdncg warm start g_re");
  if (!w.is_real()) require_size(warm_start.g_im.size(), l, "pdncg warm start g_im");
  if (warm_start.dual_inf_norm() > 1.0 + 1e-12) {
    throw ParameterError("pdncg: warm-start duals violate |g_i| <= 1");
  }
  const SmoothedObjective obj(a, w, b, c, mu);
  const double scale = std::max(1.0, kernels::norm2(a.adjoint(b)));
  const double stop = tol.value_or(config.tol) * scale;
  const ObjectiveFn fval = [&obj](std::span<const double> v) { return obj.value(v); };

  PdncgResult out;
  out.iterate = warm_start;
  if (w.is_real()) out.iterate.g_im.assign(l, 0.0);
  Iterate& it = out.iterate;

  Vec grad;
  double f = obj.value_and_gradient(it.x, grad);
  for (int k = 0; k < config.max_outer; ++k) {
    if (!std::isfinite(f)) throw DivergenceError("pdncg: objective is not finite");
    if (kernels::norm2(grad) <= stop) {
      out.converged = true;
      break;
    }
    const HuberScalings s = huber_scalings(w, it.x, mu);
    const DualCouplings cpl = dual_couplings(s, w, it);
    const NewtonSystem sys(a, w, s, cpl, c);
    const Preconditioner pc = use_precond ? make_preconditioner(sys, config.rho)
                                          : Preconditioner::identity(n);

    TraceEntry e;
    e.stage = stage;
    e.iteration = k;
    e.c = c;
    e.mu = mu;
    e.preconditioned = use_precond && pc.kind() != PreconditionerKind::Identity;
    Vec rhs(grad);
    for (double& v : rhs) v = -v;
    if (hooks.on_system) hooks.on_system(sys, pc, e, rhs);
    const PcgResult cg = pcg([&sys](std::span<const double> v) { return sys.apply(v); }, rhs, pc,
                             config.eta, config.max_cg);

    const ComplexVec dg = dual_step(cpl, s, w, it, cg.dx);
    kernels::axpy(1.0, dg.re, it.g_re);
    if (!w.is_real()) kernels::axpy(1.0, dg.im, it.g_im);
    project_linf_inplace(it.g_re, w.is_real() ? std::span<double>() : std::span<double>(it.g_im));

    LineSearchResult ls = line_search(fval, f, grad, it.x, cg.dx, config.tau1, config.tau2,
                                      config.max_backtracks);
    const Vec* dir = &cg.dx;
    if (!ls.descent) {
      // An inexact CG step can fail to descend; fall back to steepest descent.
      dir = &rhs;
      ls = line_search(fval, f, grad, it.x, rhs, config.tau1, config.tau2, config.max_backtracks);
    }
    if (ls.descent && ls.value <= f) {
      kernels::axpy(ls.alpha, *dir, it.x);
      f = obj.value_and_gradient(it.x, grad);
    } else {
      ls.alpha = 0.0;
    }

    e.objective = f;
    e.grad_norm = kernels::norm2(grad);
    e.cg_iterations = cg.iterations;
    e.cg_converged = cg.converged;
    e.step = ls.alpha;
    e.sufficient_decrease = ls.sufficient;
    e.dual_inf_norm = it.dual_inf_norm();
    out.total_cg += cg.iterations;
    out.trace.push_back(e);
    if (!std::isfinite(f)) throw DivergenceError("pdncg: objective is not finite");
    if (hooks.observer && hooks.observer(e, it)) {
      out.stopped_by_observer = true;
      break;
    }
  }
  if (!out.converged && !out.stopped_by_observer && kernels::norm2(grad) <= stop) {
    out.converged = true;
  }
  return out;
}

int compute_theta(double c_final, double mu_final) {
  if (!(c_final > 0.0 && c_final <= 1.0) || !(mu_final > 0.0 && mu_final <= 1.0)) {
    throw ParameterError("compute_theta: targets must lie in (0, 1]");
  }
  // The slack keeps exact powers of ten from rounding up.
  auto order = [](double v) { return static_cast<int>(std::ceil(-std::log10(v) - 1e-9)); };
  return std::max(order(c_final), order(mu_final));
}

ContinuationSchedule make_schedule(double c_final, double mu_final) {
  const int theta = compute_theta(c_final, mu_final);
  ContinuationSchedule s;
  if (theta < 2) {
    s.c.push_back(c_final);
    s.mu.push_back(mu_final);
    return s;
  }
  const double lc0 = std::log10(0.1);
  const double lc = std::log10(c_final);
  const double lm = std::log10(mu_final);
  for (int j = 0; j <= theta; ++j) {
    const double t = static_cast<double>(j) / theta;
    s.c.push_back(std::pow(10.0, lc0 + t * (lc - lc0)));
    s.mu.push_back(std::pow(10.0, lc0 + t * (lm - lc0)));
  }
  s.c.front() = 0.1;
  s.mu.front() = 0.1;
  s.c.back() = c_final;
  s.mu.back() = mu_final;
  return s;
}

int ContinuationResult::total_cg() const {
  int t = 0;
  for (const auto& s : stages) t += s.result.total_cg;
  return t;
}

int ContinuationResult::total_outer() const {
  int t = 0;
  for (const auto& s : stages) t += static_cast<int>(s.result.trace.size());
  return t;
}

namespace {

bool stage_preconditioned(const SolverConfig& config, double mu) {
  switch (config.precond) {
    case PrecondPolicy::Never:
      return false;
    case PrecondPolicy::Always:
      return true;
    case PrecondPolicy::Late:
      return mu <= config.precond_activation_mu;
  }
  return false;
}

ContinuationResult run_stages(const LinearMap& a, const Dictionary& w, std::span<const double> b,
                              const ContinuationSchedule& sched, const SolverConfig& config,
                              const SolveHooks& hooks) {
  ContinuationResult out;
  out.iterate = Iterate::zeros(w.signal_size(), w.analysis_size());
  for (std::size_t j = 0; j < sched.size(); ++j) {
    const bool last = j + 1 == sched.size();
    StageResult st;
    st.c = sched.c[j];
    st.mu = sched.mu[j];
    st.preconditioned = stage_preconditioned(config, st.mu);
    if (j > 0 && config.dual_warm == DualWarmStart::Reinitialize) {
      const HuberScalings s = huber_scalings(w, out.iterate.x, st.mu);
      for (std::size_t i = 0; i < s.d.size(); ++i) {
        out.iterate.g_re[i] = s.d[i] * s.wx.re[i];
        out.iterate.g_im[i] = w.is_real() ? 0.0 : s.d[i] * s.wx.im[i];
      }
    }
    const std::optional<double> tol =
        last ? std::optional<double>(config.tol) : std::optional<double>(config.stage_tol);
    const std::string where = "stage " + std::to_string(j) + ": ";
    try {
      st.result = pdncg(a, w, b, st.c, st.mu, config, out.iterate, st.preconditioned, hooks,
                        static_cast<int>(j), tol);
    } catch (const FactorizationError& e) {
      throw FactorizationError(where + e.what(), e.block());
    } catch (const DefinitenessError& e) {
      throw DefinitenessError(where + e.what());
    } catch (const DivergenceError& e) {
      throw DivergenceError(where + e.what());
    }
    out.iterate = st.result.iterate;
    const bool stop = st.result.stopped_by_observer;
    out.stages.push_back(std::move(st));
    if (stop) {
      out.stopped_by_observer = true;
      break;
    }
  }
  return out;
}

}  // namespace

ContinuationResult continuation(const LinearMap& a, const Dictionary& w, std::span<const double> b,
                                double c_final, double mu_final, const SolverConfig& config,
                                const SolveHooks& hooks) {
  return run_stages(a, w, b, make_schedule(c_final, mu_final), config, hooks);
}

ContinuationResult direct_solve(const LinearMap& a, const Dictionary& w, std::span<const double> b,
                                double c, double mu, const SolverConfig& config,
                                const SolveHooks& hooks) {
  ContinuationSchedule s;
  s.c.push_back(c);
  s.mu.push_back(mu);
  return run_stages(a, w, b, s, config, hooks);
}

}  // namespace pdncg
