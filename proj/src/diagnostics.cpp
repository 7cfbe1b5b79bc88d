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

#include "pdncg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"
#include "pdncg/smoothing.hpp"

namespace pdncg {

double SpectralReport::band_fraction(double lo, double hi) const {
  if (eigenvalues.empty()) return 0.0;
  std::size_t in = 0;
  for (double v : eigenvalues) in += (v >= lo && v <= hi) ? 1 : 0;
  return static_cast<double>(in) / static_cast<double>(eigenvalues.size());
}

double SpectralReport::quantile(double q) const {
  if (eigenvalues.empty()) return 0.0;
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * static_cast<double>(eigenvalues.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, eigenvalues.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return (1.0 - t) * eigenvalues[lo] + t * eigenvalues[hi];
}

Eigen::MatrixXd densify(const OperatorFn& op, std::size_t n) {
  if (n > kMaxDenseSize) throw TooLargeError("densify: n exceeds the dense limit");
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(ni, ni);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = op(e);
    require_size(col.size(), n, "densify: operator output");
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    e[j] = 0.0;
  }
  return 0.5 * (m + m.transpose());
}

namespace {

Vec sorted_eigs(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigenvalue decomposition did not converge");
  Vec v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

SpectralReport densify_and_eig(const OperatorFn& op, std::size_t n) {
  SpectralReport r;
  r.eigenvalues = sorted_eigs(densify(op, n));
  return r;
}

SpectralReport preconditioned_spectrum(const OperatorFn& op, const Preconditioner& pc) {
  const std::size_t n = pc.size();
  const OperatorFn sim = [&](std::span<const double> v) {
    return pc.apply_linv(op(pc.apply_linvt(v)));
  };
  SpectralReport r;
  r.eigenvalues = sorted_eigs(densify(sim, n));
  r.preconditioned = pc.kind() != PreconditionerKind::Identity;
  return r;
}

Vec generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("generalized eigenproblem failed");
  Vec v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

double psnr(std::span<const double> reference, std::span<const double> candidate, double peak) {
  require_size(candidate.size(), reference.size(), "psnr");
  if (reference.empty()) throw DimensionError("psnr: empty image");
  if (!(peak > 0.0)) throw ParameterError("psnr: peak must be positive");
  double sse = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = candidate[i] - reference[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(reference.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double snr(std::span<const double> reference, std::span<const double> candidate) {
  require_size(candidate.size(), reference.size(), "snr");
  double err = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = candidate[i] - reference[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(kernels::norm2(reference) / std::sqrt(err));
}

Vec add_noise_to_target(std::span<const double> clean, double target_db, std::mt19937_64& rng) {
  Vec out(clean.begin(), clean.end());
  if (std::isinf(target_db) && target_db > 0.0) return out;
  if (!std::isfinite(target_db)) throw ParameterError("add_noise_to_target: target must be finite");
  const double cn = kernels::norm2(clean);
  if (cn == 0.0) throw ParameterError("add_noise_to_target: signal is zero, ratio undefined");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec noise(clean.size());
  double nn = 0.0;
  while (nn == 0.0) {
    for (double& v : noise) v = gauss(rng);
    nn = kernels::norm2(noise);
  }
  const double want = cn * std::pow(10.0, -target_db / 20.0);
  kernels::axpy(want / nn, noise, out);
  return out;
}

std::vector<Ellipse> shepp_logan_ellipses() {
  return {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  };
}

Vec rasterize_ellipses(std::size_t p, std::span<const Ellipse> ellipses) {
  if (p == 0) throw ParameterError("rasterize_ellipses: empty image");
  Vec img(p * p, 0.0);
  const double pd = static_cast<double>(p);
  for (const Ellipse& e : ellipses) {
    const double th = e.phi * std::numbers::pi / 180.0;
    const double ct = std::cos(th);
    const double st = std::sin(th);
    for (std::size_t col = 0; col < p; ++col) {
      // Integer numerators keep mirrored pixel centres exact negatives.
      const double x = (2.0 * static_cast<double>(col) + 1.0 - pd) / pd;
      for (std::size_t row = 0; row < p; ++row) {
        const double y = (pd - 2.0 * static_cast<double>(row) - 1.0) / pd;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double u = dx * ct + dy * st;
        const double v = -dx * st + dy * ct;
        if ((u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) <= 1.0) img[col * p + row] += e.intensity;
      }
    }
  }
  for (double& v : img) v = std::clamp(v, 0.0, 1.0);
  return img;
}

Vec shepp_logan(std::size_t p) {
  if (p < 16) throw ParameterError("shepp_logan: side must be at least 16");
  const auto el = shepp_logan_ellipses();
  return rasterize_ellipses(p, el);
}

BoundCheck check_cluster_bound(const LinearMap& a, const Dictionary& w, std::span<const double> x,
                               double c, double mu, double nu, double rho) {
  const std::size_t n = w.signal_size();
  const std::size_t l = w.analysis_size();
  if (n > 64) throw TooLargeError("check_cluster_bound: n too large");
  const HuberScalings s = huber_scalings(w, x, mu);

  BoundCheck out;
  std::vector<std::size_t> off;  // B_nu^c
  for (std::size_t i = 0; i < l; ++i) {
    if (s.d[i] < nu) {
      ++out.sigma;
    } else {
      off.push_back(i);
    }
  }
  out.delta_sigma = rip_constant_bruteforce(a, w, out.sigma);
  out.delta = row_orthogonality_defect(a);
  out.admissible = out.delta_sigma < 0.5 && rho >= out.delta_sigma && rho <= 0.5;
  out.chi = 1.0 + out.delta - rho;

  // Re(W_S W_S^*) = ReW_S ReW_S^T + ImW_S ImW_S^T; smallest nonzero eigenvalue.
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ni, ni);
  Vec er(l, 0.0), ei(l, 0.0);
  for (std::size_t i : off) {
    er[i] = 1.0;
    const Vec cre = w.synthesize_real(er, ei);
    er[i] = 0.0;
    Vec cim(n, 0.0);
    if (!w.is_real()) {
      ei[i] = 1.0;
      cim = w.synthesize_real(er, ei);
      ei[i] = 0.0;
    }
    const Eigen::Map<const Eigen::VectorXd> vr(cre.data(), ni);
    const Eigen::Map<const Eigen::VectorXd> vi(cim.data(), ni);
    g += vr * vr.transpose() + vi * vi.transpose();
  }
  out.lambda_term = 0.0;
  if (!off.empty()) {
    const Vec ge = sorted_eigs(g);
    const double tol = 1e-10 * std::max(1.0, ge.back());
    for (double v : ge) {
      if (v > tol) {
        out.lambda_term = v;
        break;
      }
    }
  }
  const double r = std::clamp(rho, std::numeric_limits<double>::min(), 0.5);
  out.bound_nonkernel = theorem_bound(out.chi, r, c, mu, nu, out.lambda_term);
  out.bound_kernel = theorem_bound(out.chi, r, c, mu, nu, 0.0);
  const double bound = std::max(out.bound_nonkernel, out.bound_kernel);

  const Eigen::MatrixXd hpsi =
      densify([&](std::span<const double> v) { return huber_hessian_vec(s, w, v); }, n);
  const Eigen::MatrixXd ata =
      densify([&](std::span<const double> v) { return a.adjoint(a.apply(v)); }, n);
  const Eigen::MatrixXd hess = c * hpsi + ata;
  const Eigen::MatrixXd nmat = c * hpsi + rho * Eigen::MatrixXd::Identity(ni, ni);
  out.eigenvalues = generalized_eigenvalues(hess, nmat);
  for (double lam : out.eigenvalues) {
    const double dev = std::abs(lam - 1.0);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > bound * (1.0 + 1e-10)) ++out.violations;
  }
  return out;
}

void write_spectral_csv(std::ostream& os, std::span<const SpectralReport> reports) {
  os << "stage,iteration,preconditioned,n,min,max,band_fraction\n";
  os.precision(12);
  for (const auto& r : reports) {
    os << r.stage << ',' << r.iteration << ',' << (r.preconditioned ? 1 : 0) << ','
       << r.eigenvalues.size() << ',' << r.min() << ',' << r.max() << ',' << r.band_fraction()
       << '\n';
  }
}

void write_eigenvalue_csv(std::ostream& os, std::span<const SpectralReport> reports) {
  os << "stage,iteration,index,eigenvalue\n";
  os.precision(15);
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      os << r.stage << ',' << r.iteration << ',' << i << ',' << r.eigenvalues[i] << '\n';
    }
  }
}

}  // namespace pdncg
