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

// Desk-scale instruments: dense spectra, image metrics, noise injection, the
// Shepp-Logan phantom and an eigenvalue-bound harness for tiny instances.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/preconditioner.hpp"
#include "pdncg/solver.hpp"
#include "pdncg/vector.hpp"

namespace pdncg {

inline constexpr std::size_t kMaxDenseSize = 4096;

struct SpectralReport {
  Vec eigenvalues;  // ascending
  bool preconditioned = false;
  int iteration = 0;
  int stage = 0;

  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  // Fraction of eigenvalues in [lo, hi].
  double band_fraction(double lo = 0.5, double hi = 2.0) const;
  // Linear-interpolated quantile, q in [0, 1].
  double quantile(double q) const;
};

// Applies `op` to every basis vector and returns the symmetrized matrix.
Eigen::MatrixXd densify(const OperatorFn& op, std::size_t n);

SpectralReport densify_and_eig(const OperatorFn& op, std::size_t n);
// Eigenvalues of L^{-1} op L^{-T} with pc = L L^T, which are those of pc^{-1} op.
SpectralReport preconditioned_spectrum(const OperatorFn& op, const Preconditioner& pc);
// Sorted eigenvalues of the symmetric-definite pencil (a, b).
Vec generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// 10 log10(peak^2 / MSE); +infinity when the images coincide.
double psnr(std::span<const double> reference, std::span<const double> candidate,
            double peak = 1.0);
// 20 log10(||ref|| / ||cand - ref||); +infinity when they coincide.
double snr(std::span<const double> reference, std::span<const double> candidate);

// Clean signal plus Gaussian noise rescaled so that snr(clean, result) equals
// target_db. An infinite target returns the input unchanged.
Vec add_noise_to_target(std::span<const double> clean, double target_db, std::mt19937_64& rng);

struct Ellipse {
  double intensity;
  double a, b;    // semi-axes
  double x0, y0;  // centre in [-1, 1]^2
  double phi;     // rotation, degrees
};

// The ten ellipses of the contrast-enhanced Shepp-Logan head.
std::vector<Ellipse> shepp_logan_ellipses();
// Column-major p x p raster of the summed ellipses, clipped to [0, 1]; row 0
// is the top of the image.
Vec rasterize_ellipses(std::size_t p, std::span<const Ellipse> ellipses);
Vec shepp_logan(std::size_t p);

struct BoundCheck {
  bool admissible = false;  // delta_sigma < 1/2 and rho >= delta_sigma
  std::size_t sigma = 0;
  double delta_sigma = 0.0;
  double delta = 0.0;
  double chi = 0.0;
  double lambda_term = 0.0;
  double bound_nonkernel = 0.0;
  double bound_kernel = 0.0;
  double max_deviation = 0.0;  // max |lambda - 1|
  std::size_t violations = 0;
  Vec eigenvalues;
};

// Generalized eigenvalues of (c H_psi + A^T A, c H_psi + rho I) at x against
// the larger of the two cluster bounds. Needs l <= 14 for the brute force.
BoundCheck check_cluster_bound(const LinearMap& a, const Dictionary& w, std::span<const double> x,
                               double c, double mu, double nu, double rho);

// CSV with header "stage,iteration,preconditioned,n,min,max,band_fraction".
void write_spectral_csv(std::ostream& os, std::span<const SpectralReport> reports);
// One eigenvalue per line per report: "stage,iteration,index,eigenvalue".
void write_eigenvalue_csv(std::ostream& os, std::span<const SpectralReport> reports);

}  // namespace pdncg
