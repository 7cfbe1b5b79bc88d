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

// Pseudo-Huber smoothing of ||W* x||_1 and the smoothed objective
//   f(x) = c * psi_mu(W* x) + 0.5 * ||A x - b||^2,
//   psi_mu(y) = sum_i (sqrt(mu^2 + |y_i|^2) - mu).

#include <span>

#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/vector.hpp"

namespace pdncg {

// Per-coordinate diagonals at one point x.
struct HuberScalings {
  double mu = 0.0;
  // (ReW^T x, ImW^T x); W* x = wx.re - i * wx.im.
  ComplexVec wx;
  // D_i = (mu^2 + |y_i|^2)^(-1/2).
  Vec d;
  // Yhat_i = mu^2 D_i^3 + D_i.
  Vec yhat;
  // Ytilde_i = -y_i^2 D_i^3 with y = W* x.
  ComplexVec ytilde;
  // psi_mu(W* x).
  double value = 0.0;

  // y = W* x.
  ComplexVec y() const;
};

double huber_value(const Dictionary& w, std::span<const double> x, double mu);
HuberScalings huber_scalings(const Dictionary& w, std::span<const double> x, double mu);

Vec huber_gradient(const Dictionary& w, std::span<const double> x, double mu);
Vec huber_gradient(const HuberScalings& s, const Dictionary& w);

// Hessian of psi_mu(W* x) applied to v, from the diagonals only.
Vec huber_hessian_vec(const HuberScalings& s, const Dictionary& w, std::span<const double> v);

// Smoothed least-squares problem with fixed data and parameters.
class SmoothedObjective {
 public:
  SmoothedObjective(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                    double mu);

  double value(std::span<const double> x) const;
  Vec gradient(std::span<const double> x) const;
  // Value and gradient sharing one analysis and one forward pass.
  double value_and_gradient(std::span<const double> x, Vec& grad) const;

  const LinearMap& a() const { return *a_; }
  const Dictionary& w() const { return *w_; }
  std::span<const double> b() const { return b_; }
  double c() const { return c_; }
  double mu() const { return mu_; }

 private:
  const LinearMap* a_;
  const Dictionary* w_;
  Vec b_;
  double c_;
  double mu_;
};

double objective(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                 double mu, std::span<const double> x);
Vec grad_objective(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                   double mu, std::span<const double> x);

}  // namespace pdncg
