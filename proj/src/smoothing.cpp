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

#include "pdncg/smoothing.hpp"

#include <cmath>
#include <string>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"

namespace pdncg {
namespace {

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("smoothing parameter mu must be positive, got " + std::to_string(mu));
  }
}

}  // namespace

ComplexVec HuberScalings::y() const {
  ComplexVec out(wx.re, wx.im);
  for (double& v : out.im) v = -v;
  return out;
}

double huber_value(const Dictionary& w, std::span<const double> x, double mu) {
  check_mu(mu);
  const ComplexVec s = w.analyze_split(x);
  Vec d(s.size());
  return kernels::active().huber_diag(s.re.data(), w.is_real() ? nullptr : s.im.data(), mu,
                                      d.data(), s.size());
}

HuberScalings huber_scalings(const Dictionary& w, std::span<const double> x, double mu) {
  check_mu(mu);
  HuberScalings h;
  h.mu = mu;
  h.wx = w.analyze_split(x);
  const std::size_t l = h.wx.size();
  h.d.resize(l);
  h.value = kernels::active().huber_diag(h.wx.re.data(), w.is_real() ? nullptr : h.wx.im.data(),
                                         mu, h.d.data(), l);
  h.yhat.resize(l);
  h.ytilde = ComplexVec(l);
  const double mu2 = mu * mu;
  for (std::size_t i = 0; i < l; ++i) {
    const double di = h.d[i];
    const double d3 = di * di * di;
    h.yhat[i] = mu2 * d3 + di;
    // y = a - i b, y^2 = a^2 - b^2 - 2iab.
    const double a = h.wx.re[i], b = h.wx.im[i];
    h.ytilde.re[i] = -(a * a - b * b) * d3;
    h.ytilde.im[i] = 2.0 * a * b * d3;
  }
  return h;
}

Vec huber_gradient(const HuberScalings& s, const Dictionary& w) {
  const std::size_t l = s.d.size();
  Vec gre(l), gim;
  for (std::size_t i = 0; i < l; ++i) gre[i] = s.d[i] * s.wx.re[i];
  if (!w.is_real()) {
    gim.resize(l);
    for (std::size_t i = 0; i < l; ++i) gim[i] = s.d[i] * s.wx.im[i];
  }
  return w.synthesize_real(gre, gim);
}

Vec huber_gradient(const Dictionary& w, std::span<const double> x, double mu) {
  return huber_gradient(huber_scalings(w, x, mu), w);
}

Vec huber_hessian_vec(const HuberScalings& s, const Dictionary& w, std::span<const double> v) {
  const ComplexVec t = w.analyze_split(v);
  const std::size_t l = s.d.size();
  const double mu2 = s.mu * s.mu;
  Vec ure(l), uim;
  if (w.is_real()) {
    // Real W: the Hessian collapses to W diag(mu^2 D^3) W^T.
    for (std::size_t i = 0; i < l; ++i) {
      const double di = s.d[i];
      ure[i] = mu2 * di * di * di * t.re[i];
    }
    return w.synthesize_real(ure, uim);
  }
  // Real-split form: per coordinate the 2x2 block D I - D^3 z z^T with
  // z = (ReW_i^T x, ImW_i^T x).
  uim.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    const double di = s.d[i];
    const double d3 = di * di * di;
    const double a = s.wx.re[i], b = s.wx.im[i];
    const double proj = a * t.re[i] + b * t.im[i];
    ure[i] = di * t.re[i] - d3 * a * proj;
    uim[i] = di * t.im[i] - d3 * b * proj;
  }
  return w.synthesize_real(ure, uim);
}

SmoothedObjective::SmoothedObjective(const LinearMap& a, const Dictionary& w,
                                     std::span<const double> b, double c, double mu)
    : a_(&a), w_(&w), b_(b.begin(), b.end()), c_(c), mu_(mu) {
  require_size(b.size(), a.rows(), "objective data b");
  require_size(a.cols(), w.signal_size(), "objective: A columns vs W rows");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ParameterError("regularization weight c must be positive, got " + std::to_string(c));
  }
  check_mu(mu);
}

double SmoothedObjective::value(std::span<const double> x) const {
  Vec r = a_->apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b_[i];
  return c_ * huber_value(*w_, x, mu_) + 0.5 * kernels::dot(r, r);
}

double SmoothedObjective::value_and_gradient(std::span<const double> x, Vec& grad) const {
  const HuberScalings s = huber_scalings(*w_, x, mu_);
  Vec r = a_->apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b_[i];
  grad = a_->adjoint(r);
  const Vec gpsi = huber_gradient(s, *w_);
  kernels::axpy(c_, gpsi, grad);
  return c_ * s.value + 0.5 * kernels::dot(r, r);
}

Vec SmoothedObjective::gradient(std::span<const double> x) const {
  Vec g;
  value_and_gradient(x, g);
  return g;
}

double objective(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                 double mu, std::span<const double> x) {
  return SmoothedObjective(a, w, b, c, mu).value(x);
}

Vec grad_objective(const LinearMap& a, const Dictionary& w, std::span<const double> b, double c,
                   double mu, std::span<const double> x) {
  return SmoothedObjective(a, w, b, c, mu).gradient(x);
}

}  // namespace pdncg
