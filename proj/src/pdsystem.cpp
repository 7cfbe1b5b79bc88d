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

#include "pdncg/pdsystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"

namespace pdncg {

double Iterate::dual_inf_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < g_re.size(); ++i) {
    const double im = g_im.empty() ? 0.0 : g_im[i];
    m = std::max(m, std::hypot(g_re[i], im));
  }
  return m;
}

DualCouplings dual_couplings(const HuberScalings& s, const Dictionary& w, const Iterate& it) {
  const std::size_t l = s.d.size();
  require_size(it.g_re.size(), l, "dual_couplings g_re");
  DualCouplings c{Vec(l), Vec(l, 0.0), Vec(l, 0.0), Vec(l, 0.0)};
  for (std::size_t i = 0; i < l; ++i) c.b1[i] = s.d[i] * it.g_re[i] * s.wx.re[i];
  if (w.is_real()) return c;
  require_size(it.g_im.size(), l, "dual_couplings g_im");
  for (std::size_t i = 0; i < l; ++i) {
    const double di = s.d[i];
    c.b2[i] = di * it.g_re[i] * s.wx.im[i];
    c.b3[i] = di * it.g_im[i] * s.wx.re[i];
    c.b4[i] = di * it.g_im[i] * s.wx.im[i];
  }
  return c;
}

NewtonSystem::NewtonSystem(const LinearMap& a, const Dictionary& w, const HuberScalings& s,
                           const DualCouplings& cpl, double c)
    : a_(&a), w_(&w), c_(c) {
  const std::size_t l = s.d.size();
  require_size(l, w.analysis_size(), "NewtonSystem scalings");
  require_size(a.cols(), w.signal_size(), "NewtonSystem: A columns vs W rows");
  p_.resize(l);
  for (std::size_t i = 0; i < l; ++i) p_[i] = s.d[i] * (1.0 - cpl.b1[i]);
  if (!w.is_real()) {
    q_.resize(l);
    r_.resize(l);
    db2_.resize(l);
    db3_.resize(l);
    for (std::size_t i = 0; i < l; ++i) {
      q_[i] = s.d[i] * (1.0 - cpl.b4[i]);
      db2_[i] = s.d[i] * cpl.b2[i];
      db3_[i] = s.d[i] * cpl.b3[i];
      r_[i] = -0.5 * (db2_[i] + db3_[i]);
    }
  }
}

Vec NewtonSystem::apply_sym_btilde(std::span<const double> v) const {
  const ComplexVec t = w_->analyze_split(v);
  const std::size_t l = p_.size();
  Vec ure(l), uim;
  if (w_->is_real()) {
    for (std::size_t i = 0; i < l; ++i) ure[i] = p_[i] * t.re[i];
    return w_->synthesize_real(ure, uim);
  }
  uim.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    ure[i] = p_[i] * t.re[i] + r_[i] * t.im[i];
    uim[i] = q_[i] * t.im[i] + r_[i] * t.re[i];
  }
  return w_->synthesize_real(ure, uim);
}

Vec NewtonSystem::apply_btilde(std::span<const double> v) const {
  if (w_->is_real()) return apply_sym_btilde(v);
  const ComplexVec t = w_->analyze_split(v);
  const std::size_t l = p_.size();
  Vec ure(l), uim(l);
  for (std::size_t i = 0; i < l; ++i) {
    ure[i] = p_[i] * t.re[i] - db2_[i] * t.im[i];
    uim[i] = q_[i] * t.im[i] - db3_[i] * t.re[i];
  }
  return w_->synthesize_real(ure, uim);
}

Vec NewtonSystem::apply_btilde_transpose(std::span<const double> v) const {
  if (w_->is_real()) return apply_sym_btilde(v);
  const ComplexVec t = w_->analyze_split(v);
  const std::size_t l = p_.size();
  Vec ure(l), uim(l);
  for (std::size_t i = 0; i < l; ++i) {
    ure[i] = p_[i] * t.re[i] - db3_[i] * t.im[i];
    uim[i] = q_[i] * t.im[i] - db2_[i] * t.re[i];
  }
  return w_->synthesize_real(ure, uim);
}

Vec NewtonSystem::apply(std::span<const double> v) const {
  Vec out = apply_sym_btilde(v);
  const Vec ata = a_->adjoint(a_->apply(v));
  kernels::xpby(ata, c_, out);
  return out;
}

Vec apply_bhat(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
               const LinearMap& a, double c, std::span<const double> v) {
  return NewtonSystem(a, w, s, cpl, c).apply(v);
}

ComplexVec dual_step(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
                     const Iterate& it, std::span<const double> dx) {
  const ComplexVec t = w.analyze_split(dx);
  const std::size_t l = s.d.size();
  ComplexVec dg(l);
  if (w.is_real()) {
    for (std::size_t i = 0; i < l; ++i) {
      const double di = s.d[i];
      dg.re[i] = di * (1.0 - cpl.b1[i]) * t.re[i] - it.g_re[i] + di * s.wx.re[i];
    }
    return dg;
  }
  for (std::size_t i = 0; i < l; ++i) {
    const double di = s.d[i];
    dg.re[i] = di * (1.0 - cpl.b1[i]) * t.re[i] - di * cpl.b2[i] * t.im[i] - it.g_re[i] +
               di * s.wx.re[i];
    dg.im[i] = di * (1.0 - cpl.b4[i]) * t.im[i] - di * cpl.b3[i] * t.re[i] - it.g_im[i] +
               di * s.wx.im[i];
  }
  return dg;
}

constexpr double kProjectionSlack = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();

void project_linf_inplace(std::span<double> g_re, std::span<double> g_im) {
  const bool has_im = !g_im.empty();
  if (has_im) require_size(g_im.size(), g_re.size(), "project_linf");
  for (std::size_t i = 0; i < g_re.size(); ++i) {
    const double im = has_im ? g_im[i] : 0.0;
    const double mag = std::hypot(g_re[i], im);
    // A rescaled entry can land a few ulps above 1; leaving those alone keeps
    // the projection exactly idempotent.
    if (mag > kProjectionSlack) {
      g_re[i] /= mag;
      if (has_im) g_im[i] /= mag;
    }
  }
}

ComplexVec project_linf(ComplexVec g) {
  project_linf_inplace(g.re, g.im);
  return g;
}

}  // namespace pdncg
