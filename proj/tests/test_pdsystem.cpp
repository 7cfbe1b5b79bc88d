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

#include <cmath>
#include <random>

#include "pdncg/diagnostics.hpp"
#include "pdncg/pdsystem.hpp"
#include "pdncg/smoothing.hpp"
#include "pdncg/solver.hpp"
#include "support.hpp"

namespace pdncg {
namespace {

using testing::dot;
using testing::norm;
using testing::random_vec;

Iterate random_feasible(std::size_t n, std::size_t l, bool real, std::mt19937_64& rng) {
  Iterate it{random_vec(n, rng), random_vec(l, rng), real ? Vec(l, 0.0) : random_vec(l, rng)};
  project_linf_inplace(it.g_re, real ? std::span<double>() : std::span<double>(it.g_im));
  return it;
}

TEST(DualCouplings, VanishAtZero) {
  const auto w = Dictionary::itv(3);
  std::mt19937_64 rng(1);
  Iterate zg{random_vec(9, rng), Vec(9, 0.0), Vec(9, 0.0)};
  Iterate zx{Vec(9, 0.0), Vec(9, 0.5), Vec(9, -0.5)};
  for (const Iterate& it : {zg, zx}) {
    const DualCouplings c = dual_couplings(huber_scalings(w, it.x, 0.1), w, it);
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_EQ(c.b1[i], 0.0);
      EXPECT_EQ(c.b2[i], 0.0);
      EXPECT_EQ(c.b3[i], 0.0);
      EXPECT_EQ(c.b4[i], 0.0);
    }
  }
}

TEST(DualCouplings, ScalarValue) {
  const auto w = Dictionary::identity(1);
  const Iterate it{Vec{2.0}, Vec{0.5}, Vec{0.0}};
  const DualCouplings c = dual_couplings(huber_scalings(w, it.x, 1.0), w, it);
  EXPECT_NEAR(c.b1[0], 0.5 * 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_EQ(c.b2[0], 0.0);
  EXPECT_EQ(c.b3[0], 0.0);
  EXPECT_EQ(c.b4[0], 0.0);
}

TEST(NewtonSystem, IdentityCaseIsTwoV) {
  const auto w = Dictionary::identity(4);
  const auto a = LinearMap::dense(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  const Iterate it = Iterate::zeros(4, 4);
  const HuberScalings s = huber_scalings(w, it.x, 1.0);
  const Vec v{1, -2, 3, 0.5};
  const Vec out = apply_bhat(dual_couplings(s, w, it), s, w, a, 1.0, v);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out[i], 2 * v[i]);
}

TEST(NewtonSystem, SymmetricOperators) {
  std::mt19937_64 rng(2);
  const auto w = Dictionary::itv(5);
  const auto a = LinearMap::random_partial_dct(5, 5, 8, 1);
  for (int t = 0; t < 5; ++t) {
    const Iterate it = random_feasible(25, 25, false, rng);
    const HuberScalings s = huber_scalings(w, it.x, 0.05);
    const NewtonSystem sys(a, w, s, dual_couplings(s, w, it), 0.7);
    const Vec v = random_vec(25, rng), u = random_vec(25, rng);
    const double x1 = dot(sys.apply(v), u), x2 = dot(v, sys.apply(u));
    EXPECT_LE(std::abs(x1 - x2), 1e-12 * std::max(1.0, std::abs(x1)));
    // B~ and B~^T are adjoint, and sym(B~) is their mean.
    EXPECT_NEAR(dot(sys.apply_btilde(v), u), dot(v, sys.apply_btilde_transpose(u)),
                1e-12 * std::max(1.0, std::abs(x1)));
    const Vec bt = sys.apply_btilde(v), btt = sys.apply_btilde_transpose(v);
    const Vec sym = sys.apply_sym_btilde(v);
    for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(sym[i], 0.5 * (bt[i] + btt[i]), 1e-12);
  }
}

TEST(NewtonSystem, ConsistentDualsGiveHessianRealW) {
  std::mt19937_64 rng(3);
  const auto w = Dictionary::random_orthonormal(12, 7);
  const auto a = LinearMap::gaussian(5, 12, 2);
  for (double mu : {1.0, 1e-2, 1e-4}) {
    const Vec x = random_vec(12, rng);
    const HuberScalings s = huber_scalings(w, x, mu);
    Iterate it{x, Vec(12), Vec(12, 0.0)};
    for (std::size_t i = 0; i < 12; ++i) it.g_re[i] = s.d[i] * s.wx.re[i];
    const NewtonSystem sys(a, w, s, dual_couplings(s, w, it), 1.0);
    for (int t = 0; t < 10; ++t) {
      const Vec v = random_vec(12, rng);
      EXPECT_LE(testing::diff_norm(sys.apply_sym_btilde(v), huber_hessian_vec(s, w, v)),
                1e-12 * norm(v) * std::max(1.0, 1.0 / mu));
    }
  }
}

// Dense assembly of the dual rows of the linearized system.
ComplexVec dense_dual_rows(const Dictionary& w, const HuberScalings& s, const Iterate& it,
                           const Vec& dx) {
  const Eigen::MatrixXcd m = testing::complex_matrix(w);
  const Eigen::MatrixXd rt = m.real().transpose(), it_ = m.imag().transpose();
  const auto l = rt.rows();
  Eigen::VectorXd d(l), gre(l), gim(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    d(i) = s.d[i];
    gre(i) = it.g_re[i];
    gim(i) = it.g_im[i];
  }
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(it.x.data(), it.x.size());
  const Eigen::VectorXd dxv = Eigen::Map<const Eigen::VectorXd>(dx.data(), dx.size());
  const Eigen::VectorXd ar = rt * xv, ai = it_ * xv;
  const Eigen::MatrixXd D = d.asDiagonal();
  const Eigen::MatrixXd B1 = (d.cwiseProduct(gre).cwiseProduct(ar)).asDiagonal();
  const Eigen::MatrixXd B2 = (d.cwiseProduct(gre).cwiseProduct(ai)).asDiagonal();
  const Eigen::MatrixXd B3 = (d.cwiseProduct(gim).cwiseProduct(ar)).asDiagonal();
  const Eigen::MatrixXd B4 = (d.cwiseProduct(gim).cwiseProduct(ai)).asDiagonal();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(l, l);
  const Eigen::VectorXd dre = D * (I - B1) * rt * dxv - D * B2 * it_ * dxv - gre + D * ar;
  const Eigen::VectorXd dim = D * (I - B4) * it_ * dxv - D * B3 * rt * dxv - gim + D * ai;
  return ComplexVec(testing::to_vec(dre), testing::to_vec(dim));
}

TEST(DualStep, MatchesDenseAssembly) {
  std::mt19937_64 rng(4);
  const std::vector<Dictionary> dicts{Dictionary::itv(2), Dictionary::gabor(4, 2, 2, 1.0)};
  for (const auto& w : dicts) {
    for (int t = 0; t < 5; ++t) {
      const Iterate it = random_feasible(w.signal_size(), w.analysis_size(), false, rng);
      const Vec dx = random_vec(w.signal_size(), rng);
      const HuberScalings s = huber_scalings(w, it.x, 0.3);
      const ComplexVec got = dual_step(dual_couplings(s, w, it), s, w, it, dx);
      const ComplexVec want = dense_dual_rows(w, s, it, dx);
      EXPECT_LE(testing::diff_norm(got.re, want.re), 1e-12 * (1.0 + norm(want.re)));
      EXPECT_LE(testing::diff_norm(got.im, want.im), 1e-12 * (1.0 + norm(want.im)));
    }
  }
}

TEST(DualStep, ScalarAndFixedPoint) {
  const auto w = Dictionary::identity(1);
  const Iterate it{Vec{2.0}, Vec{0.0}, Vec{0.0}};
  const HuberScalings s = huber_scalings(w, it.x, 1.0);
  EXPECT_NEAR(dual_step(dual_couplings(s, w, it), s, w, it, Vec{0.0}).re[0], 2.0 / std::sqrt(5.0),
              1e-15);

  std::mt19937_64 rng(5);
  const auto wo = Dictionary::random_orthonormal(6, 1);
  const Vec x = random_vec(6, rng);
  const HuberScalings so = huber_scalings(wo, x, 0.1);
  Iterate ic{x, Vec(6), Vec(6, 0.0)};
  for (std::size_t i = 0; i < 6; ++i) ic.g_re[i] = so.d[i] * so.wx.re[i];
  const ComplexVec dg = dual_step(dual_couplings(so, wo, ic), so, wo, ic, Vec(6, 0.0));
  for (double v : dg.re) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Projection, Examples) {
  ComplexVec a(Vec{0.3}, Vec{0.0});
  EXPECT_EQ(project_linf(a).re[0], 0.3);
  const ComplexVec b = project_linf(ComplexVec(Vec{3.0}, Vec{4.0}));
  EXPECT_NEAR(b.re[0], 0.6, 1e-15);
  EXPECT_NEAR(b.im[0], 0.8, 1e-15);
}

TEST(Projection, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const ComplexVec u(random_vec(20, rng, 2.0), random_vec(20, rng, 2.0));
    const ComplexVec v(random_vec(20, rng, 2.0), random_vec(20, rng, 2.0));
    const ComplexVec pu = project_linf(u), pv = project_linf(v);
    const ComplexVec ppu = project_linf(pu);
    EXPECT_EQ(ppu.re, pu.re);
    EXPECT_EQ(ppu.im, pu.im);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_LE(std::hypot(pu.re[i], pu.im[i]), 1.0 + 1e-15);
    const double dp = std::hypot(testing::diff_norm(pu.re, pv.re), testing::diff_norm(pu.im, pv.im));
    const double d = std::hypot(testing::diff_norm(u.re, v.re), testing::diff_norm(u.im, v.im));
    EXPECT_LE(dp, d + 1e-14);
  }
}

TEST(NewtonSystem, PositiveDefiniteOnFeasibleDuals) {
  std::mt19937_64 rng(7);
  const auto w = Dictionary::itv(8);
  const auto a = LinearMap::random_partial_dct(8, 8, 16, 3);
  for (int t = 0; t < 10; ++t) {
    const Iterate it = random_feasible(64, 64, false, rng);
    for (double mu : {1e-1, 1e-3}) {
      const HuberScalings s = huber_scalings(w, it.x, mu);
      const NewtonSystem sys(a, w, s, dual_couplings(s, w, it), 0.5);
      const SpectralReport r =
          densify_and_eig([&](std::span<const double> v) { return sys.apply(v); }, 64);
      EXPECT_GT(r.min(), 0.0);
    }
  }
}

TEST(NewtonSystem, ConvergedComplexIterateApproachesHessian) {
  const std::size_t p = 6;
  const auto w = Dictionary::itv(p);
  const auto a = LinearMap::random_partial_dct(p, p, 18, 4);
  std::mt19937_64 rng(8);
  const Vec b = a.apply(random_vec(p * p, rng));
  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.eta = 1e-6;
  cfg.max_outer = 400;
  const double mu = 1e-2;
  const PdncgResult r =
      pdncg(a, w, b, 0.1, mu, cfg, Iterate::zeros(p * p, p * p), true, {}, 0);
  const HuberScalings s = huber_scalings(w, r.iterate.x, mu);
  const NewtonSystem sys(a, w, s, dual_couplings(s, w, r.iterate), 0.1);
  for (int t = 0; t < 10; ++t) {
    const Vec v = random_vec(p * p, rng);
    EXPECT_LE(testing::diff_norm(sys.apply_sym_btilde(v), huber_hessian_vec(s, w, v)),
              1e-6 * norm(v));
  }
}

}  // namespace
}  // namespace pdncg
