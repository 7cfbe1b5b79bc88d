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

#include "pdncg/dictionary.hpp"
#include "pdncg/errors.hpp"
#include "support.hpp"

namespace pdncg {
namespace {

using testing::dot;
using testing::norm;
using testing::random_vec;

TEST(Dictionary, ItvHandStencil) {
  // Column-major [[1,3],[2,4]].
  const auto w = Dictionary::itv(2);
  const ComplexVec y = w.analyze(Vec{1, 2, 3, 4});
  EXPECT_EQ(y.re, (Vec{1, 0, 1, 0}));
  EXPECT_EQ(y.im, (Vec{2, 2, 0, 0}));
}

TEST(Dictionary, ItvConstantImageIsInKernel) {
  const auto w = Dictionary::itv(7);
  const ComplexVec y = w.analyze(Vec(49, 3.25));
  for (std::size_t i = 0; i < 49; ++i) {
    EXPECT_EQ(y.re[i], 0.0);
    EXPECT_EQ(y.im[i], 0.0);
  }
}

TEST(Dictionary, ItvTransposeStencil) {
  const auto w = Dictionary::itv(2);
  EXPECT_EQ(w.synthesize_real(Vec{1, 0, 0, 0}, Vec(4, 0.0)), (Vec{-1, 1, 0, 0}));
}

TEST(Dictionary, IdentityPassThrough) {
  const auto w = Dictionary::identity(2);
  const ComplexVec y = w.analyze(Vec{1, -2});
  EXPECT_EQ(y.re, (Vec{1, -2}));
  EXPECT_EQ(y.im, (Vec{0, 0}));
  EXPECT_EQ(w.synthesize_real(Vec{2, 3}, {}), (Vec{2, 3}));
  EXPECT_EQ(w.synthesize_real(Vec{0, 0}, {}), (Vec{0, 0}));
}

TEST(Dictionary, ZeroDualsSynthesizeZero) {
  const auto w = Dictionary::itv(4);
  for (double v : w.synthesize_real(Vec(16, 0.0), Vec(16, 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(Dictionary, SizeErrors) {
  const auto w = Dictionary::itv(3);
  EXPECT_THROW(w.analyze(Vec(8, 1.0)), DimensionError);
  EXPECT_THROW(w.synthesize_real(Vec(9, 0.0), Vec(4, 0.0)), DimensionError);
  EXPECT_THROW(Dictionary::orthonormal(2, {1, 1, 0, 1}), ParameterError);
}

void check_pairing(const Dictionary& w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 100; ++t) {
    const Vec x = random_vec(w.signal_size(), rng);
    ComplexVec g(random_vec(w.analysis_size(), rng), random_vec(w.analysis_size(), rng));
    if (w.is_real()) g.im.assign(w.analysis_size(), 0.0);
    const ComplexVec y = w.analyze(x);
    // Re(sum_i y_i g_i) against <x, ReW g_re + ImW g_im>.
    const double lhs = dot(y.re, g.re) - dot(y.im, g.im);
    const double rhs = dot(x, w.synthesize_real(g));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * norm(x) * (norm(g.re) + norm(g.im)));
  }
}

TEST(Dictionary, AdjointPairingEveryKind) {
  check_pairing(Dictionary::itv(6), 1);
  check_pairing(Dictionary::identity(9), 2);
  check_pairing(Dictionary::random_orthonormal(12, 3), 3);
  check_pairing(Dictionary::gabor(16, 4, 3, 2.0), 4);
}

TEST(Dictionary, ItvHasOneDimensionalKernel) {
  for (std::size_t p : {2u, 4u, 8u}) {
    const auto w = Dictionary::itv(p);
    const Eigen::MatrixXcd m = testing::complex_matrix(w);
    // x -> (ReW^T x, ImW^T x) as a real 2l x n matrix.
    Eigen::MatrixXd stacked(2 * m.cols(), m.rows());
    stacked << m.real().transpose(), m.imag().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    const auto s = svd.singularValues();
    int zeros = 0;
    for (int i = 0; i < s.size(); ++i) zeros += s(i) < 1e-10 ? 1 : 0;
    EXPECT_EQ(zeros, 1) << "p = " << p;
  }
}

TEST(Dictionary, RandomOrthonormalIsOrthonormal) {
  const auto w = Dictionary::random_orthonormal(10, 42);
  const Eigen::MatrixXcd m = testing::complex_matrix(w);
  EXPECT_LE((m.real().transpose() * m.real() - Eigen::MatrixXd::Identity(10, 10)).norm(), 1e-12);
  EXPECT_EQ(m.imag().norm(), 0.0);
  EXPECT_TRUE(w.is_real());
}

TEST(Dictionary, GaborAtomsHaveUnitNorm) {
  const auto w = Dictionary::gabor(16, 4, 3, 2.5);
  EXPECT_EQ(w.analysis_size(), 12u);
  EXPECT_FALSE(w.is_real());
  const Eigen::MatrixXcd m = testing::complex_matrix(w);
  for (int j = 0; j < m.cols(); ++j) EXPECT_NEAR(m.col(j).norm(), 1.0, 1e-12);
}

}  // namespace
}  // namespace pdncg
