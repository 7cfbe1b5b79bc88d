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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/vector.hpp"

namespace pdncg::testing {

inline Vec random_vec(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (double& x : v) x = g(rng);
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double diff_norm(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
  return diff_norm(a, b) / std::max(norm(b), 1e-300);
}

// W = ReW + i ImW as an n x l complex matrix, column j from unit duals.
inline Eigen::MatrixXcd complex_matrix(const Dictionary& w) {
  const std::size_t n = w.signal_size();
  const std::size_t l = w.analysis_size();
  Eigen::MatrixXcd m(n, l);
  Vec er(l, 0.0), ei(l, 0.0);
  for (std::size_t j = 0; j < l; ++j) {
    er[j] = 1.0;
    const Vec re = w.synthesize_real(er, ei);
    er[j] = 0.0;
    Vec im(n, 0.0);
    if (!w.is_real()) {
      ei[j] = 1.0;
      im = w.synthesize_real(er, ei);
      ei[j] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) m(i, j) = {re[i], im[i]};
  }
  return m;
}

inline Eigen::MatrixXd dense_map(const LinearMap& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  Vec e(a.cols(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    e[j] = 1.0;
    const Vec col = a.apply(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = col[i];
  }
  return m;
}

inline Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

}  // namespace pdncg::testing
