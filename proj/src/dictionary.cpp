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

#include "pdncg/dictionary.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"

namespace pdncg {

Dictionary Dictionary::itv(std::size_t p) {
  if (p == 0) throw ParameterError("itv: image side must be positive");
  return Dictionary(DictionaryKind::Itv, p * p, p * p, p);
}

Dictionary Dictionary::identity(std::size_t n) {
  std::vector<double> wt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) wt[i * n + i] = 1.0;
  return orthonormal(n, std::move(wt));
}

Dictionary Dictionary::orthonormal(std::size_t n, std::vector<double> wt) {
  require_size(wt.size(), n * n, "orthonormal dictionary coefficients");
  if (n <= 256) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        wt.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double err = (m * m.transpose() - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
    if (err > 1e-8 * std::sqrt(static_cast<double>(n))) {
      throw ParameterError("orthonormal dictionary: columns are not orthonormal (defect " +
                           std::to_string(err) + ")");
    }
  }
  Dictionary d(DictionaryKind::Orthonormal, n, n, 0);
  d.re_t_ = std::move(wt);
  return d;
}

Dictionary Dictionary::random_orthonormal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  std::vector<double> wt(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) wt[i * n + j] = q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  return orthonormal(n, std::move(wt));
}

Dictionary Dictionary::dense_complex(std::size_t n, std::size_t l, std::vector<double> re_t,
                                     std::vector<double> im_t) {
  require_size(re_t.size(), n * l, "dense dictionary real part");
  require_size(im_t.size(), n * l, "dense dictionary imaginary part");
  Dictionary d(DictionaryKind::DenseComplex, n, l, 0);
  d.re_t_ = std::move(re_t);
  d.im_t_ = std::move(im_t);
  return d;
}

Dictionary Dictionary::gabor(std::size_t n, std::size_t shifts, std::size_t freqs, double width) {
  if (n == 0 || shifts == 0 || freqs == 0 || !(width > 0.0)) {
    throw ParameterError("gabor: sizes and width must be positive");
  }
  const std::size_t l = shifts * freqs;
  std::vector<double> re_t(l * n), im_t(l * n);
  for (std::size_t s = 0; s < shifts; ++s) {
    const double centre = (static_cast<double>(s) + 0.5) * static_cast<double>(n) / static_cast<double>(shifts);
    for (std::size_t f = 0; f < freqs; ++f) {
      const double omega = std::numbers::pi * static_cast<double>(f) / static_cast<double>(freqs);
      const std::size_t row = s * freqs + f;
      double norm = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double dt = (static_cast<double>(t) - centre) / width;
        const double env = std::exp(-0.5 * dt * dt);
        re_t[row * n + t] = env * std::cos(omega * static_cast<double>(t));
        im_t[row * n + t] = env * std::sin(omega * static_cast<double>(t));
        norm += env * env;
      }
      norm = std::sqrt(norm);
      for (std::size_t t = 0; t < n; ++t) {
        re_t[row * n + t] /= norm;
        im_t[row * n + t] /= norm;
      }
    }
  }
  return dense_complex(n, l, std::move(re_t), std::move(im_t));
}

ComplexVec Dictionary::analyze_split(std::span<const double> x) const {
  require_size(x.size(), n_, "Dictionary::analyze input");
  ComplexVec s(l_);
  if (kind_ == DictionaryKind::Itv) {
    const std::size_t p = p_;
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t col = j * p;
      for (std::size_t i = 0; i + 1 < p; ++i) s.re[col + i] = x[col + i + 1] - x[col + i];
    }
    for (std::size_t j = 0; j + 1 < p; ++j) {
      const std::size_t col = j * p;
      for (std::size_t i = 0; i < p; ++i) s.im[col + i] = x[col + i] - x[col + p + i];
    }
    return s;
  }
  const auto& k = kernels::active();
  k.gemv(re_t_.data(), l_, n_, x.data(), s.re.data());
  if (!is_real()) k.gemv(im_t_.data(), l_, n_, x.data(), s.im.data());
  return s;
}

ComplexVec Dictionary::analyze(std::span<const double> x) const {
  ComplexVec y = analyze_split(x);
  for (double& v : y.im) v = -v;
  return y;
}

Vec Dictionary::synthesize_real(std::span<const double> g_re, std::span<const double> g_im) const {
  require_size(g_re.size(), l_, "Dictionary::synthesize_real real part");
  if (!is_real()) require_size(g_im.size(), l_, "Dictionary::synthesize_real imaginary part");
  Vec x(n_, 0.0);
  if (kind_ == DictionaryKind::Itv) {
    const std::size_t p = p_;
    // W_v^T g_re - W_h^T g_im.
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t col = j * p;
      for (std::size_t i = 0; i + 1 < p; ++i) {
        x[col + i] -= g_re[col + i];
        x[col + i + 1] += g_re[col + i];
      }
    }
    for (std::size_t j = 0; j + 1 < p; ++j) {
      const std::size_t col = j * p;
      for (std::size_t i = 0; i < p; ++i) {
        x[col + i] += g_im[col + i];
        x[col + p + i] -= g_im[col + i];
      }
    }
    return x;
  }
  const auto& k = kernels::active();
  k.gemv_t(re_t_.data(), l_, n_, g_re.data(), x.data());
  if (!is_real()) {
    for (std::size_t r = 0; r < l_; ++r) k.axpy(g_im[r], im_t_.data() + r * n_, x.data(), n_);
  }
  return x;
}

}  // namespace pdncg
