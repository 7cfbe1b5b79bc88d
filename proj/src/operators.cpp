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

#include "pdncg/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "pdncg/dictionary.hpp"
#include "pdncg/errors.hpp"
#include "pdncg/kernels.hpp"

namespace pdncg {

std::vector<double> dct_matrix(std::size_t k) {
  std::vector<double> c(k * k);
  const double s0 = std::sqrt(1.0 / static_cast<double>(k));
  const double s1 = std::sqrt(2.0 / static_cast<double>(k));
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t t = 0; t < k; ++t) {
      const double angle = std::numbers::pi * (static_cast<double>(t) + 0.5) *
                           static_cast<double>(f) / static_cast<double>(k);
      c[f * k + t] = (f == 0 ? s0 : s1) * std::cos(angle);
    }
  }
  return c;
}

LinearMap LinearMap::partial_dct(std::size_t height, std::size_t width,
                                 std::vector<std::size_t> rows) {
  if (height == 0 || width == 0) throw ParameterError("partial_dct: empty shape");
  const std::size_t n = height * width;
  std::sort(rows.begin(), rows.end());
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    throw ParameterError("partial_dct: duplicate row index");
  }
  if (!rows.empty() && rows.back() >= n) {
    throw DimensionError("partial_dct: row index " + std::to_string(rows.back()) +
                         " out of range for n = " + std::to_string(n));
  }
  Dct d;
  d.height = height;
  d.width = width;
  d.rows = std::move(rows);
  d.ch = dct_matrix(height);
  d.cw = dct_matrix(width);
  const std::size_t m = d.rows.size();
  return LinearMap(m, n, std::move(d));
}

LinearMap LinearMap::random_partial_dct(std::size_t height, std::size_t width,
                                        std::size_t m, std::uint64_t seed) {
  const std::size_t n = height * width;
  if (m == 0 || m > n) throw ParameterError("random_partial_dct: need 0 < m <= n");
  std::vector<std::size_t> pool(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) pool[i] = i + 1;
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first m-1 entries become a uniform sample.
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<std::size_t> rows{0};
  rows.insert(rows.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m - 1));
  return partial_dct(height, width, std::move(rows));
}

LinearMap LinearMap::block_sign(std::size_t m, std::size_t block,
                                std::vector<signed char> signs, bool normalize) {
  if (m == 0 || block == 0) throw ParameterError("block_sign: empty shape");
  const std::size_t n = m * block;
  require_size(signs.size(), n, "block_sign signs");
  for (signed char s : signs) {
    if (s != 1 && s != -1) throw ParameterError("block_sign: signs must be +1 or -1");
  }
  Block b;
  b.block = block;
  b.signs = std::move(signs);
  b.scale = normalize ? 1.0 / std::sqrt(static_cast<double>(block)) : 1.0;
  return LinearMap(m, n, std::move(b));
}

LinearMap LinearMap::random_block_sign(std::size_t m, std::size_t block,
                                       std::uint64_t seed, bool normalize) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<signed char> signs(m * block);
  for (auto& s : signs) s = coin(rng) ? 1 : -1;
  return block_sign(m, block, std::move(signs), normalize);
}

LinearMap LinearMap::dense(std::size_t m, std::size_t n, std::vector<double> coeffs) {
  require_size(coeffs.size(), m * n, "dense coefficients");
  return LinearMap(m, n, Dense{std::move(coeffs)});
}

LinearMap LinearMap::gaussian(std::size_t m, std::size_t n, std::uint64_t seed,
                              bool unit_columns) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(m * n);
  for (auto& v : a) v = normal(rng) / std::sqrt(static_cast<double>(m));
  if (unit_columns) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a[i * n + j] * a[i * n + j];
      s = std::sqrt(s);
      for (std::size_t i = 0; i < m; ++i) a[i * n + j] /= s;
    }
  }
  return dense(m, n, std::move(a));
}

LinearMapKind LinearMap::kind() const {
  switch (impl_.index()) {
    case 0:
      return LinearMapKind::PartialDct;
    case 1:
      return LinearMapKind::BlockSign;
    default:
      return LinearMapKind::Dense;
  }
}

const std::vector<std::size_t>& LinearMap::selected_rows() const {
  static const std::vector<std::size_t> kEmpty;
  if (const auto* d = std::get_if<Dct>(&impl_)) return d->rows;
  return kEmpty;
}

Vec LinearMap::dct_forward(const Dct& d, std::span<const double> x) const {
  const auto& k = kernels::active();
  const std::size_t h = d.height, w = d.width;
  Vec out(h * w);
  if (h == 1) {
    k.gemv(d.cw.data(), w, w, x.data(), out.data());
    return out;
  }
  // Column-major image: Z = C_h X column by column, then Y = Z C_w^T.
  Vec z(h * w);
  for (std::size_t j = 0; j < w; ++j) k.gemv(d.ch.data(), h, h, x.data() + j * h, z.data() + j * h);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t fj = 0; fj < w; ++fj) {
    double* col = out.data() + fj * h;
    for (std::size_t j = 0; j < w; ++j) k.axpy(d.cw[fj * w + j], z.data() + j * h, col, h);
  }
  return out;
}

Vec LinearMap::dct_inverse(const Dct& d, std::span<const double> coeffs) const {
  const auto& k = kernels::active();
  const std::size_t h = d.height, w = d.width;
  Vec out(h * w);
  if (h == 1) {
    k.gemv_t(d.cw.data(), w, w, coeffs.data(), out.data());
    return out;
  }
  // X = C_h^T Y C_w.
  Vec u(h * w);
  for (std::size_t fj = 0; fj < w; ++fj) {
    k.gemv_t(d.ch.data(), h, h, coeffs.data() + fj * h, u.data() + fj * h);
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t fj = 0; fj < w; ++fj) {
    const double* ucol = u.data() + fj * h;
    for (std::size_t j = 0; j < w; ++j) k.axpy(d.cw[fj * w + j], ucol, out.data() + j * h, h);
  }
  return out;
}

Vec LinearMap::apply(std::span<const double> x) const {
  require_size(x.size(), n_, "LinearMap::apply input");
  Vec y(m_, 0.0);
  if (const auto* d = std::get_if<Dct>(&impl_)) {
    const Vec full = dct_forward(*d, x);
    for (std::size_t r = 0; r < m_; ++r) y[r] = full[d->rows[r]];
  } else if (const auto* b = std::get_if<Block>(&impl_)) {
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      const std::size_t off = r * b->block;
      for (std::size_t j = 0; j < b->block; ++j) s += b->signs[off + j] * x[off + j];
      y[r] = b->scale * s;
    }
  } else {
    const auto& a = std::get<Dense>(impl_).a;
    kernels::active().gemv(a.data(), m_, n_, x.data(), y.data());
  }
  return y;
}

Vec LinearMap::adjoint(std::span<const double> y) const {
  require_size(y.size(), m_, "LinearMap::adjoint input");
  Vec x(n_, 0.0);
  if (const auto* d = std::get_if<Dct>(&impl_)) {
    Vec full(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) full[d->rows[r]] = y[r];
    return dct_inverse(*d, full);
  }
  if (const auto* b = std::get_if<Block>(&impl_)) {
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t off = r * b->block;
      for (std::size_t j = 0; j < b->block; ++j) x[off + j] = b->scale * b->signs[off + j] * y[r];
    }
    return x;
  }
  const auto& a = std::get<Dense>(impl_).a;
  kernels::active().gemv_t(a.data(), m_, n_, y.data(), x.data());
  return x;
}

double row_orthogonality_defect(const LinearMap& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m > 4096) throw TooLargeError("row_orthogonality_defect: m > 4096");
  // Columns of A^T are A^T e_r.
  Eigen::MatrixXd at(n, m);
  Vec e(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    e[r] = 1.0;
    const Vec col = a.adjoint(e);
    e[r] = 0.0;
    at.col(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(n));
  }
  Eigen::MatrixXd g = at.transpose() * at;
  g -= Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double rip_constant_bruteforce(const LinearMap& a, const Dictionary& w, std::size_t q) {
  using Cplx = std::complex<double>;
  const std::size_t n = w.signal_size(), l = w.analysis_size();
  if (l > 14) throw TooLargeError("rip_constant_bruteforce: l = " + std::to_string(l) + " > 14");
  if (q > l) throw ParameterError("rip_constant_bruteforce: q > l");
  require_size(a.cols(), n, "rip_constant_bruteforce: A columns");
  if (q == 0) return 0.0;

  // Columns of W and of A W, complex.
  Eigen::MatrixXcd wm(n, l), awm(a.rows(), l);
  Vec zero(l, 0.0), unit(l, 0.0);
  for (std::size_t j = 0; j < l; ++j) {
    unit[j] = 1.0;
    const Vec re = w.synthesize_real(unit, zero);  // ReW e_j
    const Vec im = w.synthesize_real(zero, unit);  // ImW e_j
    unit[j] = 0.0;
    const Vec are = a.apply(re), aim = a.apply(im);
    for (std::size_t i = 0; i < n; ++i) wm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Cplx(re[i], im[i]);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      awm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Cplx(are[i], aim[i]);
    }
  }
  const Eigen::MatrixXcd gram = wm.adjoint() * wm;
  const Eigen::MatrixXcd agram = awm.adjoint() * awm;
  const double scale = std::max(1.0, gram.diagonal().real().maxCoeff());

  double delta = 0.0;
  std::vector<Eigen::Index> support;
  // Supports enumerated as bitmasks of popcount <= q.
  for (std::uint32_t mask = 1; mask < (1u << l); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > q) continue;
    support.clear();
    for (std::size_t j = 0; j < l; ++j) {
      if (mask & (1u << j)) support.push_back(static_cast<Eigen::Index>(j));
    }
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXcd g(k, k), h(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        g(r, c) = gram(support[r], support[c]);
        h(r, c) = agram(support[r], support[c]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(g);
    const auto& lam = eg.eigenvalues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (lam(i) > 1e-12 * scale) keep.push_back(i);
    }
    if (keep.empty()) continue;
    const auto kk = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd basis(k, kk);
    for (Eigen::Index i = 0; i < kk; ++i) basis.col(i) = eg.eigenvectors().col(keep[i]) / std::sqrt(lam(keep[i]));
    const Eigen::MatrixXcd t = basis.adjoint() * h * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> et(t, Eigen::EigenvaluesOnly);
    const double lo = et.eigenvalues().minCoeff(), hi = et.eigenvalues().maxCoeff();
    delta = std::max({delta, hi - 1.0, 1.0 - lo});
  }
  return delta;
}

}  // namespace pdncg
