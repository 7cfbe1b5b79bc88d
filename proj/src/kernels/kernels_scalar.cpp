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

// Reference kernels. Plain loops, no intrinsics; these define the semantics
// the vector variants are tested against.

#include <cmath>

#include "tables.hpp"

namespace pdncg::kernels::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void gemv_scalar(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(m + r * cols, x, cols);
}

void gemv_t_scalar(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], m + r * cols, y, cols);
}

double huber_diag_scalar(const double* re, const double* im, double mu,
                         double* d, std::size_t n) {
  const double mu2 = mu * mu;
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = mu2 + re[i] * re[i];
    if (im) t += im[i] * im[i];
    const double r = std::sqrt(t);
    d[i] = 1.0 / r;
    value += r - mu;
  }
  return value;
}

}  // namespace

const KernelTable kScalarTable{
    Backend::Scalar, "scalar",     dot_scalar,   axpy_scalar,
    xpby_scalar,     gemv_scalar,  gemv_t_scalar, huber_diag_scalar,
};

}  // namespace pdncg::kernels::detail
