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

// Data-parallel inner loops used by every higher layer.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active table is chosen once at startup from the CPU
// feature bits; PDNCG_KERNELS=scalar in the environment forces the reference
// path. Variants agree to rounding (summation order differs), which the
// equivalence tests pin down.

#include <cstddef>
#include <span>
#include <string_view>

namespace pdncg::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  std::string_view name;

  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // y = M x, M row-major rows x cols
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  // y = M^T x, M row-major rows x cols (y has cols entries)
  void (*gemv_t)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  // d_i = (mu^2 + re_i^2 + im_i^2)^(-1/2); returns sum_i (1/d_i - mu).
  // im may be null for real data.
  double (*huber_diag)(const double* re, const double* im, double mu,
                       double* d, std::size_t n);
};

const KernelTable& scalar_table();

// Null when the binary or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

const KernelTable& active();

// Overrides the automatic choice; returns false if the backend is unavailable.
bool select(Backend backend);

// Span front-ends over the active table. Size mismatches throw DimensionError.
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);

}  // namespace pdncg::kernels
