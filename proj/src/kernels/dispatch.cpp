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

#include <cmath>
#include <cstdlib>
#include <string_view>

#include "pdncg/errors.hpp"
#include "tables.hpp"

namespace pdncg::kernels {
namespace {

bool cpu_has_avx2() {
#if PDNCG_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("PDNCG_KERNELS")) {
    if (std::string_view(env) == "scalar") return &detail::kScalarTable;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &detail::kScalarTable;
}

const KernelTable*& current() {
  static const KernelTable* table = pick_default();
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if PDNCG_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current(); }

bool select(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      current() = &detail::kScalarTable;
      return true;
    case Backend::Avx2:
      if (const KernelTable* t = avx2_table()) {
        current() = t;
        return true;
      }
      return false;
  }
  return false;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_size(y.size(), x.size(), "dot");
  return active().dot(x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) {
  return std::sqrt(active().dot(x.data(), x.data(), x.size()));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_size(y.size(), x.size(), "axpy");
  active().axpy(a, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  require_size(y.size(), x.size(), "xpby");
  active().xpby(x.data(), b, y.data(), x.size());
}

}  // namespace pdncg::kernels
