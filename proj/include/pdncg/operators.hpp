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

// Matrix-free measurement operators A : R^n -> R^m.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "pdncg/vector.hpp"

namespace pdncg {

class Dictionary;

enum class LinearMapKind { PartialDct, BlockSign, Dense };

class LinearMap {
 public:
  // Orthonormal DCT-II restricted to the given coefficient indices. With
  // height == 1 the transform is 1-D over `width` samples; otherwise it is the
  // separable 2-D transform of a column-major height x width image and
  // indices address column-major coefficient positions.
  static LinearMap partial_dct(std::size_t height, std::size_t width,
                               std::vector<std::size_t> rows);

  // m rows drawn uniformly without replacement from a seeded generator; the
  // DC coefficient (index 0) is always included.
  static LinearMap random_partial_dct(std::size_t height, std::size_t width,
                                      std::size_t m, std::uint64_t seed);

  // Row r touches columns [r*block, (r+1)*block) with the given signs, so
  // n = m * block. With normalize set every row is scaled by 1/sqrt(block),
  // which makes the rows orthonormal.
  static LinearMap block_sign(std::size_t m, std::size_t block,
                              std::vector<signed char> signs, bool normalize = true);
  static LinearMap random_block_sign(std::size_t m, std::size_t block,
                                     std::uint64_t seed, bool normalize = true);

  // Row-major m x n coefficients.
  static LinearMap dense(std::size_t m, std::size_t n, std::vector<double> coeffs);
  static LinearMap gaussian(std::size_t m, std::size_t n, std::uint64_t seed,
                            bool unit_columns = true);

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  LinearMapKind kind() const;

  Vec apply(std::span<const double> x) const;
  Vec adjoint(std::span<const double> y) const;

  // Selected coefficient indices (partial DCT only; empty otherwise).
  const std::vector<std::size_t>& selected_rows() const;

 private:
  struct Dct {
    std::size_t height = 1;
    std::size_t width = 0;
    std::vector<std::size_t> rows;
    // Orthonormal DCT-II matrices, row-major: C_h (height x height) and
    // C_w (width x width).
    std::vector<double> ch;
    std::vector<double> cw;
  };
  struct Block {
    std::size_t block = 1;
    std::vector<signed char> signs;
    double scale = 1.0;
  };
  struct Dense {
    std::vector<double> a;
  };

  LinearMap(std::size_t m, std::size_t n, std::variant<Dct, Block, Dense> impl)
      : m_(m), n_(n), impl_(std::move(impl)) {}

  Vec dct_forward(const Dct& d, std::span<const double> x) const;
  Vec dct_inverse(const Dct& d, std::span<const double> coeffs) const;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::variant<Dct, Block, Dense> impl_;
};

// Orthonormal DCT-II matrix of size k, row-major: C[f][t].
std::vector<double> dct_matrix(std::size_t k);

// ||A A^T - I_m||_2 by dense eigen-decomposition (m <= 4096).
double row_orthogonality_defect(const LinearMap& a);

// Smallest delta_q such that (1-delta)||Wz||^2 <= ||AWz||^2 <= (1+delta)||Wz||^2
// for every z with at most q nonzeros, by enumerating supports. Directions with
// Wz = 0 are excluded. Requires l <= 14.
double rip_constant_bruteforce(const LinearMap& a, const Dictionary& w, std::size_t q);

}  // namespace pdncg
