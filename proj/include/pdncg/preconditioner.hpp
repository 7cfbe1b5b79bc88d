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

// N~ = c sym(B~) + rho I and its factorizations.
//
// For iTV on a p x p column-major image, N~ is block tridiagonal with p x p
// blocks: tridiagonal C_j on the diagonal and upper-bidiagonal K_j below it
// (block row j+1, block column j). The factor is lower block bidiagonal,
//   [L_0              ]
//   [U_0  L_1         ]
//   [     U_1  L_2    ]  ...
// with L_0 L_0^T = C_0, U_j L_j^T = K_j and U_{j-1} U_{j-1}^T + L_j L_j^T = C_j.

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdncg/dictionary.hpp"
#include "pdncg/pdsystem.hpp"
#include "pdncg/vector.hpp"

namespace pdncg {

// Banded storage by global index k = p*j + i.
struct BlockTridiagonal {
  std::size_t p = 0;
  Vec d0;    // N(k, k)
  Vec d1;    // N(k, k+1); zero when i = p-1
  Vec dpm1;  // N(k, k+p-1); zero when i = 0
  Vec dp;    // N(k, k+p)

  std::size_t size() const { return p * p; }
  Vec apply(std::span<const double> v) const;
  // Column-major n x n.
  Eigen::MatrixXd to_dense() const;
  // Blocks, for the factorization and tests.
  Eigen::MatrixXd diag_block(std::size_t j) const;
  Eigen::MatrixXd sub_block(std::size_t j) const;
};

BlockTridiagonal assemble_itv(const NewtonSystem& sys, double rho);
BlockTridiagonal assemble_itv(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
                              double c, double rho);

// Reads the two block families out of a dense matrix; entries outside the
// pattern are ignored. Used for hand-written test matrices.
BlockTridiagonal block_tridiagonal_from_dense(const Eigen::MatrixXd& n, std::size_t p);

enum class PreconditionerKind { Identity, OrthogonalFast, ItvCholesky };

// Immutable once built. A default-constructed instance is unfactored and
// every solve on it throws StateError.
class Preconditioner {
 public:
  Preconditioner() = default;

  static Preconditioner identity(std::size_t n);
  // Requires a real square orthonormal dictionary; keeps a reference to it.
  static Preconditioner orthogonal_fast(const NewtonSystem& sys, double rho);
  static Preconditioner block_cholesky(const BlockTridiagonal& n);

  PreconditionerKind kind() const { return kind_; }
  bool ready() const { return ready_; }
  std::size_t size() const { return n_; }

  // N~^{-1} r.
  Vec solve(std::span<const double> r) const;
  // With N~ = L L^T: L^{-1} r and L^{-T} r.
  Vec apply_linv(std::span<const double> r) const;
  Vec apply_linvt(std::span<const double> r) const;

  // Factor blocks (itv-cholesky only).
  const std::vector<Eigen::MatrixXd>& l_blocks() const { return l_; }
  const std::vector<Eigen::MatrixXd>& u_blocks() const { return u_; }
  // Dense lower-triangular factor, column-major.
  Eigen::MatrixXd dense_factor() const;

 private:
  void check_ready(std::size_t len) const;

  PreconditionerKind kind_ = PreconditionerKind::Identity;
  bool ready_ = false;
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<Eigen::MatrixXd> l_;
  std::vector<Eigen::MatrixXd> u_;
  const Dictionary* w_ = nullptr;
  Vec inv_sqrt_;  // orthogonal-fast: (c P + rho)^{-1/2}
};

Preconditioner block_cholesky(const BlockTridiagonal& n);

// Picks the factorization the dictionary supports: block Cholesky for iTV,
// the diagonal path for real orthonormal W, identity otherwise.
Preconditioner make_preconditioner(const NewtonSystem& sys, double rho);

// Half-width of the eigenvalue cluster around one:
//   (chi + 1 + sqrt(5 chi^2 - 2 chi + 1)) / 2 / (c mu^2 nu^3 lambda + rho).
// lambda = 0 gives the kernel-branch bound.
double theorem_bound(double chi, double rho, double c, double mu, double nu, double lambda_term);

}  // namespace pdncg
