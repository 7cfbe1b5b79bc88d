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

// Primal-dual Newton system for the smoothed problem.
//
// With s = (ReW^T x, ImW^T x) and duals g = g_re + i g_im, the coupling
// diagonals are
//   B1 = D g_re s_re,  B2 = D g_re s_im,  B3 = D g_im s_re,  B4 = D g_im s_im
// and the linearization of D^{-1} g = s reads
//   dg_re = D(I - B1) ReW^T dx - D B2 ImW^T dx - g_re + D s_re
//   dg_im = D(I - B4) ImW^T dx - D B3 ReW^T dx - g_im + D s_im.
// The primal block is B~ = ReW D(I-B1) ReW^T + ImW D(I-B4) ImW^T
//   - ReW D B2 ImW^T - ImW D B3 ReW^T, and CG runs on its symmetric part:
//   Bhat = c sym(B~) + A^T A.

#include <span>

#include "pdncg/dictionary.hpp"
#include "pdncg/operators.hpp"
#include "pdncg/smoothing.hpp"
#include "pdncg/vector.hpp"

namespace pdncg {

struct Iterate {
  Vec x;
  Vec g_re;
  Vec g_im;

  static Iterate zeros(std::size_t n, std::size_t l) {
    return Iterate{Vec(n, 0.0), Vec(l, 0.0), Vec(l, 0.0)};
  }
  // max_i |g_i|
  double dual_inf_norm() const;
};

struct DualCouplings {
  Vec b1, b2, b3, b4;
};

// B2..B4 are identically zero for real dictionaries.
DualCouplings dual_couplings(const HuberScalings& s, const Dictionary& w, const Iterate& it);

// Matrix-free Bhat = c sym(B~) + A^T A at a fixed iterate. Holds its own copy
// of the diagonals, so it stays valid after the iterate moves on.
class NewtonSystem {
 public:
  NewtonSystem(const LinearMap& a, const Dictionary& w, const HuberScalings& s,
               const DualCouplings& cpl, double c);

  std::size_t size() const { return w_->signal_size(); }

  Vec apply(std::span<const double> v) const;
  Vec apply_sym_btilde(std::span<const double> v) const;
  Vec apply_btilde(std::span<const double> v) const;
  Vec apply_btilde_transpose(std::span<const double> v) const;

  // sym(B~) = ReW P ReW^T + ImW Q ImW^T + ReW R ImW^T + ImW R ReW^T.
  const Vec& p_diag() const { return p_; }
  const Vec& q_diag() const { return q_; }
  const Vec& r_diag() const { return r_; }

  double c() const { return c_; }
  const LinearMap& a() const { return *a_; }
  const Dictionary& w() const { return *w_; }

 private:
  const LinearMap* a_;
  const Dictionary* w_;
  double c_;
  Vec p_, q_, r_;
  // D B2 and D B3 kept apart for the unsymmetrized product.
  Vec db2_, db3_;
};

Vec apply_bhat(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
               const LinearMap& a, double c, std::span<const double> v);

// (dg_re, dg_im) from the second and third block rows of the linearization.
ComplexVec dual_step(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
                     const Iterate& it, std::span<const double> dx);

// u_i <- u_i * min(1/|u_i|, 1).
ComplexVec project_linf(ComplexVec g);
void project_linf_inplace(std::span<double> g_re, std::span<double> g_im);

}  // namespace pdncg
