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

#include "pdncg/preconditioner.hpp"

#include <cmath>
#include <string>

#include "pdncg/errors.hpp"

namespace pdncg {

Vec BlockTridiagonal::apply(std::span<const double> v) const {
  const std::size_t n = size();
  require_size(v.size(), n, "BlockTridiagonal::apply");
  Vec out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = d0[k] * v[k];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out[k] += d1[k] * v[k + 1];
    out[k + 1] += d1[k] * v[k];
  }
  for (std::size_t k = 1; k + p - 1 < n; ++k) {
    out[k] += dpm1[k] * v[k + p - 1];
    out[k + p - 1] += dpm1[k] * v[k];
  }
  for (std::size_t k = 0; k + p < n; ++k) {
    out[k] += dp[k] * v[k + p];
    out[k + p] += dp[k] * v[k];
  }
  return out;
}

Eigen::MatrixXd BlockTridiagonal::to_dense() const {
  const std::size_t n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  auto put = [&](std::size_t r, std::size_t c, double v) {
    m(r, c) += v;
    m(c, r) += v;
  };
  for (std::size_t k = 0; k < n; ++k) m(k, k) = d0[k];
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (d1[k] != 0.0) put(k, k + 1, d1[k]);
  for (std::size_t k = 1; k + p - 1 < n; ++k)
    if (dpm1[k] != 0.0) put(k, k + p - 1, dpm1[k]);
  for (std::size_t k = 0; k + p < n; ++k)
    if (dp[k] != 0.0) put(k, k + p, dp[k]);
  return m;
}

Eigen::MatrixXd BlockTridiagonal::diag_block(std::size_t j) const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
  const std::size_t base = p * j;
  for (std::size_t i = 0; i < p; ++i) {
    c(i, i) = d0[base + i];
    if (i + 1 < p) {
      c(i, i + 1) = d1[base + i];
      c(i + 1, i) = d1[base + i];
    }
  }
  return c;
}

Eigen::MatrixXd BlockTridiagonal::sub_block(std::size_t j) const {
  // K(i', i) = N(p(j+1) + i', p j + i).
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(p, p);
  const std::size_t base = p * j;
  for (std::size_t i = 0; i < p; ++i) {
    k(i, i) = dp[base + i];
    if (i >= 1) k(i - 1, i) = dpm1[base + i];
  }
  return k;
}

BlockTridiagonal assemble_itv(const NewtonSystem& sys, double rho) {
  const Dictionary& w = sys.w();
  if (w.kind() != DictionaryKind::Itv) throw KindError("assemble_itv: dictionary is not itv");
  if (!(rho > 0.0)) throw ParameterError("assemble_itv: rho must be positive");
  const std::size_t p = w.side();
  const std::size_t n = p * p;
  const double c = sys.c();
  const Vec& pd = sys.p_diag();
  const Vec& qd = sys.q_diag();
  const Vec& rd = sys.r_diag();

  BlockTridiagonal t;
  t.p = p;
  t.d0.assign(n, rho);
  t.d1.assign(n, 0.0);
  t.dpm1.assign(n, 0.0);
  t.dp.assign(n, 0.0);

  // Column k of ReW is e_{k+1} - e_k (rows i < p-1); column k of ImW is
  // e_k - e_{k+p} (columns j < p-1).
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t k = p * j + i;
      const bool has_v = i + 1 < p;
      const bool has_h = j + 1 < p;
      if (has_v) {
        const double a = c * pd[k];
        t.d0[k] += a;
        t.d0[k + 1] += a;
        t.d1[k] -= a;
      }
      if (has_h) {
        const double a = c * qd[k];
        t.d0[k] += a;
        t.d0[k + p] += a;
        t.dp[k] -= a;
      }
      if (has_v && has_h) {
        // c R_k [(e_{k+1} - e_k)(e_k - e_{k+p})^T + transpose]
        const double a = c * rd[k];
        t.d0[k] -= 2.0 * a;
        t.dp[k] += a;
        t.d1[k] += a;
        t.dpm1[k + 1] -= a;
      }
    }
  }
  return t;
}

BlockTridiagonal assemble_itv(const DualCouplings& cpl, const HuberScalings& s, const Dictionary& w,
                              double c, double rho) {
  if (w.kind() != DictionaryKind::Itv) throw KindError("assemble_itv: dictionary is not itv");
  // A only enters B-hat, never N~; a zero operator of the right width stands in.
  const LinearMap zero = LinearMap::dense(1, w.signal_size(), Vec(w.signal_size(), 0.0));
  return assemble_itv(NewtonSystem(zero, w, s, cpl, c), rho);
}

BlockTridiagonal block_tridiagonal_from_dense(const Eigen::MatrixXd& m, std::size_t p) {
  const std::size_t n = p * p;
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
    throw DimensionError("block_tridiagonal_from_dense: matrix is not p^2 x p^2");
  }
  BlockTridiagonal t;
  t.p = p;
  t.d0.assign(n, 0.0);
  t.d1.assign(n, 0.0);
  t.dpm1.assign(n, 0.0);
  t.dp.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    t.d0[k] = m(k, k);
    if ((k % p) + 1 < p && k + 1 < n) t.d1[k] = m(k, k + 1);
    if (k % p != 0 && k + p - 1 < n) t.dpm1[k] = m(k, k + p - 1);
    if (k + p < n) t.dp[k] = m(k, k + p);
  }
  return t;
}

namespace {

// In-place dense Cholesky of the lower triangle; returns false on a pivot
// below `tol`.
bool dense_cholesky(Eigen::MatrixXd& a, double tol) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) s -= a(j, k) * a(j, k);
    if (!(s > tol)) return false;
    const double ljj = std::sqrt(s);
    a(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double t = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) t -= a(i, k) * a(j, k);
      a(i, j) = t / ljj;
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return true;
}

}  // namespace

Preconditioner Preconditioner::identity(std::size_t n) {
  Preconditioner pc;
  pc.kind_ = PreconditionerKind::Identity;
  pc.ready_ = true;
  pc.n_ = n;
  return pc;
}

Preconditioner Preconditioner::orthogonal_fast(const NewtonSystem& sys, double rho) {
  const Dictionary& w = sys.w();
  if (!w.is_real() || w.signal_size() != w.analysis_size()) {
    throw KindError("orthogonal_fast: needs a real square orthonormal dictionary");
  }
  if (!(rho > 0.0)) throw ParameterError("orthogonal_fast: rho must be positive");
  Preconditioner pc;
  pc.kind_ = PreconditionerKind::OrthogonalFast;
  pc.n_ = w.signal_size();
  pc.w_ = &w;
  const Vec& pd = sys.p_diag();
  pc.inv_sqrt_.resize(pc.n_);
  for (std::size_t i = 0; i < pc.n_; ++i) {
    const double v = sys.c() * pd[i] + rho;
    if (!(v > 0.0)) throw FactorizationError("orthogonal_fast: nonpositive diagonal", i);
    pc.inv_sqrt_[i] = 1.0 / std::sqrt(v);
  }
  pc.ready_ = true;
  return pc;
}

Preconditioner Preconditioner::block_cholesky(const BlockTridiagonal& t) {
  const std::size_t p = t.p;
  if (p == 0) throw DimensionError("block_cholesky: empty matrix");
  require_size(t.d0.size(), p * p, "block_cholesky diagonal");
  double max_diag = 0.0;
  for (double v : t.d0) max_diag = std::max(max_diag, std::abs(v));
  const double tol = 1e-14 * max_diag;

  Preconditioner pc;
  pc.kind_ = PreconditionerKind::ItvCholesky;
  pc.n_ = p * p;
  pc.p_ = p;
  pc.l_.resize(p);
  pc.u_.resize(p > 0 ? p - 1 : 0);
  for (std::size_t j = 0; j < p; ++j) {
    Eigen::MatrixXd s = t.diag_block(j);
    if (j > 0) s.noalias() -= pc.u_[j - 1] * pc.u_[j - 1].transpose();
    if (!dense_cholesky(s, tol)) {
      throw FactorizationError("block_cholesky: nonpositive pivot in block " + std::to_string(j), j);
    }
    pc.l_[j] = std::move(s);
    if (j + 1 < p) {
      // U_j L_j^T = K_j  <=>  L_j U_j^T = K_j^T.
      Eigen::MatrixXd ut = t.sub_block(j).transpose();
      pc.l_[j].triangularView<Eigen::Lower>().solveInPlace(ut);
      pc.u_[j] = ut.transpose();
    }
  }
  pc.ready_ = true;
  return pc;
}

Preconditioner block_cholesky(const BlockTridiagonal& n) { return Preconditioner::block_cholesky(n); }

void Preconditioner::check_ready(std::size_t len) const {
  if (!ready_) throw StateError("preconditioner used before it was built");
  require_size(len, n_, "Preconditioner");
}

Vec Preconditioner::apply_linv(std::span<const double> r) const {
  check_ready(r.size());
  switch (kind_) {
    case PreconditionerKind::Identity:
      return Vec(r.begin(), r.end());
    case PreconditionerKind::OrthogonalFast: {
      Vec z = w_->analyze_split(r).re;
      for (std::size_t i = 0; i < n_; ++i) z[i] *= inv_sqrt_[i];
      return z;
    }
    case PreconditionerKind::ItvCholesky:
      break;
  }
  const auto p = static_cast<Eigen::Index>(p_);
  Vec z(r.begin(), r.end());
  for (std::size_t j = 0; j < p_; ++j) {
    Eigen::Map<Eigen::VectorXd> zj(z.data() + j * p_, p);
    if (j > 0) {
      Eigen::Map<const Eigen::VectorXd> zprev(z.data() + (j - 1) * p_, p);
      zj.noalias() -= u_[j - 1] * zprev;
    }
    l_[j].triangularView<Eigen::Lower>().solveInPlace(zj);
  }
  return z;
}

Vec Preconditioner::apply_linvt(std::span<const double> r) const {
  check_ready(r.size());
  switch (kind_) {
    case PreconditionerKind::Identity:
      return Vec(r.begin(), r.end());
    case PreconditionerKind::OrthogonalFast: {
      Vec g(r.begin(), r.end());
      for (std::size_t i = 0; i < n_; ++i) g[i] *= inv_sqrt_[i];
      return w_->synthesize_real(g, {});
    }
    case PreconditionerKind::ItvCholesky:
      break;
  }
  const auto p = static_cast<Eigen::Index>(p_);
  Vec x(r.begin(), r.end());
  for (std::size_t jj = p_; jj-- > 0;) {
    Eigen::Map<Eigen::VectorXd> xj(x.data() + jj * p_, p);
    if (jj + 1 < p_) {
      Eigen::Map<const Eigen::VectorXd> xnext(x.data() + (jj + 1) * p_, p);
      xj.noalias() -= u_[jj].transpose() * xnext;
    }
    l_[jj].transpose().triangularView<Eigen::Upper>().solveInPlace(xj);
  }
  return x;
}

Vec Preconditioner::solve(std::span<const double> r) const {
  check_ready(r.size());
  if (kind_ == PreconditionerKind::Identity) return Vec(r.begin(), r.end());
  return apply_linvt(apply_linv(r));
}

Eigen::MatrixXd Preconditioner::dense_factor() const {
  if (!ready_) throw StateError("preconditioner used before it was built");
  if (kind_ != PreconditionerKind::ItvCholesky) {
    throw KindError("dense_factor: only block Cholesky factors are stored");
  }
  const auto p = static_cast<Eigen::Index>(p_);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (std::size_t j = 0; j < p_; ++j) {
    const auto o = static_cast<Eigen::Index>(j * p_);
    l.block(o, o, p, p) = l_[j];
    if (j + 1 < p_) l.block(o + p, o, p, p) = u_[j];
  }
  return l;
}

Preconditioner make_preconditioner(const NewtonSystem& sys, double rho) {
  const Dictionary& w = sys.w();
  if (w.kind() == DictionaryKind::Itv) return block_cholesky(assemble_itv(sys, rho));
  if (w.is_real() && w.signal_size() == w.analysis_size()) {
    return Preconditioner::orthogonal_fast(sys, rho);
  }
  return Preconditioner::identity(w.signal_size());
}

double theorem_bound(double chi, double rho, double c, double mu, double nu, double lambda_term) {
  if (!(rho > 0.0) || rho > 0.5) throw ParameterError("theorem_bound: rho must lie in (0, 1/2]");
  if (!(nu > 0.0)) throw ParameterError("theorem_bound: nu must be positive");
  if (lambda_term < 0.0) throw ParameterError("theorem_bound: lambda term must be nonnegative");
  const double num = 0.5 * (chi + 1.0 + std::sqrt(5.0 * chi * chi - 2.0 * chi + 1.0));
  return num / (c * mu * mu * nu * nu * nu * lambda_term + rho);
}

}  // namespace pdncg
