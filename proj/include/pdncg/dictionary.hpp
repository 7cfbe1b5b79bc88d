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

// The analysis operator W in E^{n x l}, kept as a real/imaginary split
// (ReW, ImW). Three kinds exist:
//  - orthonormal: a real square matrix with orthonormal columns;
//  - itv: the complex discrete nabla of a p x p column-major image, where
//    Re(W*x) holds vertical and Im(W*x) horizontal forward differences, with
//    zero rows where the stencil would leave the image;
//  - dense-complex: a small explicit complex frame (Gabor-like atoms).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdncg/vector.hpp"

namespace pdncg {

enum class DictionaryKind { Orthonormal, Itv, DenseComplex };

class Dictionary {
 public:
  static Dictionary itv(std::size_t p);
  static Dictionary identity(std::size_t n);
  // `wt` holds W^T row-major (row i is column i of W).
  static Dictionary orthonormal(std::size_t n, std::vector<double> wt);
  static Dictionary random_orthonormal(std::size_t n, std::uint64_t seed);
  // `re_t`, `im_t` hold ReW^T and ImW^T row-major, each l x n.
  static Dictionary dense_complex(std::size_t n, std::size_t l, std::vector<double> re_t,
                                  std::vector<double> im_t);
  // Unit-norm modulated Gaussian atoms: `shifts` window centres evenly spread
  // over [0, n) times `freqs` modulation frequencies k*n/(2*freqs).
  static Dictionary gabor(std::size_t n, std::size_t shifts, std::size_t freqs, double width);

  DictionaryKind kind() const { return kind_; }
  std::size_t signal_size() const { return n_; }
  std::size_t analysis_size() const { return l_; }
  // True when ImW = 0; callers skip the imaginary branch entirely.
  bool is_real() const { return kind_ == DictionaryKind::Orthonormal; }
  // Image side for itv (n = p^2); zero otherwise.
  std::size_t side() const { return p_; }

  // y = W* x.
  ComplexVec analyze(std::span<const double> x) const;
  // (ReW^T x, ImW^T x); W* x = first - i*second. The second part is all
  // zeros for real dictionaries.
  ComplexVec analyze_split(std::span<const double> x) const;
  // ReW g_re + ImW g_im = Re(W conj(g)). g_im is ignored (may be empty) for
  // real dictionaries.
  Vec synthesize_real(std::span<const double> g_re, std::span<const double> g_im) const;
  Vec synthesize_real(const ComplexVec& g) const { return synthesize_real(g.re, g.im); }

 private:
  Dictionary(DictionaryKind kind, std::size_t n, std::size_t l, std::size_t p)
      : kind_(kind), n_(n), l_(l), p_(p) {}

  DictionaryKind kind_;
  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::size_t p_ = 0;
  std::vector<double> re_t_;
  std::vector<double> im_t_;
};

}  // namespace pdncg
