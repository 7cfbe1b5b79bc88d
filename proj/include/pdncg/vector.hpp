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

#include <cstddef>
#include <span>
#include <vector>

namespace pdncg {

using Vec = std::vector<double>;

// A complex vector held as separate real and imaginary parts. All complex
// arithmetic in the library is done on such pairs.
struct ComplexVec {
  Vec re;
  Vec im;

  ComplexVec() = default;
  explicit ComplexVec(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  ComplexVec(Vec r, Vec i) : re(std::move(r)), im(std::move(i)) {}

  std::size_t size() const { return re.size(); }
};

}  // namespace pdncg
