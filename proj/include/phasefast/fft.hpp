// Copyright 2026 The phasefast Authors. All Rights Reserved.
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

#include <complex>
#include <cstddef>
#include <span>

namespace phasefast {

// Length-n real discrete Fourier transform backed by FFTW.
//
// Plans are created once per size and shared process-wide; execution is
// thread-safe. Plans are made with FFTW_ESTIMATE | FFTW_UNALIGNED so the
// chosen codelets do not depend on timing or buffer alignment, which keeps
// results bit-identical across runs.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  // out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

  // Inverse of Forward, normalized by 1/n. Imaginary parts of the DC and
  // (for even n) Nyquist bins are ignored. `in` is used as scratch.
  void Inverse(std::span<std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace phasefast
