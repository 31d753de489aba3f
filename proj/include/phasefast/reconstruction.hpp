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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasefast/stft.hpp"

namespace phasefast {

enum class InitKind { kZeroPhase, kRandomPhase };

struct InitStrategy {
  InitKind kind = InitKind::kZeroPhase;
  std::uint64_t seed = 0;  // random_phase only
};

struct ReconstructionParams {
  int iterations = 30;
  // Momentum weight ("convergence rate"). Ignored by GLA.
  double alpha = 0.2;
  InitStrategy init;
  // Stop once the residual drops below this value. Off by default: the
  // benchmark protocol runs a fixed number of iterations.
  std::optional<double> tolerance;

  // Throws InvalidParamError unless iterations >= 1 and 0 <= alpha < 1.
  void Validate() const;
};

struct ReconstructionResult {
  Signal waveform;
  // residual_trace[i] = || |t_{i+1}| - s ||_F / ||s||_F, measured after the
  // consistency projection of iteration i + 1.
  std::vector<double> residual_trace;
  std::vector<double> iter_times_ms;
  double total_time_ms = 0.0;
  ReconstructionParams params;
};

// Called once per iteration, in order, with (iteration starting at 1,
// residual, milliseconds since the run started). An exception thrown from the
// observer aborts the run with ObserverError.
using IterationObserver =
    std::function<void(int iteration, double residual, double elapsed_ms)>;

enum class Algorithm { kGla, kFgla };

// Accepts "gla" / "fgla"; anything else throws InvalidParamError.
Algorithm ParseAlgorithm(std::string_view token);
std::string ToString(Algorithm algo);

// P_C2: replace every modulus with s, keep the phase. A zero coefficient is
// given phase 0, so it becomes s + 0i.
ComplexSpectrogram ProjectMagnitude(const ComplexSpectrogram& c,
                                    const MagnitudeSpectrogram& s);

// P_C1: Analyze(Synthesize(c)), the orthogonal projection onto consistent
// spectrograms. Throws NonInvertibleError for a framing with a vanishing
// envelope.
ComplexSpectrogram ProjectConsistent(const ComplexSpectrogram& c);

// c_0 = s e^{i theta}. zero_phase: theta = 0. random_phase: theta uniform in
// [0, 2 pi) from a seeded 64-bit Mersenne twister, drawn bin-major
// (row-major over bins x frames).
ComplexSpectrogram InitCoefficients(const MagnitudeSpectrogram& s,
                                    const InitStrategy& strategy);

// Griffin-Lim: t_i = P_C1(P_C2(c_{i-1})), c_i = t_i; x* = G* c_n.
ReconstructionResult Gla(const MagnitudeSpectrogram& s,
                         const ReconstructionParams& params,
                         const IterationObserver& observer = {});

// Fast Griffin-Lim: as Gla, but c_i = t_i + alpha (t_i - t_{i-1}), with
// t_0 = P_C1(P_C2(c_0)) computed before the loop. alpha = 0 reproduces Gla
// bit for bit.
ReconstructionResult Fgla(const MagnitudeSpectrogram& s,
                          const ReconstructionParams& params,
                          const IterationObserver& observer = {});

ReconstructionResult Reconstruct(const MagnitudeSpectrogram& s, Algorithm algo,
                                 const ReconstructionParams& params,
                                 const IterationObserver& observer = {});

}  // namespace phasefast
