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

#include <cstddef>
#include <functional>
#include <vector>

#include "phasefast/reconstruction.hpp"
#include "phasefast/stft.hpp"

namespace phasefast {

struct TimingStats {
  int runs = 0;
  double mean_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  double stddev_ms = 0.0;  // population
};

struct ConvergenceTrace {
  Algorithm algo = Algorithm::kGla;
  int iterations = 0;
  double alpha = 0.0;
  std::vector<double> residuals;
  std::vector<double> fft_overlay;
};

inline constexpr std::size_t kDefaultOverlayLength = std::size_t{1} << 16;
// snr_db reports this instead of +inf when the estimate is exact.
inline constexpr double kSnrCapDb = 300.0;

// || |Analyze(x)| - s ||_F / ||s||_F. x is analyzed with s's config and must
// produce the same frame count. Throws MetricError when ||s||_F = 0.
double SpectralConvergence(const MagnitudeSpectrogram& s, const Signal& x);

// 10 log10(sum ref^2 / sum (ref - est)^2), capped at kSnrCapDb.
double SnrDb(const Signal& reference, const Signal& estimate);

// Magnitudes of the length-`length` real DFT of x (zero-padded or
// truncated), bins 0..length/2. length must be a power of two >= 2.
std::vector<double> FftOverlay(const Signal& x, std::size_t length = kDefaultOverlayLength);

// ||a - b|| / max(||a||, ||b||); 0 when both are zero.
double OverlayDistance(const std::vector<double>& a, const std::vector<double>& b);

ConvergenceTrace MakeConvergenceTrace(Algorithm algo, const ReconstructionResult& result,
                                      std::size_t overlay_length = kDefaultOverlayLength);

// Runs task once untimed, then `repeats` times under a steady clock.
TimingStats TimeSynthesis(const std::function<void()>& task, int repeats);

// Summary statistics of a list of durations. Throws if empty.
TimingStats SummarizeTimings(const std::vector<double>& samples_ms);

}  // namespace phasefast
