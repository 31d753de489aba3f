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

#include "phasefast/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "phasefast/fft.hpp"

namespace phasefast {

double SpectralConvergence(const MagnitudeSpectrogram& s, const Signal& x) {
  const ComplexSpectrogram c = Analyze(x, s.config());
  if (c.frames() != s.frames()) {
    throw DomainError("signal of " + std::to_string(x.size()) + " samples gives " +
                      std::to_string(c.frames()) + " frames, spectrogram has " +
                      std::to_string(s.frames()));
  }
  double num = 0.0;
  double den = 0.0;
  auto coef = c.data();
  auto mag = s.data();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double d = std::abs(coef[i]) - mag[i];
    num += d * d;
    den += mag[i] * mag[i];
  }
  if (den == 0.0) throw MetricError("spectral convergence is undefined for an all-zero target");
  return std::sqrt(num) / std::sqrt(den);
}

double SnrDb(const Signal& reference, const Signal& estimate) {
  if (reference.size() != estimate.size()) {
    throw DomainError("snr: length mismatch (" + std::to_string(reference.size()) + " vs " +
                      std::to_string(estimate.size()) + ")");
  }
  if (reference.sample_rate != estimate.sample_rate) {
    throw DomainError("snr: sample rate mismatch");
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference.samples[i];
    const double e = r - estimate.samples[i];
    signal += r * r;
    noise += e * e;
  }
  if (signal == 0.0) throw MetricError("snr is undefined for a zero-energy reference");
  if (noise == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / noise));
}

std::vector<double> FftOverlay(const Signal& x, std::size_t length) {
  if (length < 2 || (length & (length - 1)) != 0) {
    throw DomainError("overlay length must be a power of two >= 2, got " +
                      std::to_string(length));
  }
  std::vector<double> buf(length, 0.0);
  std::copy_n(x.samples.begin(), std::min(length, x.size()), buf.begin());
  RealFft fft(length);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(buf, spec);
  std::vector<double> mag(spec.size());
  std::transform(spec.begin(), spec.end(), mag.begin(),
                 [](std::complex<double> z) { return std::abs(z); });
  return mag;
}

double OverlayDistance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DomainError("overlay vectors differ in length");
  double aa = 0.0;
  double bb = 0.0;
  double dd = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa += a[i] * a[i];
    bb += b[i] * b[i];
    dd += (a[i] - b[i]) * (a[i] - b[i]);
  }
  const double scale = std::sqrt(std::max(aa, bb));
  if (scale == 0.0) return 0.0;
  return std::sqrt(dd) / scale;
}

ConvergenceTrace MakeConvergenceTrace(Algorithm algo, const ReconstructionResult& result,
                                      std::size_t overlay_length) {
  ConvergenceTrace trace;
  trace.algo = algo;
  trace.iterations = static_cast<int>(result.residual_trace.size());
  trace.alpha = algo == Algorithm::kFgla ? result.params.alpha : 0.0;
  trace.residuals = result.residual_trace;
  trace.fft_overlay = FftOverlay(result.waveform, overlay_length);
  return trace;
}

TimingStats SummarizeTimings(const std::vector<double>& samples_ms) {
  if (samples_ms.empty()) throw DomainError("no timing samples");
  TimingStats stats;
  stats.runs = static_cast<int>(samples_ms.size());
  const auto [lo, hi] = std::minmax_element(samples_ms.begin(), samples_ms.end());
  stats.min_ms = *lo;
  stats.max_ms = *hi;
  const double n = static_cast<double>(samples_ms.size());
  stats.mean_ms = std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) / n;
  // Summation rounding can push the mean a hair outside [min, max].
  stats.mean_ms = std::clamp(stats.mean_ms, stats.min_ms, stats.max_ms);
  double var = 0.0;
  for (double v : samples_ms) var += (v - stats.mean_ms) * (v - stats.mean_ms);
  stats.stddev_ms = std::sqrt(var / n);
  return stats;
}

TimingStats TimeSynthesis(const std::function<void()>& task, int repeats) {
  if (repeats < 1) throw InvalidParamError("repeats must be >= 1");
  using Clock = std::chrono::steady_clock;
  task();  // warm-up
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    task();
    samples.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  return SummarizeTimings(samples);
}

}  // namespace phasefast
