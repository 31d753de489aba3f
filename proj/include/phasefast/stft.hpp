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
#include <string>
#include <vector>

#include "phasefast/errors.hpp"
#include "phasefast/fft.hpp"

namespace phasefast {

enum class WindowKind { kHann };
enum class Padding { kZeroEdge };

// Framing of the Gabor/STFT transform.
//
// The signal is zero-padded by window_length/2 samples on the left and the
// remainder of window_length on the right, so a length-L signal has padded
// length P = L + window_length and N = 1 + floor(L / hop_length) frames.
// Frame n covers padded samples [n * hop, n * hop + window_length).
struct StftConfig {
  WindowKind window = WindowKind::kHann;
  std::size_t window_length = 1000;
  std::size_t hop_length = 250;
  std::size_t fft_length = 1024;
  Padding padding = Padding::kZeroEdge;
  double sample_rate = 20000.0;

  // Default framing for a sample rate: hop = round(hop_ms * rate), window =
  // 4 * hop, fft = next power of two >= window.
  static StftConfig ForFrameShift(double sample_rate, double hop_ms = 12.5);

  std::size_t bins() const noexcept { return fft_length / 2 + 1; }
  std::size_t frames(std::size_t signal_length) const noexcept {
    return 1 + signal_length / hop_length;
  }
  std::size_t left_pad() const noexcept { return window_length / 2; }

  // Throws ConfigError if an invariant is broken:
  // 2 <= window, 0 < hop <= window <= fft, fft even, sample_rate > 0.
  void Validate() const;

  bool operator==(const StftConfig&) const = default;
};

std::size_t NextPowerOfTwo(std::size_t n);

struct Signal {
  std::vector<double> samples;
  double sample_rate = 20000.0;

  std::size_t size() const noexcept { return samples.size(); }
  bool operator==(const Signal&) const = default;
};

// Throws DomainError on NaN/Inf samples.
void CheckFinite(const Signal& x);

// bins x frames matrix tied to the framing that produced it. Storage is
// frame-major (each frame's bins are contiguous); at(bin, frame) hides that.
template <typename T>
class Spectrogram {
 public:
  Spectrogram() = default;

  // Zero-filled spectrogram for a signal of signal_length samples.
  Spectrogram(const StftConfig& config, std::size_t signal_length)
      : config_(config),
        signal_length_(signal_length),
        bins_(config.bins()),
        frames_(config.frames(signal_length)),
        data_(bins_ * frames_) {}

  const StftConfig& config() const noexcept { return config_; }
  std::size_t signal_length() const noexcept { return signal_length_; }
  std::size_t bins() const noexcept { return bins_; }
  std::size_t frames() const noexcept { return frames_; }

  T& at(std::size_t bin, std::size_t frame) {
    return data_[frame * bins_ + bin];
  }
  const T& at(std::size_t bin, std::size_t frame) const {
    return data_[frame * bins_ + bin];
  }

  std::span<T> frame(std::size_t n) {
    return std::span<T>(data_).subspan(n * bins_, bins_);
  }
  std::span<const T> frame(std::size_t n) const {
    return std::span<const T>(data_).subspan(n * bins_, bins_);
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  bool SameShape(const Spectrogram& other) const noexcept {
    return config_ == other.config_ && bins_ == other.bins_ &&
           frames_ == other.frames_;
  }
  template <typename U>
  bool SameShape(const Spectrogram<U>& other) const noexcept {
    return config_ == other.config() && bins_ == other.bins() &&
           frames_ == other.frames();
  }

  bool operator==(const Spectrogram&) const = default;

 private:
  StftConfig config_;
  std::size_t signal_length_ = 0;
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::vector<T> data_;
};

using ComplexSpectrogram = Spectrogram<std::complex<double>>;
using MagnitudeSpectrogram = Spectrogram<double>;

// Throws DomainError unless every entry is finite and non-negative.
void CheckMagnitudes(const MagnitudeSpectrogram& s);

// Periodic window: hann -> w[n] = 0.5 - 0.5 cos(2 pi n / length).
std::vector<double> MakeWindow(WindowKind kind, std::size_t length);

// Analysis transform G: pad, frame, window, real DFT.
ComplexSpectrogram Analyze(const Signal& x, const StftConfig& config);

// Least-squares inverse G* of Analyze: inverse DFT of each frame, synthesis
// window, overlap-add and division by the summed squared window. Returns the
// target_length samples following the left padding. Throws
// NonInvertibleError if the envelope drops below 1e-12 at a retained sample.
Signal Synthesize(const ComplexSpectrogram& c, std::size_t target_length);
Signal Synthesize(const ComplexSpectrogram& c);

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& c);

struct ColaReport {
  bool ok = false;
  std::size_t window_length = 0;
  std::size_t hop_length = 0;
  double min_envelope = 0.0;
  double max_envelope = 0.0;
  // 1 - min/max of the steady-state squared-window envelope.
  double deviation = 1.0;
};

// Squared-window constant-overlap-add check over one hop period.
ColaReport ValidateCola(const StftConfig& config);

std::string ToString(WindowKind kind);

namespace detail {

// Precomputed framing state shared by Analyze/Synthesize and the
// reconstruction loops, so repeated projections do not rebuild the window
// and envelope each time.
class StftKernel {
 public:
  StftKernel(const StftConfig& config, std::size_t signal_length);

  const StftConfig& config() const noexcept { return config_; }
  std::size_t signal_length() const noexcept { return signal_length_; }
  std::size_t frames() const noexcept { return frames_; }

  void Analyze(std::span<const double> x, ComplexSpectrogram& out);
  // Writes signal_length samples into out. `c` is left unchanged.
  void Synthesize(const ComplexSpectrogram& c, std::span<double> out);

 private:
  StftConfig config_;
  std::size_t signal_length_;
  std::size_t frames_;
  std::vector<double> window_;
  RealFft fft_;
  std::vector<double> envelope_;  // over retained samples only
  bool invertible_ = true;
  std::size_t first_bad_ = 0;
  double first_bad_value_ = 0.0;
  std::vector<double> frame_buf_;
  std::vector<std::complex<double>> spec_buf_;
  std::vector<double> padded_;
};

}  // namespace detail
}  // namespace phasefast
