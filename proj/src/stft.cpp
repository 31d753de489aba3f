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

#include "phasefast/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace phasefast {

constexpr double kEnvelopeFloor = 1e-12;
constexpr double kColaTolerance = 1e-10;

StftConfig StftConfig::ForFrameShift(double sample_rate, double hop_ms) {
  if (!(sample_rate > 0.0) || !(hop_ms > 0.0)) {
    throw ConfigError("sample rate and frame shift must be positive");
  }
  StftConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.hop_length = static_cast<std::size_t>(std::lround(hop_ms * 1e-3 * sample_rate));
  if (cfg.hop_length == 0) throw ConfigError("frame shift rounds to zero samples");
  cfg.window_length = 4 * cfg.hop_length;
  cfg.fft_length = NextPowerOfTwo(cfg.window_length);
  return cfg;
}

void StftConfig::Validate() const {
  std::ostringstream msg;
  if (window_length < 2) {
    msg << "window_length must be >= 2, got " << window_length;
  } else if (hop_length == 0 || hop_length > window_length) {
    msg << "hop_length must satisfy 0 < hop <= window (" << window_length
        << "), got " << hop_length;
  } else if (window_length > fft_length) {
    msg << "fft_length (" << fft_length << ") must be >= window_length ("
        << window_length << ")";
  } else if (fft_length % 2 != 0) {
    msg << "fft_length must be even, got " << fft_length;
  } else if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    msg << "sample_rate must be positive, got " << sample_rate;
  } else {
    return;
  }
  throw ConfigError(msg.str());
}

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void CheckFinite(const Signal& x) {
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    if (!std::isfinite(x.samples[i])) {
      throw DomainError("signal sample " + std::to_string(i) + " is not finite");
    }
  }
}

void CheckMagnitudes(const MagnitudeSpectrogram& s) {
  for (double v : s.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("magnitude spectrogram entries must be finite and >= 0");
    }
  }
}

std::string ToString(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann:
      return "hann";
  }
  return "unknown";
}

std::vector<double> MakeWindow(WindowKind kind, std::size_t length) {
  if (length < 2) {
    throw ConfigError("window length must be >= 2, got " + std::to_string(length));
  }
  std::vector<double> w(length);
  switch (kind) {
    case WindowKind::kHann:
      for (std::size_t n = 0; n < length; ++n) {
        w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                    static_cast<double>(length));
      }
      break;
  }
  return w;
}

ColaReport ValidateCola(const StftConfig& config) {
  ColaReport report;
  report.window_length = config.window_length;
  report.hop_length = config.hop_length;
  if (config.window_length < 2 || config.hop_length == 0) return report;

  const std::vector<double> w = MakeWindow(config.window, config.window_length);
  std::vector<double> envelope(config.hop_length, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    envelope[j % config.hop_length] += w[j] * w[j];
  }
  const auto [lo, hi] = std::minmax_element(envelope.begin(), envelope.end());
  report.min_envelope = *lo;
  report.max_envelope = *hi;
  report.deviation = *hi > 0.0 ? 1.0 - *lo / *hi : 1.0;
  report.ok = report.deviation < kColaTolerance;
  return report;
}

namespace detail {

StftKernel::StftKernel(const StftConfig& config, std::size_t signal_length)
    : config_(config),
      signal_length_(signal_length),
      frames_(config.frames(signal_length)),
      fft_((config.Validate(), config.fft_length)),
      envelope_(signal_length, 0.0),
      frame_buf_(config.fft_length, 0.0),
      spec_buf_(config.bins()),
      padded_(signal_length + config.window_length, 0.0) {
  window_ = MakeWindow(config.window, config.window_length);

  const std::size_t hop = config.hop_length;
  const std::size_t left = config.left_pad();
  const auto win = static_cast<std::ptrdiff_t>(window_.size());
  for (std::size_t i = 0; i < signal_length; ++i) {
    // Frames n with n*hop <= left + i < n*hop + window.
    const std::size_t pos = left + i;
    const std::size_t last = std::min(pos / hop, frames_ - 1);
    double acc = 0.0;
    for (std::ptrdiff_t n = static_cast<std::ptrdiff_t>(last); n >= 0; --n) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(pos) - n * static_cast<std::ptrdiff_t>(hop);
      if (j >= win) break;
      acc += window_[j] * window_[j];
    }
    envelope_[i] = acc;
    if (invertible_ && acc < kEnvelopeFloor) {
      invertible_ = false;
      first_bad_ = i;
      first_bad_value_ = acc;
    }
  }
}

void StftKernel::Analyze(std::span<const double> x, ComplexSpectrogram& out) {
  if (x.size() != signal_length_) {
    throw DomainError("StftKernel::Analyze: signal length mismatch");
  }
  const std::size_t hop = config_.hop_length;
  const std::size_t win = window_.size();
  std::fill(padded_.begin(), padded_.end(), 0.0);
  std::copy(x.begin(), x.end(), padded_.begin() + static_cast<std::ptrdiff_t>(config_.left_pad()));
  for (std::size_t n = 0; n < frames_; ++n) {
    const double* src = padded_.data() + n * hop;
    for (std::size_t j = 0; j < win; ++j) frame_buf_[j] = src[j] * window_[j];
    std::fill(frame_buf_.begin() + static_cast<std::ptrdiff_t>(win), frame_buf_.end(), 0.0);
    fft_.Forward(frame_buf_, out.frame(n));
  }
}

void StftKernel::Synthesize(const ComplexSpectrogram& c, std::span<double> out) {
  if (!invertible_) {
    std::ostringstream msg;
    msg << "squared-window envelope is " << first_bad_value_ << " at sample "
        << first_bad_ << " (window " << config_.window_length << ", hop "
        << config_.hop_length << "); the framing is not invertible";
    throw NonInvertibleError(msg.str());
  }
  if (c.frames() != frames_ || c.bins() != config_.bins() || out.size() != signal_length_) {
    throw DomainError("StftKernel::Synthesize: shape mismatch");
  }
  const std::size_t hop = config_.hop_length;
  const std::size_t win = window_.size();
  std::fill(padded_.begin(), padded_.end(), 0.0);
  for (std::size_t n = 0; n < frames_; ++n) {
    const auto frame = c.frame(n);
    std::copy(frame.begin(), frame.end(), spec_buf_.begin());
    fft_.Inverse(spec_buf_, frame_buf_);
    double* dst = padded_.data() + n * hop;
    for (std::size_t j = 0; j < win; ++j) dst[j] += frame_buf_[j] * window_[j];
  }
  const double* src = padded_.data() + config_.left_pad();
  for (std::size_t i = 0; i < signal_length_; ++i) out[i] = src[i] / envelope_[i];
}

}  // namespace detail

ComplexSpectrogram Analyze(const Signal& x, const StftConfig& config) {
  config.Validate();
  if (x.samples.empty()) throw DomainError("cannot analyze an empty signal");
  if (x.sample_rate != config.sample_rate) {
    std::ostringstream msg;
    msg << "signal sample rate " << x.sample_rate
        << " Hz does not match STFT config sample rate " << config.sample_rate << " Hz";
    throw ConfigError(msg.str());
  }
  CheckFinite(x);
  detail::StftKernel kernel(config, x.size());
  ComplexSpectrogram out(config, x.size());
  kernel.Analyze(x.samples, out);
  return out;
}

Signal Synthesize(const ComplexSpectrogram& c, std::size_t target_length) {
  const StftConfig& config = c.config();
  config.Validate();
  if (c.bins() != config.bins() || c.frames() == 0) {
    throw DomainError("spectrogram dimensions do not match its config");
  }
  // Longest signal whose frames still fit in c.
  const std::size_t max_length = c.frames() * config.hop_length - 1;
  if (target_length > max_length) {
    throw DomainError("target length " + std::to_string(target_length) +
                      " exceeds the span covered by " + std::to_string(c.frames()) +
                      " frames");
  }
  Signal x{std::vector<double>(target_length), config.sample_rate};
  if (target_length == 0) return x;
  if (config.frames(target_length) == c.frames()) {
    detail::StftKernel kernel(config, target_length);
    kernel.Synthesize(c, x.samples);
    return x;
  }
  // Fewer samples than c covers: synthesize the full span and trim.
  const std::size_t full = max_length;
  detail::StftKernel kernel(config, full);
  std::vector<double> tmp(full);
  kernel.Synthesize(c, tmp);
  std::copy_n(tmp.begin(), target_length, x.samples.begin());
  return x;
}

Signal Synthesize(const ComplexSpectrogram& c) {
  return Synthesize(c, c.signal_length());
}

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& c) {
  MagnitudeSpectrogram s(c.config(), c.signal_length());
  auto src = c.data();
  auto dst = s.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return s;
}

}  // namespace phasefast
