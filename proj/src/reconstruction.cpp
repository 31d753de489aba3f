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

#include "phasefast/reconstruction.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

namespace phasefast {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// |z| without hypot's overflow guards; spectrogram values are far from the
// double range limits and this runs on every coefficient of every iteration.
// A few ulps: the rounding left behind by one rescale plus Modulus itself.
constexpr double kModulusSlack = 8 * std::numeric_limits<double>::epsilon();

inline double Modulus(std::complex<double> z) {
  return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

void CheckShapes(const ComplexSpectrogram& c, const MagnitudeSpectrogram& s) {
  if (!c.SameShape(s)) {
    std::ostringstream msg;
    msg << "coefficient matrix " << c.bins() << "x" << c.frames()
        << " does not match magnitude spectrogram " << s.bins() << "x" << s.frames()
        << " under the same config";
    throw DomainError(msg.str());
  }
}

void ProjectMagnitudeInto(const ComplexSpectrogram& c, const MagnitudeSpectrogram& s,
                          ComplexSpectrogram& out) {
  auto src = c.data();
  auto mag = s.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double a = Modulus(src[i]);
    if (a == 0.0) {
      dst[i] = std::complex<double>(mag[i], 0.0);
    } else if (std::abs(a - mag[i]) <= kModulusSlack * mag[i]) {
      // Already on the target circle up to rounding. Rescaling again would
      // only shuffle the last bits, so projecting twice stays exact.
      dst[i] = src[i];
    } else {
      dst[i] = src[i] * (mag[i] / a);
    }
  }
}

double FrobeniusNorm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double RelativeResidual(const ComplexSpectrogram& t, const MagnitudeSpectrogram& s,
                        double s_norm) {
  if (s_norm == 0.0) return 0.0;
  auto coef = t.data();
  auto mag = s.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    const double d = Modulus(coef[i]) - mag[i];
    acc += d * d;
  }
  return std::sqrt(acc) / s_norm;
}

// Computes t = P_C1(P_C2(c)) with buffers reused across iterations.
class AlternatingProjector {
 public:
  explicit AlternatingProjector(const MagnitudeSpectrogram& s)
      : s_(s),
        kernel_(s.config(), s.signal_length()),
        scratch_(s.config(), s.signal_length()),
        signal_(s.signal_length()) {}

  void Step(const ComplexSpectrogram& c, ComplexSpectrogram& t) {
    ProjectMagnitudeInto(c, s_, scratch_);
    kernel_.Synthesize(scratch_, signal_);
    kernel_.Analyze(signal_, t);
  }

  Signal Waveform(const ComplexSpectrogram& c) {
    Signal x{std::vector<double>(s_.signal_length()), s_.config().sample_rate};
    kernel_.Synthesize(c, x.samples);
    return x;
  }

 private:
  const MagnitudeSpectrogram& s_;
  detail::StftKernel kernel_;
  ComplexSpectrogram scratch_;
  std::vector<double> signal_;
};

void Notify(const IterationObserver& observer, int iteration, double residual,
            double elapsed_ms) {
  if (!observer) return;
  try {
    observer(iteration, residual, elapsed_ms);
  } catch (const std::exception& e) {
    throw ObserverError("observer failed at iteration " + std::to_string(iteration) +
                        ": " + e.what());
  } catch (...) {
    throw ObserverError("observer failed at iteration " + std::to_string(iteration));
  }
}

void CheckInput(const MagnitudeSpectrogram& s) {
  s.config().Validate();
  if (s.signal_length() == 0) throw DomainError("magnitude spectrogram is empty");
  CheckMagnitudes(s);
}

ReconstructionResult Run(const MagnitudeSpectrogram& s, const ReconstructionParams& params,
                         const IterationObserver& observer, bool momentum) {
  // GLA ignores params.alpha.
  const auto start = Clock::now();
  const double s_norm = FrobeniusNorm(s.data());
  const double alpha = params.alpha;

  AlternatingProjector project(s);
  ComplexSpectrogram c = InitCoefficients(s, params.init);
  ComplexSpectrogram t(s.config(), s.signal_length());
  ComplexSpectrogram t_prev;
  if (momentum) {
    t_prev = ComplexSpectrogram(s.config(), s.signal_length());
    project.Step(c, t_prev);
  }

  ReconstructionResult result;
  result.params = params;
  result.residual_trace.reserve(static_cast<std::size_t>(params.iterations));
  result.iter_times_ms.reserve(static_cast<std::size_t>(params.iterations));

  for (int i = 1; i <= params.iterations; ++i) {
    const auto iter_start = Clock::now();
    project.Step(c, t);
    const double residual = RelativeResidual(t, s, s_norm);
    if (momentum) {
      auto tc = t.data();
      auto tp = t_prev.data();
      auto cc = c.data();
      for (std::size_t k = 0; k < tc.size(); ++k) cc[k] = tc[k] + alpha * (tc[k] - tp[k]);
      std::swap(t, t_prev);
    } else {
      std::swap(c, t);
    }
    result.iter_times_ms.push_back(MillisSince(iter_start));
    result.residual_trace.push_back(residual);
    Notify(observer, i, residual, MillisSince(start));
    if (params.tolerance && residual < *params.tolerance) break;
  }

  result.waveform = project.Waveform(c);
  result.total_time_ms = MillisSince(start);
  return result;
}

}  // namespace

void ReconstructionParams::Validate() const {
  if (iterations < 1) {
    throw InvalidParamError("iterations must be >= 1, got " + std::to_string(iterations));
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in [0, 1), got " << alpha;
    throw InvalidParamError(msg.str());
  }
  if (tolerance && !(*tolerance >= 0.0)) {
    throw InvalidParamError("tolerance must be non-negative");
  }
}

Algorithm ParseAlgorithm(std::string_view token) {
  if (token == "gla") return Algorithm::kGla;
  if (token == "fgla") return Algorithm::kFgla;
  throw InvalidParamError("unknown algorithm '" + std::string(token) +
                          "' (expected gla or fgla)");
}

std::string ToString(Algorithm algo) {
  return algo == Algorithm::kGla ? "gla" : "fgla";
}

ComplexSpectrogram ProjectMagnitude(const ComplexSpectrogram& c,
                                    const MagnitudeSpectrogram& s) {
  CheckShapes(c, s);
  ComplexSpectrogram out(c.config(), c.signal_length());
  ProjectMagnitudeInto(c, s, out);
  return out;
}

ComplexSpectrogram ProjectConsistent(const ComplexSpectrogram& c) {
  c.config().Validate();
  if (c.bins() != c.config().bins() || c.signal_length() == 0) {
    throw DomainError("spectrogram dimensions do not match its config");
  }
  detail::StftKernel kernel(c.config(), c.signal_length());
  std::vector<double> x(c.signal_length());
  kernel.Synthesize(c, x);
  ComplexSpectrogram out(c.config(), c.signal_length());
  kernel.Analyze(x, out);
  return out;
}

ComplexSpectrogram InitCoefficients(const MagnitudeSpectrogram& s,
                                    const InitStrategy& strategy) {
  ComplexSpectrogram c(s.config(), s.signal_length());
  switch (strategy.kind) {
    case InitKind::kZeroPhase: {
      auto src = s.data();
      auto dst = c.data();
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = {src[i], 0.0};
      break;
    }
    case InitKind::kRandomPhase: {
      std::mt19937_64 rng(strategy.seed);
      constexpr double kTwoPi = 2.0 * std::numbers::pi;
      for (std::size_t m = 0; m < s.bins(); ++m) {
        for (std::size_t n = 0; n < s.frames(); ++n) {
          // 53 random bits -> uniform [0, 1).
          const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          c.at(m, n) = std::polar(s.at(m, n), kTwoPi * u);
        }
      }
      break;
    }
  }
  return c;
}

ReconstructionResult Gla(const MagnitudeSpectrogram& s, const ReconstructionParams& params,
                         const IterationObserver& observer) {
  if (params.iterations < 1) {
    throw InvalidParamError("iterations must be >= 1, got " +
                            std::to_string(params.iterations));
  }
  CheckInput(s);
  return Run(s, params, observer, /*momentum=*/false);
}

ReconstructionResult Fgla(const MagnitudeSpectrogram& s, const ReconstructionParams& params,
                          const IterationObserver& observer) {
  params.Validate();
  CheckInput(s);
  return Run(s, params, observer, /*momentum=*/true);
}

ReconstructionResult Reconstruct(const MagnitudeSpectrogram& s, Algorithm algo,
                                 const ReconstructionParams& params,
                                 const IterationObserver& observer) {
  switch (algo) {
    case Algorithm::kGla:
      return Gla(s, params, observer);
    case Algorithm::kFgla:
      return Fgla(s, params, observer);
  }
  throw InvalidParamError("unknown algorithm");
}

}  // namespace phasefast
