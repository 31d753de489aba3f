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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "oracles.hpp"
#include "phasefast/metrics.hpp"
#include "phasefast/wav.hpp"

namespace phasefast {
namespace {

using testing::SmallConfig;

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

ComplexSpectrogram RandomComplex(const StftConfig& cfg, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  ComplexSpectrogram c(cfg, length);
  for (auto& v : c.data()) v = {dist(rng), dist(rng)};
  return c;
}

// 800 Hz at 20 kHz repeats exactly every 25 samples, so the tone is coherent
// with the 250-sample hop. A numpy alternating-projection reference reaches
// spectral convergence 1.4e-3 (GLA-60) and 1.3e-3 (FGLA-60, alpha 0.2) from
// zero phase on this input. Tones that drift against the hop (440 Hz) stall
// near 0.15 from a zero-phase start in both implementations.
MagnitudeSpectrogram SineMagnitudes() {
  const StftConfig cfg = StftConfig::ForFrameShift(20000.0);
  return Magnitude(Analyze(testing::Sine(20000, cfg.sample_rate, 800.0), cfg));
}

ReconstructionParams Params(int iterations, double alpha = 0.2) {
  ReconstructionParams p;
  p.iterations = iterations;
  p.alpha = alpha;
  return p;
}

TEST(ProjectMagnitudeTest, PointAlreadyOnTheSetIsUnchanged) {
  const ComplexSpectrogram c = RandomComplex(SmallConfig(), 200, 1);
  const ComplexSpectrogram out = ProjectMagnitude(c, Magnitude(c));
  for (std::size_t i = 0; i < c.data().size(); ++i) {
    EXPECT_LE(std::abs(out.data()[i] - c.data()[i]), 1e-12 * std::abs(c.data()[i]));
  }
}

TEST(ProjectMagnitudeTest, ZeroCoefficientTakesZeroPhase) {
  ComplexSpectrogram c(SmallConfig(), 100);
  MagnitudeSpectrogram s(SmallConfig(), 100);
  s.at(4, 2) = 2.5;
  const ComplexSpectrogram out = ProjectMagnitude(c, s);
  EXPECT_EQ(out.at(4, 2), std::complex<double>(2.5, 0.0));
}

TEST(ProjectMagnitudeTest, RescalesModulusKeepingAngle) {
  ComplexSpectrogram c(SmallConfig(), 100);
  MagnitudeSpectrogram s(SmallConfig(), 100);
  c.at(1, 1) = {3.0, 4.0};
  s.at(1, 1) = 10.0;
  const std::complex<double> oracle = std::polar(10.0, std::atan2(4.0, 3.0));
  const ComplexSpectrogram out = ProjectMagnitude(c, s);
  EXPECT_NEAR(out.at(1, 1).real(), 6.0, 1e-12);
  EXPECT_NEAR(out.at(1, 1).imag(), 8.0, 1e-12);
  EXPECT_NEAR(std::abs(out.at(1, 1) - oracle), 0.0, 1e-12);
}

TEST(ProjectMagnitudeTest, ShapeMismatchIsDomainError) {
  const ComplexSpectrogram c(SmallConfig(), 100);
  const MagnitudeSpectrogram s(SmallConfig(), 300);
  EXPECT_THROW(ProjectMagnitude(c, s), DomainError);
}

TEST(ProjectMagnitudeTest, ExactModulusAndIdempotence) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexSpectrogram c = RandomComplex(SmallConfig(), 150, seed);
    const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 150, seed + 1000);
    const ComplexSpectrogram once = ProjectMagnitude(c, s);
    for (std::size_t i = 0; i < s.data().size(); ++i) {
      EXPECT_LE(std::abs(std::abs(once.data()[i]) - s.data()[i]), 1e-12 * s.data()[i]);
    }
    const ComplexSpectrogram twice = ProjectMagnitude(once, s);
    for (std::size_t i = 0; i < once.data().size(); ++i) {
      ASSERT_EQ(once.data()[i], twice.data()[i]) << i;
    }
  }
}

TEST(ProjectConsistentTest, ConsistentSpectrogramIsFixed) {
  const StftConfig cfg = StftConfig::ForFrameShift(20000.0);
  const ComplexSpectrogram c = Analyze(testing::WhiteNoise(8000, cfg.sample_rate, 3), cfg);
  EXPECT_LE(testing::RelativeDiff(c.data(), ProjectConsistent(c).data()), 1e-6);
}

TEST(ProjectConsistentTest, ZeroStaysZero) {
  const ComplexSpectrogram c(SmallConfig(), 120);
  const ComplexSpectrogram out = ProjectConsistent(c);
  for (auto v : out.data()) EXPECT_EQ(v, std::complex<double>(0.0, 0.0));
}

TEST(ProjectConsistentTest, IdempotentOnRandomCoefficients) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexSpectrogram c = RandomComplex(StftConfig::ForFrameShift(20000.0), 5000, seed);
    const ComplexSpectrogram once = ProjectConsistent(c);
    const ComplexSpectrogram twice = ProjectConsistent(once);
    EXPECT_LT(testing::RelativeDiff(once.data(), twice.data()), 1e-9);
    // A random matrix is not consistent, so the first projection moved it.
    EXPECT_GT(testing::RelativeDiff(c.data(), once.data()), 0.1);
  }
}

TEST(ProjectConsistentTest, NonInvertibleFramingFails) {
  StftConfig cfg = SmallConfig();
  cfg.hop_length = cfg.window_length;
  const ComplexSpectrogram c = RandomComplex(cfg, 400, 1);
  EXPECT_THROW(ProjectConsistent(c), NonInvertibleError);
}

TEST(InitCoefficientsTest, ZeroPhaseCopiesMagnitudes) {
  MagnitudeSpectrogram s(SmallConfig(), 100);
  for (double& v : s.data()) v = 1.0;
  const ComplexSpectrogram c = InitCoefficients(s, {InitKind::kZeroPhase, 12345});
  for (auto v : c.data()) EXPECT_EQ(v, std::complex<double>(1.0, 0.0));
}

TEST(InitCoefficientsTest, RandomPhaseIsSeededAndKeepsModulus) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 300, 4);
  const ComplexSpectrogram a = InitCoefficients(s, {InitKind::kRandomPhase, 7});
  const ComplexSpectrogram b = InitCoefficients(s, {InitKind::kRandomPhase, 7});
  const ComplexSpectrogram other = InitCoefficients(s, {InitKind::kRandomPhase, 8});
  EXPECT_EQ(std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()), 0);
  EXPECT_NE(std::memcmp(a.data().data(), other.data().data(), a.data().size_bytes()), 0);
  for (std::size_t i = 0; i < s.data().size(); ++i) {
    EXPECT_NEAR(std::abs(a.data()[i]), s.data()[i], 4e-16 * s.data()[i]);
  }
}

TEST(InitCoefficientsTest, RandomPhasesDrawnBinMajor) {
  // First draw lands on (bin 0, frame 0), second on (bin 0, frame 1).
  MagnitudeSpectrogram s(SmallConfig(), 100);
  for (double& v : s.data()) v = 1.0;
  const ComplexSpectrogram c = InitCoefficients(s, {InitKind::kRandomPhase, 99});
  std::mt19937_64 rng(99);
  const double u0 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  EXPECT_NEAR(std::arg(c.at(0, 0) * std::polar(1.0, -2.0 * M_PI * u0)), 0.0, 1e-12);
  EXPECT_NEAR(std::arg(c.at(0, 1) * std::polar(1.0, -2.0 * M_PI * u1)), 0.0, 1e-12);
}

TEST(GlaTest, MatchesNaiveReferenceImplementation) {
  const StftConfig cfg = SmallConfig();
  const Signal x = testing::WhiteNoise(200, cfg.sample_rate, 17);
  const MagnitudeSpectrogram s = Magnitude(Analyze(x, cfg));
  std::vector<std::vector<double>> frames;
  for (std::size_t n = 0; n < s.frames(); ++n) frames.emplace_back(s.frame(n).begin(), s.frame(n).end());

  for (double alpha : {0.0, 0.2, 0.9}) {
    const testing::ReferenceRun ref = testing::ReferenceGriffinLim(frames, cfg, x.size(), 8, alpha);
    const ReconstructionResult ours = alpha == 0.0 ? Gla(s, Params(8)) : Fgla(s, Params(8, alpha));
    ASSERT_EQ(ours.residual_trace.size(), ref.residuals.size());
    for (std::size_t i = 0; i < ref.residuals.size(); ++i) {
      EXPECT_NEAR(ours.residual_trace[i], ref.residuals[i], 1e-9) << "alpha " << alpha;
    }
    EXPECT_LE(testing::RelativeDiff(ref.waveform, ours.waveform.samples), 1e-9);
  }
}

TEST(GlaTest, SineConvergesWithinSixtyIterations) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  const ReconstructionResult r = Gla(s, Params(60));
  EXPECT_LE(SpectralConvergence(s, r.waveform), 1e-2);
}

TEST(GlaTest, SingleIterationEqualsFglaWithoutMomentum) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  const ReconstructionResult g = Gla(s, Params(1));
  const ReconstructionResult f = Fgla(s, Params(1, 0.0));
  EXPECT_TRUE(BitEqual(g.waveform.samples, f.waveform.samples));
  EXPECT_TRUE(BitEqual(g.residual_trace, f.residual_trace));
}

TEST(GlaTest, ResidualNeverIncreases) {
  std::vector<MagnitudeSpectrogram> inputs;
  for (const auto& clip : testing::CorpusClips()) {
    const WavFile wav = LoadWav(clip);
    inputs.push_back(Magnitude(Analyze(wav.signal, StftConfig::ForFrameShift(wav.signal.sample_rate))));
    break;  // the acceptance suite covers every clip
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    inputs.push_back(testing::RandomMagnitudes(StftConfig::ForFrameShift(20000.0), 3000, seed));
  }
  for (const MagnitudeSpectrogram& s : inputs) {
    const ReconstructionResult r = Gla(s, Params(40));
    for (std::size_t i = 1; i < r.residual_trace.size(); ++i) {
      EXPECT_LE(r.residual_trace[i], r.residual_trace[i - 1] + 1e-9) << "step " << i;
    }
  }
}

TEST(GlaTest, ObserverSeesEveryIterationInOrder) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 300, 2);
  std::vector<int> seen;
  std::vector<double> residuals;
  double last_elapsed = -1.0;
  const ReconstructionResult r = Gla(s, Params(7), [&](int i, double residual, double elapsed) {
    seen.push_back(i);
    residuals.push_back(residual);
    EXPECT_GE(elapsed, last_elapsed);
    last_elapsed = elapsed;
  });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(residuals, r.residual_trace);
}

TEST(GlaTest, ObserverFailureAbortsWithDistinctError) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 300, 2);
  int calls = 0;
  const auto observer = [&](int i, double, double) {
    ++calls;
    if (i == 3) throw std::runtime_error("stop");
  };
  EXPECT_THROW(Gla(s, Params(10), observer), ObserverError);
  EXPECT_EQ(calls, 3);
  EXPECT_THROW(Fgla(s, Params(10), observer), ObserverError);
}

TEST(GlaTest, TraceAndTimingInvariants) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  const ReconstructionResult r = Gla(s, Params(12));
  EXPECT_EQ(r.residual_trace.size(), 12u);
  EXPECT_EQ(r.iter_times_ms.size(), 12u);
  const double sum = std::accumulate(r.iter_times_ms.begin(), r.iter_times_ms.end(), 0.0);
  EXPECT_GE(r.total_time_ms, sum);
  EXPECT_EQ(r.params.iterations, 12);
  EXPECT_EQ(r.waveform.size(), s.signal_length());
}

TEST(GlaTest, RejectsZeroIterations) {
  EXPECT_THROW(Gla(SineMagnitudes(), Params(0)), InvalidParamError);
  EXPECT_THROW(Fgla(SineMagnitudes(), Params(0)), InvalidParamError);
}

TEST(GlaTest, ToleranceStopsEarly) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  ReconstructionParams p = Params(200);
  p.tolerance = 0.05;
  const ReconstructionResult r = Gla(s, p);
  ASSERT_LT(r.residual_trace.size(), 200u);
  EXPECT_LT(r.residual_trace.back(), 0.05);
  for (std::size_t i = 0; i + 1 < r.residual_trace.size(); ++i) EXPECT_GE(r.residual_trace[i], 0.05);
}

TEST(FglaTest, ZeroAlphaReproducesGla) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 257, seed);
    for (InitKind kind : {InitKind::kZeroPhase, InitKind::kRandomPhase}) {
      ReconstructionParams p = Params(static_cast<int>(3 + seed), 0.0);
      p.init = {kind, seed};
      const ReconstructionResult g = Gla(s, p);
      const ReconstructionResult f = Fgla(s, p);
      EXPECT_TRUE(BitEqual(g.residual_trace, f.residual_trace));
      EXPECT_TRUE(BitEqual(g.waveform.samples, f.waveform.samples));
    }
  }
}

TEST(FglaTest, AlphaOutsideUnitIntervalIsRejected) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  for (double alpha : {-0.1, 1.0, 1.5, std::nan("")}) {
    EXPECT_THROW(Fgla(s, Params(5, alpha)), InvalidParamError) << alpha;
  }
}

TEST(FglaTest, ZeroMagnitudesStayAtZero) {
  const MagnitudeSpectrogram s(StftConfig::ForFrameShift(20000.0), 4000);
  const ReconstructionResult r = Fgla(s, Params(10));
  for (double v : r.waveform.samples) EXPECT_EQ(v, 0.0);
  for (double v : r.residual_trace) EXPECT_EQ(v, 0.0);
}

TEST(FglaTest, SineIsConsistentAfterSixtyIterations) {
  const MagnitudeSpectrogram s = SineMagnitudes();
  const ReconstructionResult r = Fgla(s, Params(60));
  EXPECT_LE(SpectralConvergence(s, r.waveform), 1e-2);
}

TEST(FglaTest, MomentumChangesTheIterates) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 300, 9);
  const ReconstructionResult g = Gla(s, Params(10));
  const ReconstructionResult f = Fgla(s, Params(10, 0.5));
  EXPECT_FALSE(BitEqual(g.residual_trace, f.residual_trace));
  // The first iteration has no momentum yet: t_1 = t_0.
  EXPECT_EQ(g.residual_trace[0], f.residual_trace[0]);
}

TEST(ReconstructTest, DispatchesToTheNamedAlgorithm) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(SmallConfig(), 300, 11);
  EXPECT_TRUE(BitEqual(Reconstruct(s, Algorithm::kGla, Params(60)).waveform.samples,
                       Gla(s, Params(60)).waveform.samples));
  EXPECT_TRUE(BitEqual(Reconstruct(s, Algorithm::kFgla, Params(30)).waveform.samples,
                       Fgla(s, Params(30)).waveform.samples));
  EXPECT_EQ(ParseAlgorithm("gla"), Algorithm::kGla);
  EXPECT_EQ(ParseAlgorithm("fgla"), Algorithm::kFgla);
  EXPECT_THROW(ParseAlgorithm("gla2"), InvalidParamError);
  EXPECT_THROW(ParseAlgorithm(""), InvalidParamError);
}

TEST(ReconstructTest, DeterministicAcrossRunsAndThreads) {
  const MagnitudeSpectrogram s = testing::RandomMagnitudes(StftConfig::ForFrameShift(20000.0), 5000, 3);
  ReconstructionParams p = Params(15);
  p.init = {InitKind::kRandomPhase, 42};
  const ReconstructionResult first = Fgla(s, p);
  std::vector<ReconstructionResult> results(3);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t) {
    threads.emplace_back([&, t] { results[t] = Fgla(s, p); });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : results) {
    EXPECT_TRUE(BitEqual(r.waveform.samples, first.waveform.samples));
    EXPECT_TRUE(BitEqual(r.residual_trace, first.residual_trace));
  }
}

}  // namespace
}  // namespace phasefast
