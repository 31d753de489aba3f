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

// Generates the bundled test corpus: five deterministic speech-like clips
// (harmonic voiced syllables with moving formants, fricative noise, pauses)
// at 20 kHz, of different lengths.
//
//   make_corpus <output-dir>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "phasefast/wav.hpp"

namespace {

constexpr double kRate = 20000.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vowel {
  std::array<double, 3> freq;
  std::array<double, 3> bandwidth;
  std::array<double, 3> gain;
};

// Rough adult formant targets for /a/, /i/, /u/, /e/, /o/.
constexpr std::array<Vowel, 5> kVowels{{
    {{730, 1090, 2440}, {90, 110, 170}, {1.0, 0.6, 0.25}},
    {{270, 2290, 3010}, {60, 100, 150}, {1.0, 0.35, 0.3}},
    {{300, 870, 2240}, {60, 90, 150}, {1.0, 0.45, 0.15}},
    {{530, 1840, 2480}, {70, 100, 160}, {1.0, 0.5, 0.3}},
    {{570, 840, 2410}, {80, 90, 160}, {1.0, 0.7, 0.2}},
}};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Box-Muller, keeps the corpus reproducible across standard libraries.
  double Gaussian() {
    const double u = std::max(Uniform(), 1e-300);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * Uniform());
  }

 private:
  std::mt19937_64 engine_;
};

struct Segment {
  enum Kind { kVoiced, kFricative, kPause } kind;
  std::size_t begin;
  std::size_t end;
  int vowel;
  double f0_start;
  double f0_end;
};

double Resonance(double f, double center, double bandwidth) {
  const double d = (f - center) / bandwidth;
  return 1.0 / (1.0 + d * d);
}

std::vector<double> MakeClip(double seconds, double base_f0, std::uint64_t seed) {
  Rng rng(seed);
  const auto length = static_cast<std::size_t>(seconds * kRate);

  // Lay out syllables, fricatives and pauses across the clip.
  std::vector<Segment> segments;
  std::size_t pos = static_cast<std::size_t>(rng.Uniform(0.03, 0.08) * kRate);
  double f0 = base_f0 * rng.Uniform(1.05, 1.15);
  while (pos < length) {
    const double roll = rng.Uniform();
    Segment seg{};
    if (roll < 0.18) {
      seg.kind = Segment::kFricative;
      seg.begin = pos;
      seg.end = pos + static_cast<std::size_t>(rng.Uniform(0.05, 0.12) * kRate);
    } else if (roll < 0.26) {
      seg.kind = Segment::kPause;
      seg.begin = pos;
      seg.end = pos + static_cast<std::size_t>(rng.Uniform(0.06, 0.15) * kRate);
    } else {
      seg.kind = Segment::kVoiced;
      seg.begin = pos;
      seg.end = pos + static_cast<std::size_t>(rng.Uniform(0.14, 0.32) * kRate);
      seg.vowel = static_cast<int>(rng.Uniform() * kVowels.size());
      seg.f0_start = f0 * rng.Uniform(0.97, 1.08);
      // Sentence-level declination.
      f0 = std::max(0.75 * base_f0, f0 * rng.Uniform(0.93, 1.0));
      seg.f0_end = f0;
    }
    seg.end = std::min(seg.end, length);
    segments.push_back(seg);
    pos = seg.end;
  }

  std::vector<double> x(length, 0.0);
  std::array<double, 64> phase{};
  double hp_prev = 0.0;
  for (std::size_t si = 0; si < segments.size(); ++si) {
    const Segment& seg = segments[si];
    const double dur = static_cast<double>(seg.end - seg.begin);
    if (dur <= 0) continue;
    if (seg.kind == Segment::kVoiced) {
      const Vowel& v = kVowels[static_cast<std::size_t>(seg.vowel)];
      // Glide from the previous voiced target over the first 40 ms.
      const Vowel* prev = nullptr;
      for (std::size_t k = si; k-- > 0;) {
        if (segments[k].kind == Segment::kVoiced) {
          prev = &kVowels[static_cast<std::size_t>(segments[k].vowel)];
          break;
        }
      }
      const double glide = 0.04 * kRate;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        const double u = static_cast<double>(i - seg.begin) / dur;
        const double f = seg.f0_start + (seg.f0_end - seg.f0_start) * u +
                         0.01 * base_f0 * std::sin(kTwoPi * 5.5 * static_cast<double>(i) / kRate);
        const double mix = prev ? std::min(1.0, static_cast<double>(i - seg.begin) / glide) : 1.0;
        const double env = std::pow(std::sin(std::numbers::pi * u), 0.6);
        double sample = 0.0;
        const int harmonics = std::min<int>(63, static_cast<int>(4800.0 / f));
        for (int h = 1; h <= harmonics; ++h) {
          const double fh = h * f;
          phase[h] += kTwoPi * fh / kRate;
          if (phase[h] > kTwoPi) phase[h] -= kTwoPi;
          double shape = 0.02;
          for (int k = 0; k < 3; ++k) {
            const double fc = prev ? prev->freq[k] + mix * (v.freq[k] - prev->freq[k]) : v.freq[k];
            shape += v.gain[k] * Resonance(fh, fc, v.bandwidth[k]);
          }
          sample += shape / std::pow(h, 0.7) * std::sin(phase[h]);
        }
        x[i] += env * sample;
      }
    } else if (seg.kind == Segment::kFricative) {
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        const double u = static_cast<double>(i - seg.begin) / dur;
        const double white = rng.Gaussian();
        const double hp = white - 0.85 * hp_prev;  // crude high-pass tilt
        hp_prev = white;
        x[i] += 0.25 * std::sin(std::numbers::pi * u) * hp;
      }
    }
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  for (double& v : x) v = 0.7 * v / peak + 2e-4 * rng.Gaussian();
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_corpus <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  struct Spec {
    const char* name;
    double seconds;
    double f0;
  };
  const std::array<Spec, 5> clips{{
      {"clip1_short", 1.6, 120.0},
      {"clip2_medium", 2.4, 210.0},
      {"clip3_medium", 3.0, 140.0},
      {"clip4_long", 3.4, 185.0},
      {"clip5_longest", 4.8, 105.0},
  }};
  std::uint64_t seed = 20000;
  for (const Spec& clip : clips) {
    phasefast::WavFile wav;
    wav.signal.sample_rate = kRate;
    wav.signal.samples = MakeClip(clip.seconds, clip.f0, seed++);
    const auto path = dir / (std::string(clip.name) + ".wav");
    phasefast::SaveWav(path, wav);
    std::cout << path.string() << " " << clip.seconds << " s\n";
  }
  return 0;
}
