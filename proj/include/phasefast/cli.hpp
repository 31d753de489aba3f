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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "phasefast/metrics.hpp"
#include "phasefast/reconstruction.hpp"

namespace phasefast::cli {

// Stable across subcommands.
enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitValidation = 2 };

struct BenchRecord {
  std::string clip_id;
  Algorithm algo = Algorithm::kGla;
  int iterations = 0;
  double alpha = 0.0;
  TimingStats timing;
  double final_spectral_convergence = 0.0;
  double snr_db = 0.0;
};

struct BenchReport {
  int repeats = 0;
  std::vector<BenchRecord> records;
  // 100 * (1 - mean_fgla / mean_gla), means taken over clips that have both
  // a GLA and an FGLA record.
  double mean_delay_reduction_pct = 0.0;
  double mean_gla_ms = 0.0;
  double mean_fgla_ms = 0.0;
  int paired_clips = 0;
};

// Fills the aggregate fields of `report` from its records.
void ComputeAggregate(BenchReport& report);

std::string BenchReportToJson(const BenchReport& report);
BenchReport BenchReportFromJson(std::string_view text);

// "gla:60" style token.
struct AlgoToken {
  Algorithm algo = Algorithm::kGla;
  int iterations = 0;
  std::string text;
};

// Comma-separated tokens. Throws InvalidParamError on a malformed token.
std::vector<AlgoToken> ParseAlgoTokens(std::string_view list);

// Sorted *.wav files of a directory.
std::vector<std::filesystem::path> ListCorpus(const std::filesystem::path& dir);

// Entry point of the phasefast tool. argv[0] is the program name.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasefast::cli
