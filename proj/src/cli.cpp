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

#include "phasefast/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasefast/errors.hpp"
#include "phasefast/spectrogram_io.hpp"
#include "phasefast/stft.hpp"
#include "phasefast/wav.hpp"

namespace phasefast::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kDefaultGlaIterations = 60;
constexpr int kDefaultFglaIterations = 30;
constexpr double kDefaultAlpha = 0.2;
constexpr double kDefaultHopMs = 12.5;
constexpr double kDefaultSampleRate = 20000.0;
constexpr const char* kDefaultConvergenceTokens = "gla:20,gla:30,gla:60,fgla:20,fgla:30,fgla:60";

// Framing flags shared by the subcommands. Zero means "derive the default".
struct FramingOptions {
  double hop_ms = kDefaultHopMs;
  std::size_t hop = 0;
  std::size_t window = 0;
  std::size_t fft = 0;

  void Register(CLI::App& app) {
    app.add_option("--hop-ms", hop_ms, "Frame shift in milliseconds")->capture_default_str();
    app.add_option("--hop", hop, "Frame shift in samples (overrides --hop-ms)");
    app.add_option("--window", window, "Window length in samples (default 4 x hop)");
    app.add_option("--fft", fft, "FFT length (default next power of two >= window)");
  }

  StftConfig Build(double sample_rate) const {
    StftConfig cfg = StftConfig::ForFrameShift(sample_rate, hop_ms);
    if (hop != 0) {
      cfg.hop_length = hop;
      cfg.window_length = 4 * hop;
    }
    if (window != 0) cfg.window_length = window;
    cfg.fft_length = fft != 0 ? fft : NextPowerOfTwo(cfg.window_length);
    cfg.Validate();
    return cfg;
  }
};

struct ParamOptions {
  std::string algo = "fgla";
  int iterations = 0;
  double alpha = kDefaultAlpha;
  std::string init = "zero";
  std::uint64_t seed = 0;
  std::optional<double> tolerance;

  void Register(CLI::App& app) {
    app.add_option("--algo", algo, "gla or fgla")->capture_default_str();
    app.add_option("--iterations", iterations, "Iteration count (default 60 for gla, 30 for fgla)");
    app.add_option("--alpha", alpha, "FGLA momentum weight in [0, 1)")->capture_default_str();
    app.add_option("--init", init, "Initial phase: zero or random")->capture_default_str();
    app.add_option("--seed", seed, "Seed for --init random (PHASEFAST_SEED overrides)");
    app.add_option("--tolerance", tolerance, "Stop early once the residual falls below this");
  }

  ReconstructionParams Build(Algorithm a) const {
    ReconstructionParams p;
    p.iterations = iterations != 0
                       ? iterations
                       : (a == Algorithm::kGla ? kDefaultGlaIterations : kDefaultFglaIterations);
    p.alpha = alpha;
    if (init == "zero") {
      p.init.kind = InitKind::kZeroPhase;
    } else if (init == "random") {
      p.init.kind = InitKind::kRandomPhase;
    } else {
      throw InvalidParamError("--init must be zero or random, got '" + init + "'");
    }
    p.init.seed = seed;
    if (const char* env = std::getenv("PHASEFAST_SEED"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == nullptr || *end != '\0') {
        throw InvalidParamError(std::string("PHASEFAST_SEED is not an integer: ") + env);
      }
      p.init.seed = v;
    }
    p.tolerance = tolerance;
    p.Validate();
    // GLA never reads alpha, but a bad value on the command line is still a mistake.
    return p;
  }
};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string FormatMs(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Writes text with LF endings; throws IoError.
void WriteText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string TraceCsv(const ReconstructionResult& result) {
  std::ostringstream csv;
  csv << "iteration,residual,elapsed_ms\n";
  double elapsed = 0.0;
  for (std::size_t i = 0; i < result.residual_trace.size(); ++i) {
    elapsed += result.iter_times_ms[i];
    csv << (i + 1) << ',' << FormatDouble(result.residual_trace[i]) << ',' << FormatMs(elapsed)
        << '\n';
  }
  return csv.str();
}

bool IsSpectrogramFile(const fs::path& p) { return p.extension() == ".json"; }

struct Input {
  MagnitudeSpectrogram magnitudes;
  std::optional<Signal> signal;
};

Input LoadInput(const fs::path& path, const FramingOptions& framing) {
  if (IsSpectrogramFile(path)) return {LoadMagnitudes(path), std::nullopt};
  WavFile wav = LoadWav(path);
  const StftConfig cfg = framing.Build(wav.signal.sample_rate);
  return {Magnitude(Analyze(wav.signal, cfg)), std::move(wav.signal)};
}

int CmdReconstruct(const fs::path& in_path, const fs::path& out_path,
                   const std::string& trace_path, const FramingOptions& framing,
                   const ParamOptions& options, std::ostream& out) {
  const Algorithm algo = ParseAlgorithm(options.algo);
  const ReconstructionParams params = options.Build(algo);
  const Input input = LoadInput(in_path, framing);
  const ReconstructionResult result = Reconstruct(input.magnitudes, algo, params);
  const std::size_t clipped = SaveWav(out_path, WavFile{result.waveform, 16});
  if (!trace_path.empty()) WriteText(trace_path, TraceCsv(result));

  out << ToString(algo) << " " << result.residual_trace.size() << " iterations";
  if (algo == Algorithm::kFgla) out << " alpha " << params.alpha;
  out << ": residual " << FormatDouble(result.residual_trace.back()) << ", "
      << FormatMs(result.total_time_ms) << " ms";
  if (clipped > 0) out << ", " << clipped << " samples clipped";
  out << "\n";
  return kExitOk;
}

int CmdAnalyze(const fs::path& in_path, const fs::path& out_path, const FramingOptions& framing,
               std::ostream& out) {
  const WavFile wav = LoadWav(in_path);
  const StftConfig cfg = framing.Build(wav.signal.sample_rate);
  const MagnitudeSpectrogram s = Magnitude(Analyze(wav.signal, cfg));
  SaveMagnitudes(out_path, s);
  out << "wrote " << s.bins() << "x" << s.frames() << " magnitudes to " << out_path.string()
      << "\n";
  return kExitOk;
}

int CmdValidate(double sample_rate, double seconds, const FramingOptions& framing,
                std::ostream& out, std::ostream& err) {
  const StftConfig cfg = framing.Build(sample_rate);
  const auto to_ms = [&](std::size_t n) { return 1000.0 * static_cast<double>(n) / sample_rate; };
  const auto signal_length = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  out << "sample_rate " << sample_rate << " Hz\n"
      << "window " << ToString(cfg.window) << " " << cfg.window_length << " samples = "
      << to_ms(cfg.window_length) << " ms\n"
      << "hop " << cfg.hop_length << " samples = " << to_ms(cfg.hop_length) << " ms\n"
      << "fft " << cfg.fft_length << "\n"
      << "bins (M) " << cfg.bins() << "\n"
      << "frames (N) " << cfg.frames(signal_length) << " for " << signal_length
      << " samples\n";
  const ColaReport cola = ValidateCola(cfg);
  if (!cola.ok) {
    err << "COLA violation: window " << cola.window_length << ", hop " << cola.hop_length
        << ", deviation " << cola.deviation << " (envelope min " << cola.min_envelope << ", max "
        << cola.max_envelope << ")\n";
    return kExitValidation;
  }
  out << "cola ok (deviation " << cola.deviation << ")\n";
  return kExitOk;
}

int CmdBench(const fs::path& corpus_dir, const fs::path& report_path, int repeats,
             int gla_iterations, int fgla_iterations, const FramingOptions& framing,
             const ParamOptions& options, std::ostream& out) {
  if (repeats < 1) throw InvalidParamError("--repeats must be >= 1");
  const std::vector<fs::path> clips = ListCorpus(corpus_dir);
  if (clips.empty()) throw InvalidParamError("corpus " + corpus_dir.string() + " has no .wav clips");

  BenchReport report;
  report.repeats = repeats;
  for (const fs::path& clip : clips) {
    const Input input = LoadInput(clip, framing);
    for (const auto& [algo, iterations] :
         {std::pair{Algorithm::kGla, gla_iterations}, std::pair{Algorithm::kFgla, fgla_iterations}}) {
      ParamOptions o = options;
      o.iterations = iterations;
      const ReconstructionParams params = o.Build(algo);
      ReconstructionResult last;
      const TimingStats timing = TimeSynthesis(
          [&] { last = Reconstruct(input.magnitudes, algo, params); }, repeats);

      BenchRecord record;
      record.clip_id = clip.stem().string();
      record.algo = algo;
      record.iterations = params.iterations;
      record.alpha = algo == Algorithm::kFgla ? params.alpha : 0.0;
      record.timing = timing;
      record.final_spectral_convergence = SpectralConvergence(input.magnitudes, last.waveform);
      record.snr_db = SnrDb(*input.signal, last.waveform);
      out << record.clip_id << " " << ToString(algo) << "-" << record.iterations << ": mean "
          << FormatMs(timing.mean_ms) << " ms, spectral convergence "
          << record.final_spectral_convergence << "\n";
      report.records.push_back(std::move(record));
    }
  }
  ComputeAggregate(report);
  WriteText(report_path, BenchReportToJson(report));
  out << "mean delay reduction " << report.mean_delay_reduction_pct << " % over "
      << report.paired_clips << " clips\n";
  return kExitOk;
}

std::string FileToken(const AlgoToken& token) {
  return ToString(token.algo) + "_" + std::to_string(token.iterations);
}

int CmdConvergence(const fs::path& in_path, const fs::path& out_dir, const std::string& tokens_arg,
                   std::size_t overlay_length, const FramingOptions& framing,
                   const ParamOptions& options, std::ostream& out) {
  const std::vector<AlgoToken> tokens = ParseAlgoTokens(tokens_arg);
  if (overlay_length < 2 || (overlay_length & (overlay_length - 1)) != 0) {
    throw InvalidParamError("--overlay-length must be a power of two >= 2");
  }
  const Input input = LoadInput(in_path, framing);
  fs::create_directories(out_dir);

  std::vector<ConvergenceTrace> traces;
  for (const AlgoToken& token : tokens) {
    ParamOptions o = options;
    o.iterations = token.iterations;
    const ReconstructionResult result = Reconstruct(input.magnitudes, token.algo, o.Build(token.algo));
    WriteText(out_dir / ("trace_" + FileToken(token) + ".csv"), TraceCsv(result));
    traces.push_back(MakeConvergenceTrace(token.algo, result, overlay_length));
  }

  std::ostringstream csv;
  csv << "bin";
  for (const AlgoToken& token : tokens) csv << ',' << token.text;
  csv << '\n';
  for (std::size_t k = 0; k < overlay_length / 2 + 1; ++k) {
    csv << k;
    for (const ConvergenceTrace& trace : traces) csv << ',' << FormatDouble(trace.fft_overlay[k]);
    csv << '\n';
  }
  WriteText(out_dir / "overlay.csv", csv.str());

  out << "overlay_distance";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      out << ' ' << tokens[i].text << '|' << tokens[j].text << '='
          << FormatDouble(OverlayDistance(traces[i].fft_overlay, traces[j].fft_overlay));
    }
  }
  out << '\n';
  return kExitOk;
}

}  // namespace

void ComputeAggregate(BenchReport& report) {
  std::map<std::string, std::pair<const BenchRecord*, const BenchRecord*>> pairs;
  for (const BenchRecord& r : report.records) {
    auto& slot = pairs[r.clip_id];
    (r.algo == Algorithm::kGla ? slot.first : slot.second) = &r;
  }
  double gla = 0.0;
  double fgla = 0.0;
  int n = 0;
  for (const auto& [clip, pair] : pairs) {
    if (pair.first == nullptr || pair.second == nullptr) continue;
    gla += pair.first->timing.mean_ms;
    fgla += pair.second->timing.mean_ms;
    ++n;
  }
  report.paired_clips = n;
  report.mean_gla_ms = n > 0 ? gla / n : 0.0;
  report.mean_fgla_ms = n > 0 ? fgla / n : 0.0;
  report.mean_delay_reduction_pct =
      report.mean_gla_ms > 0.0 ? 100.0 * (1.0 - report.mean_fgla_ms / report.mean_gla_ms) : 0.0;
}

std::string BenchReportToJson(const BenchReport& report) {
  json records = json::array();
  for (const BenchRecord& r : report.records) {
    records.push_back({
        {"clip_id", r.clip_id},
        {"algo", ToString(r.algo)},
        {"iterations", r.iterations},
        {"alpha", r.alpha},
        {"timing",
         {{"runs", r.timing.runs},
          {"mean_ms", r.timing.mean_ms},
          {"min_ms", r.timing.min_ms},
          {"max_ms", r.timing.max_ms},
          {"stddev_ms", r.timing.stddev_ms}}},
        {"final_spectral_convergence", r.final_spectral_convergence},
        {"snr_db", r.snr_db},
    });
  }
  json doc = {
      {"repeats", report.repeats},
      {"records", records},
      {"aggregate",
       {{"mean_delay_reduction_pct", report.mean_delay_reduction_pct},
        {"mean_gla_ms", report.mean_gla_ms},
        {"mean_fgla_ms", report.mean_fgla_ms},
        {"paired_clips", report.paired_clips}}},
  };
  return doc.dump(2) + "\n";
}

BenchReport BenchReportFromJson(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw ParseError("bench report is not valid JSON", 0);
  try {
    BenchReport report;
    report.repeats = doc.at("repeats").get<int>();
    for (const json& r : doc.at("records")) {
      BenchRecord rec;
      rec.clip_id = r.at("clip_id").get<std::string>();
      rec.algo = ParseAlgorithm(r.at("algo").get<std::string>());
      rec.iterations = r.at("iterations").get<int>();
      rec.alpha = r.at("alpha").get<double>();
      const json& t = r.at("timing");
      rec.timing = {t.at("runs").get<int>(), t.at("mean_ms").get<double>(),
                    t.at("min_ms").get<double>(), t.at("max_ms").get<double>(),
                    t.at("stddev_ms").get<double>()};
      rec.final_spectral_convergence = r.at("final_spectral_convergence").get<double>();
      rec.snr_db = r.at("snr_db").get<double>();
      report.records.push_back(std::move(rec));
    }
    const json& agg = doc.at("aggregate");
    report.mean_delay_reduction_pct = agg.at("mean_delay_reduction_pct").get<double>();
    report.mean_gla_ms = agg.at("mean_gla_ms").get<double>();
    report.mean_fgla_ms = agg.at("mean_fgla_ms").get<double>();
    report.paired_clips = agg.at("paired_clips").get<int>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bench report: ") + e.what(), 0);
  }
}

std::vector<AlgoToken> ParseAlgoTokens(std::string_view list) {
  std::vector<AlgoToken> tokens;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, end - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidParamError("malformed algorithm token '" + std::string(item) +
                              "' (expected algo:iterations)");
    }
    AlgoToken token;
    token.text = std::string(item);
    token.algo = ParseAlgorithm(item.substr(0, colon));
    const std::string count(item.substr(colon + 1));
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (count.empty() || used != count.size() || value < 1) {
      throw InvalidParamError("malformed iteration count in token '" + token.text + "'");
    }
    token.iterations = value;
    tokens.push_back(std::move(token));
    start = end + 1;
  }
  return tokens;
}

std::vector<fs::path> ListCorpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> clips;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") clips.push_back(entry.path());
  }
  std::sort(clips.begin(), clips.end());
  return clips;
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectrogram inversion with Griffin-Lim and fast Griffin-Lim", "phasefast"};
  app.require_subcommand(1);

  FramingOptions framing;
  ParamOptions params;
  std::string in_path;
  std::string out_path;
  std::string trace_path;

  CLI::App* reconstruct = app.add_subcommand("reconstruct", "Rebuild a waveform from magnitudes");
  reconstruct->add_option("input", in_path, "Input .wav or spectrogram .json")->required();
  reconstruct->add_option("output", out_path, "Output .wav")->required();
  reconstruct->add_option("--trace", trace_path, "Write a per-iteration residual CSV");
  framing.Register(*reconstruct);
  params.Register(*reconstruct);

  CLI::App* analyze = app.add_subcommand("analyze", "Write the magnitude spectrogram of a .wav");
  analyze->add_option("input", in_path, "Input .wav")->required();
  analyze->add_option("output", out_path, "Output header .json")->required();
  framing.Register(*analyze);

  std::string corpus_dir;
  int repeats = 10;
  int gla_iterations = kDefaultGlaIterations;
  int fgla_iterations = kDefaultFglaIterations;
  CLI::App* bench = app.add_subcommand("bench", "Time GLA vs FGLA over a corpus of clips");
  bench->add_option("corpus", corpus_dir, "Directory of .wav clips")->required();
  bench->add_option("--out", out_path, "Report path")->capture_default_str();
  bench->add_option("--repeats", repeats, "Timed runs per clip and algorithm")->capture_default_str();
  bench->add_option("--gla-iterations", gla_iterations)->capture_default_str();
  bench->add_option("--fgla-iterations", fgla_iterations)->capture_default_str();
  framing.Register(*bench);
  params.Register(*bench);

  std::string tokens = kDefaultConvergenceTokens;
  std::size_t overlay_length = kDefaultOverlayLength;
  CLI::App* convergence = app.add_subcommand("convergence", "Emit residual traces and FFT overlays");
  convergence->add_option("input", in_path, "Input .wav or spectrogram .json")->required();
  convergence->add_option("--out-dir", out_path, "Output directory")->required();
  convergence->add_option("--algos", tokens, "Comma-separated algo:iterations tokens")
      ->capture_default_str();
  convergence->add_option("--overlay-length", overlay_length, "DFT length of the overlays")
      ->capture_default_str();
  framing.Register(*convergence);
  params.Register(*convergence);

  double sample_rate = kDefaultSampleRate;
  double seconds = 1.0;
  CLI::App* validate = app.add_subcommand("validate", "Check a framing configuration");
  validate->add_option("--sample-rate", sample_rate)->capture_default_str();
  validate->add_option("--seconds", seconds, "Signal duration used for the frame count")
      ->capture_default_str();
  framing.Register(*validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*reconstruct) return CmdReconstruct(in_path, out_path, trace_path, framing, params, out);
    if (*analyze) return CmdAnalyze(in_path, out_path, framing, out);
    if (*bench) {
      if (out_path.empty()) out_path = "bench_report.json";
      return CmdBench(corpus_dir, out_path, repeats, gla_iterations, fgla_iterations, framing,
                      params, out);
    }
    if (*convergence) {
      return CmdConvergence(in_path, out_path, tokens, overlay_length, framing, params, out);
    }
    if (*validate) return CmdValidate(sample_rate, seconds, framing, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace phasefast::cli
