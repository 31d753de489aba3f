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

#include "phasefast/spectrogram_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "json.hpp"
#include "phasefast/errors.hpp"
#include "phasefast/wav.hpp"

namespace phasefast {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::size_t GetSize(const json& header, const char* key) {
  const auto it = header.find(key);
  if (it == header.end()) throw ParseError(std::string("header lacks '") + key + "'", 0);
  if (!it->is_number_unsigned()) {
    throw ParseError(std::string("header field '") + key + "' must be a non-negative integer", 0);
  }
  return it->get<std::size_t>();
}

}  // namespace

void SaveMagnitudes(const std::filesystem::path& header_path, const MagnitudeSpectrogram& s) {
  const StftConfig& cfg = s.config();
  std::filesystem::path data_path = header_path;
  data_path.replace_extension(".f32");

  json header = {
      {"version", kFormatVersion},
      {"sample_rate", cfg.sample_rate},
      {"window", ToString(cfg.window)},
      {"window_length", cfg.window_length},
      {"hop_length", cfg.hop_length},
      {"fft_length", cfg.fft_length},
      {"padding", "zero_edge"},
      {"bins", s.bins()},
      {"frames", s.frames()},
      {"signal_length", s.signal_length()},
      {"data_file", data_path.filename().string()},
  };

  std::vector<std::uint8_t> payload;
  payload.reserve(4 * s.bins() * s.frames());
  for (std::size_t m = 0; m < s.bins(); ++m) {
    for (std::size_t n = 0; n < s.frames(); ++n) {
      const float v = static_cast<float>(s.at(m, n));
      std::uint32_t word;
      std::memcpy(&word, &v, sizeof word);
      for (int b = 0; b < 4; ++b) payload.push_back(static_cast<std::uint8_t>(word >> (8 * b)));
    }
  }
  const std::string text = header.dump(2) + "\n";
  WriteFileBytes(header_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                        text.size()));
  WriteFileBytes(data_path, payload);
}

MagnitudeSpectrogram LoadMagnitudes(const std::filesystem::path& header_path) {
  const std::vector<std::uint8_t> raw = ReadFileBytes(header_path);
  json header = json::parse(raw.begin(), raw.end(), nullptr, /*allow_exceptions=*/false);
  if (header.is_discarded() || !header.is_object()) {
    throw ParseError("spectrogram header is not a JSON object", 0);
  }
  if (GetSize(header, "version") != kFormatVersion) {
    throw UnsupportedFormatError("version", header["version"].dump());
  }
  if (header.contains("window") && header["window"] != "hann") {
    throw UnsupportedFormatError("window", header["window"].dump());
  }
  if (header.contains("padding") && header["padding"] != "zero_edge") {
    throw UnsupportedFormatError("padding", header["padding"].dump());
  }
  if (!header.contains("sample_rate") || !header["sample_rate"].is_number()) {
    throw ParseError("header lacks numeric 'sample_rate'", 0);
  }

  StftConfig cfg;
  cfg.sample_rate = header["sample_rate"].get<double>();
  cfg.window_length = GetSize(header, "window_length");
  cfg.hop_length = GetSize(header, "hop_length");
  cfg.fft_length = GetSize(header, "fft_length");
  cfg.Validate();

  const std::size_t bins = GetSize(header, "bins");
  const std::size_t frames = GetSize(header, "frames");
  if (bins != cfg.bins()) {
    throw ParseError("bins " + std::to_string(bins) + " != fft_length/2+1", 0);
  }
  if (frames == 0) throw ParseError("frames must be positive", 0);
  const std::size_t signal_length = header.contains("signal_length")
                                        ? GetSize(header, "signal_length")
                                        : (frames - 1) * cfg.hop_length;
  if (cfg.frames(signal_length) != frames) {
    throw DomainError("signal_length " + std::to_string(signal_length) +
                      " is inconsistent with " + std::to_string(frames) + " frames");
  }

  std::filesystem::path data_path = header_path;
  if (header.contains("data_file")) {
    if (!header["data_file"].is_string()) throw ParseError("'data_file' must be a string", 0);
    data_path = header_path.parent_path() / header["data_file"].get<std::string>();
  } else {
    data_path.replace_extension(".f32");
  }
  const std::vector<std::uint8_t> payload = ReadFileBytes(data_path);
  if (payload.size() != 4 * bins * frames) {
    throw ParseError("payload holds " + std::to_string(payload.size()) + " bytes, expected " +
                         std::to_string(4 * bins * frames),
                     std::min(payload.size(), 4 * bins * frames));
  }

  MagnitudeSpectrogram s(cfg, signal_length);
  std::size_t pos = 0;
  for (std::size_t m = 0; m < bins; ++m) {
    for (std::size_t n = 0; n < frames; ++n, pos += 4) {
      std::uint32_t word = 0;
      for (int b = 3; b >= 0; --b) word = (word << 8) | payload[pos + static_cast<std::size_t>(b)];
      float v;
      std::memcpy(&v, &word, sizeof v);
      if (!std::isfinite(v) || v < 0.0f) {
        throw ParseError("magnitude must be finite and non-negative", pos);
      }
      s.at(m, n) = v;
    }
  }
  return s;
}

}  // namespace phasefast
