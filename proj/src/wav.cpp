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

#include "phasefast/wav.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "phasefast/errors.hpp"

namespace phasefast {
namespace {

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void Require(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw ParseError(std::string("truncated ") + what, bytes_.size());
    }
  }

  std::uint16_t U16(const char* what) {
    Require(2, what);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t U32(const char* what) {
    Require(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }

  std::string Tag(const char* what) {
    Require(4, what);
    std::string tag(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return tag;
  }

  void Skip(std::size_t n, const char* what) {
    Require(n, what);
    pos_ += n;
  }

  std::span<const std::uint8_t> Take(std::size_t n, const char* what) {
    Require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Format {
  std::uint16_t audio_format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

WavFile ReadWav(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.Tag("RIFF header") != "RIFF") throw ParseError("missing RIFF tag", 0);
  in.U32("RIFF size");
  if (in.Tag("WAVE tag") != "WAVE") throw ParseError("missing WAVE tag", 8);

  bool have_fmt = false;
  Format fmt;
  while (true) {
    const std::size_t chunk_at = in.offset();
    if (in.remaining() == 0) {
      throw ParseError(have_fmt ? "missing data chunk" : "missing fmt chunk", chunk_at);
    }
    const std::string id = in.Tag("chunk header");
    const std::uint32_t size = in.U32("chunk size");

    if (id == "fmt ") {
      if (size < 16) throw ParseError("fmt chunk shorter than 16 bytes", chunk_at + 4);
      in.Require(size, "fmt chunk");
      fmt.audio_format = in.U16("audio format");
      fmt.channels = in.U16("channel count");
      fmt.sample_rate = in.U32("sample rate");
      in.U32("byte rate");
      in.U16("block align");
      fmt.bits_per_sample = in.U16("bits per sample");
      in.Skip(std::size_t{size} - 16 + (size & 1u), "fmt chunk");
      if (fmt.audio_format != 1) {
        throw UnsupportedFormatError("audio_format",
                                     std::to_string(fmt.audio_format) + " (only PCM = 1)");
      }
      if (fmt.channels != 1) {
        throw UnsupportedFormatError("num_channels",
                                     std::to_string(fmt.channels) + " (only mono)");
      }
      if (fmt.bits_per_sample != 16) {
        throw UnsupportedFormatError("bits_per_sample",
                                     std::to_string(fmt.bits_per_sample) + " (only 16)");
      }
      if (fmt.sample_rate == 0) throw UnsupportedFormatError("sample_rate", "0");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("data chunk before fmt chunk", chunk_at);
      if (size % 2 != 0) {
        throw ParseError("data chunk size is not a whole number of samples", chunk_at + 4);
      }
      const auto payload = in.Take(size, "data chunk");
      WavFile wav;
      wav.signal.sample_rate = fmt.sample_rate;
      wav.signal.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.signal.samples.size(); ++i) {
        const auto word =
            static_cast<std::uint16_t>(payload[2 * i] | (payload[2 * i + 1] << 8));
        wav.signal.samples[i] = static_cast<std::int16_t>(word) / 32768.0;
      }
      return wav;
    } else {
      in.Skip(std::size_t{size} + (size & 1u), "chunk payload");
    }
  }
}

EncodedWav WriteWav(const WavFile& wav) {
  const Signal& x = wav.signal;
  if (!(x.sample_rate > 0.0) || x.sample_rate != std::floor(x.sample_rate) ||
      x.sample_rate > 4294967295.0) {
    throw DomainError("WAV sample rate must be a positive integer");
  }
  CheckFinite(x);
  const std::uint64_t data_bytes = 2ull * x.size();
  if (data_bytes > 0xffffffffull - 36) throw DomainError("signal too long for a WAV file");

  EncodedWav out;
  out.bytes.reserve(44 + data_bytes);
  const auto rate = static_cast<std::uint32_t>(x.sample_rate);
  PutTag(out.bytes, "RIFF");
  PutU32(out.bytes, static_cast<std::uint32_t>(36 + data_bytes));
  PutTag(out.bytes, "WAVE");
  PutTag(out.bytes, "fmt ");
  PutU32(out.bytes, 16);
  PutU16(out.bytes, 1);         // PCM
  PutU16(out.bytes, 1);         // mono
  PutU32(out.bytes, rate);
  PutU32(out.bytes, rate * 2);  // byte rate
  PutU16(out.bytes, 2);         // block align
  PutU16(out.bytes, 16);
  PutTag(out.bytes, "data");
  PutU32(out.bytes, static_cast<std::uint32_t>(data_bytes));
  for (double v : x.samples) {
    double q = std::round(v * 32768.0);  // halves round away from zero
    if (q > 32767.0 || q < -32768.0) {
      ++out.clipped;
      q = std::clamp(q, -32768.0, 32767.0);
    }
    PutU16(out.bytes, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

WavFile LoadWav(const std::filesystem::path& path) { return ReadWav(ReadFileBytes(path)); }

std::size_t SaveWav(const std::filesystem::path& path, const WavFile& wav) {
  const EncodedWav encoded = WriteWav(wav);
  WriteFileBytes(path, encoded.bytes);
  return encoded.clipped;
}

}  // namespace phasefast
