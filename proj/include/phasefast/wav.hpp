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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "phasefast/stft.hpp"

namespace phasefast {

// Mono 16-bit PCM audio.
struct WavFile {
  Signal signal;
  int source_bit_depth = 16;
};

struct EncodedWav {
  std::vector<std::uint8_t> bytes;
  std::size_t clipped = 0;  // samples clamped to the int16 range
};

// Parses RIFF/WAVE with a PCM fmt chunk. Samples map to v / 32768.
// Throws ParseError (with byte offset) on malformed structure and
// UnsupportedFormatError for anything but mono 16-bit PCM.
WavFile ReadWav(std::span<const std::uint8_t> bytes);

// Canonical 44-byte header + data. Samples quantize to
// round-half-away-from-zero(v * 32768) clamped to [-32768, 32767], so
// ReadWav -> WriteWav is lossless. Throws DomainError on non-finite samples.
EncodedWav WriteWav(const WavFile& wav);

WavFile LoadWav(const std::filesystem::path& path);
std::size_t SaveWav(const std::filesystem::path& path, const WavFile& wav);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace phasefast
