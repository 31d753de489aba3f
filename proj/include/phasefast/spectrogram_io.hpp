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
#include <string>

#include "phasefast/stft.hpp"

namespace phasefast {

// On-disk magnitude spectrogram: a JSON header
//   {"version":1, "sample_rate", "window_length", "hop_length", "fft_length",
//    "bins", "frames", "signal_length", "data_file", ...}
// next to a sidecar of bins*frames little-endian float32 values in
// row-major (bin-major) order.

// Writes `header_path` and the sidecar (header_path with extension .f32).
void SaveMagnitudes(const std::filesystem::path& header_path, const MagnitudeSpectrogram& s);

// Throws ParseError / UnsupportedFormatError on malformed headers or
// payloads, IoError when files cannot be read.
MagnitudeSpectrogram LoadMagnitudes(const std::filesystem::path& header_path);

}  // namespace phasefast
