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

// Python bindings. Spectrograms cross the boundary as numpy arrays shaped
// (bins, frames); the signal length they describe defaults to
// (frames - 1) * hop when not given.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <complex>
#include <optional>
#include <string>

#include "phasefast/errors.hpp"
#include "phasefast/metrics.hpp"
#include "phasefast/reconstruction.hpp"
#include "phasefast/spectrogram_io.hpp"
#include "phasefast/stft.hpp"
#include "phasefast/wav.hpp"

namespace py = pybind11;
using namespace phasefast;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

Signal ToSignal(const RealArray& x, double sample_rate) {
  if (x.ndim() != 1) throw DomainError("signal must be one-dimensional");
  return Signal{std::vector<double>(x.data(), x.data() + x.size()), sample_rate};
}

RealArray FromVector(const std::vector<double>& v) {
  RealArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::size_t ResolveLength(const StftConfig& cfg, py::ssize_t frames, std::optional<std::size_t> len) {
  if (len) return *len;
  if (frames < 1) throw DomainError("spectrogram has no frames");
  return static_cast<std::size_t>(frames - 1) * cfg.hop_length;
}

template <typename T, typename Array>
Spectrogram<T> ToSpectrogram(const Array& a, const StftConfig& cfg, std::optional<std::size_t> len) {
  if (a.ndim() != 2) throw DomainError("spectrogram must be a 2-D array (bins, frames)");
  cfg.Validate();
  const std::size_t signal_length = ResolveLength(cfg, a.shape(1), len);
  Spectrogram<T> s(cfg, signal_length);
  if (static_cast<std::size_t>(a.shape(0)) != s.bins() ||
      static_cast<std::size_t>(a.shape(1)) != s.frames()) {
    throw DomainError("array shape (" + std::to_string(a.shape(0)) + ", " +
                      std::to_string(a.shape(1)) + ") does not match config: expected (" +
                      std::to_string(s.bins()) + ", " + std::to_string(s.frames()) + ")");
  }
  auto view = a.template unchecked<2>();
  for (std::size_t k = 0; k < s.bins(); ++k) {
    for (std::size_t n = 0; n < s.frames(); ++n) s.at(k, n) = view(k, n);
  }
  return s;
}

template <typename T>
py::array_t<T> FromSpectrogram(const Spectrogram<T>& s) {
  py::array_t<T> out({static_cast<py::ssize_t>(s.bins()), static_cast<py::ssize_t>(s.frames())});
  auto view = out.template mutable_unchecked<2>();
  for (std::size_t k = 0; k < s.bins(); ++k) {
    for (std::size_t n = 0; n < s.frames(); ++n) view(k, n) = s.at(k, n);
  }
  return out;
}

ReconstructionParams MakeParams(int iterations, double alpha, const std::string& init,
                                std::uint64_t seed, std::optional<double> tolerance) {
  ReconstructionParams p;
  p.iterations = iterations;
  p.alpha = alpha;
  if (init == "zero") {
    p.init.kind = InitKind::kZeroPhase;
  } else if (init == "random") {
    p.init.kind = InitKind::kRandomPhase;
  } else {
    throw InvalidParamError("init must be 'zero' or 'random', got '" + init + "'");
  }
  p.init.seed = seed;
  p.tolerance = tolerance;
  return p;
}

ReconstructionResult RunAlgorithm(Algorithm algo, const RealArray& s_array, const StftConfig& cfg,
                                  std::optional<std::size_t> signal_length,
                                  const ReconstructionParams& params,
                                  const std::optional<py::function>& observer) {
  const MagnitudeSpectrogram s = ToSpectrogram<double>(s_array, cfg, signal_length);
  IterationObserver wrapped;
  if (observer) {
    wrapped = [&observer](int i, double residual, double elapsed_ms) {
      py::gil_scoped_acquire gil;
      (*observer)(i, residual, elapsed_ms);
    };
  }
  py::gil_scoped_release release;
  return Reconstruct(s, algo, params, wrapped);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectrogram inversion with Griffin-Lim and fast Griffin-Lim";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<NonInvertibleError>(m, "NonInvertibleError", config_error.ptr());
  py::register_exception<InvalidParamError>(m, "InvalidParamError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<MetricError>(m, "MetricError", error.ptr());
  py::register_exception<ObserverError>(m, "ObserverError", error.ptr());
  auto io_error = py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", io_error.ptr());
  py::register_exception<UnsupportedFormatError>(m, "UnsupportedFormatError", io_error.ptr());

  py::class_<StftConfig>(m, "StftConfig")
      .def(py::init([](std::size_t window_length, std::size_t hop_length, std::size_t fft_length,
                       double sample_rate) {
             StftConfig cfg;
             cfg.window_length = window_length;
             cfg.hop_length = hop_length;
             cfg.fft_length = fft_length;
             cfg.sample_rate = sample_rate;
             cfg.Validate();
             return cfg;
           }),
           py::arg("window_length") = 1000, py::arg("hop_length") = 250,
           py::arg("fft_length") = 1024, py::arg("sample_rate") = 20000.0)
      .def_static("for_frame_shift", &StftConfig::ForFrameShift, py::arg("sample_rate"),
                  py::arg("hop_ms") = 12.5)
      .def_readwrite("window_length", &StftConfig::window_length)
      .def_readwrite("hop_length", &StftConfig::hop_length)
      .def_readwrite("fft_length", &StftConfig::fft_length)
      .def_readwrite("sample_rate", &StftConfig::sample_rate)
      .def_property_readonly("bins", &StftConfig::bins)
      .def("frames", &StftConfig::frames, py::arg("signal_length"))
      .def("validate", &StftConfig::Validate)
      .def(py::self == py::self)
      .def("__repr__", [](const StftConfig& c) {
        return "StftConfig(window_length=" + std::to_string(c.window_length) +
               ", hop_length=" + std::to_string(c.hop_length) +
               ", fft_length=" + std::to_string(c.fft_length) +
               ", sample_rate=" + std::to_string(c.sample_rate) + ")";
      });

  py::class_<ColaReport>(m, "ColaReport")
      .def_readonly("ok", &ColaReport::ok)
      .def_readonly("window_length", &ColaReport::window_length)
      .def_readonly("hop_length", &ColaReport::hop_length)
      .def_readonly("min_envelope", &ColaReport::min_envelope)
      .def_readonly("max_envelope", &ColaReport::max_envelope)
      .def_readonly("deviation", &ColaReport::deviation);

  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_property_readonly("waveform",
                             [](const ReconstructionResult& r) { return FromVector(r.waveform.samples); })
      .def_property_readonly("sample_rate",
                             [](const ReconstructionResult& r) { return r.waveform.sample_rate; })
      .def_readonly("residual_trace", &ReconstructionResult::residual_trace)
      .def_readonly("iter_times_ms", &ReconstructionResult::iter_times_ms)
      .def_readonly("total_time_ms", &ReconstructionResult::total_time_ms);

  m.def("analyze",
        [](const RealArray& x, const StftConfig& cfg) {
          return FromSpectrogram(Analyze(ToSignal(x, cfg.sample_rate), cfg));
        },
        py::arg("x"), py::arg("config") = StftConfig{},
        "Complex STFT of a signal, shaped (bins, frames).");

  m.def("synthesize",
        [](const ComplexArray& c, const StftConfig& cfg, std::optional<std::size_t> length) {
          return FromVector(Synthesize(ToSpectrogram<std::complex<double>>(c, cfg, length)).samples);
        },
        py::arg("c"), py::arg("config") = StftConfig{}, py::arg("signal_length") = py::none(),
        "Least-squares overlap-add inverse of a complex STFT.");

  m.def("project_magnitude",
        [](const ComplexArray& c, const RealArray& s, const StftConfig& cfg) {
          const std::size_t len = ResolveLength(cfg, c.ndim() == 2 ? c.shape(1) : 0, std::nullopt);
          return FromSpectrogram(ProjectMagnitude(ToSpectrogram<std::complex<double>>(c, cfg, len),
                                                  ToSpectrogram<double>(s, cfg, len)));
        },
        py::arg("c"), py::arg("s"), py::arg("config") = StftConfig{});

  m.def("project_consistent",
        [](const ComplexArray& c, const StftConfig& cfg, std::optional<std::size_t> length) {
          return FromSpectrogram(
              ProjectConsistent(ToSpectrogram<std::complex<double>>(c, cfg, length)));
        },
        py::arg("c"), py::arg("config") = StftConfig{}, py::arg("signal_length") = py::none());

  const auto gla = [](const RealArray& s, const StftConfig& cfg, std::optional<std::size_t> length,
                      int iterations, const std::string& init, std::uint64_t seed,
                      std::optional<double> tolerance, const std::optional<py::function>& observer) {
    return RunAlgorithm(Algorithm::kGla, s, cfg, length,
                        MakeParams(iterations, 0.0, init, seed, tolerance), observer);
  };
  m.def("gla", gla, py::arg("s"), py::arg("config") = StftConfig{},
        py::arg("signal_length") = py::none(), py::arg("iterations") = 60,
        py::arg("init") = "zero", py::arg("seed") = 0, py::arg("tolerance") = py::none(),
        py::arg("observer") = py::none(), "Griffin-Lim reconstruction from magnitudes (bins, frames).");

  const auto fgla = [](const RealArray& s, const StftConfig& cfg, std::optional<std::size_t> length,
                       int iterations, double alpha, const std::string& init, std::uint64_t seed,
                       std::optional<double> tolerance, const std::optional<py::function>& observer) {
    return RunAlgorithm(Algorithm::kFgla, s, cfg, length,
                        MakeParams(iterations, alpha, init, seed, tolerance), observer);
  };
  m.def("fgla", fgla, py::arg("s"), py::arg("config") = StftConfig{},
        py::arg("signal_length") = py::none(), py::arg("iterations") = 30, py::arg("alpha") = 0.2,
        py::arg("init") = "zero", py::arg("seed") = 0, py::arg("tolerance") = py::none(),
        py::arg("observer") = py::none(), "Fast Griffin-Lim reconstruction.");

  m.def("reconstruct",
        [](const RealArray& s, const std::string& algo, const StftConfig& cfg,
           std::optional<std::size_t> length, std::optional<int> iterations, double alpha,
           const std::string& init, std::uint64_t seed, std::optional<double> tolerance,
           const std::optional<py::function>& observer) {
          const Algorithm a = ParseAlgorithm(algo);
          const int n = iterations.value_or(a == Algorithm::kGla ? 60 : 30);
          return RunAlgorithm(a, s, cfg, length, MakeParams(n, alpha, init, seed, tolerance),
                              observer);
        },
        py::arg("s"), py::arg("algo") = "fgla", py::arg("config") = StftConfig{},
        py::arg("signal_length") = py::none(), py::arg("iterations") = py::none(),
        py::arg("alpha") = 0.2, py::arg("init") = "zero", py::arg("seed") = 0,
        py::arg("tolerance") = py::none(), py::arg("observer") = py::none());

  m.def("validate_cola", &ValidateCola, py::arg("config") = StftConfig{});

  m.def("spectral_convergence",
        [](const RealArray& s, const RealArray& x, const StftConfig& cfg) {
          return SpectralConvergence(ToSpectrogram<double>(s, cfg, static_cast<std::size_t>(x.size())),
                                     ToSignal(x, cfg.sample_rate));
        },
        py::arg("s"), py::arg("x"), py::arg("config") = StftConfig{});
  m.def("snr_db",
        [](const RealArray& reference, const RealArray& estimate) {
          return SnrDb(ToSignal(reference, 1.0), ToSignal(estimate, 1.0));
        },
        py::arg("reference"), py::arg("estimate"));
  m.def("fft_overlay",
        [](const RealArray& x, std::size_t length) {
          return FromVector(FftOverlay(ToSignal(x, 1.0), length));
        },
        py::arg("x"), py::arg("length") = kDefaultOverlayLength);
  m.def("overlay_distance", &OverlayDistance, py::arg("a"), py::arg("b"));

  m.def("read_wav",
        [](const py::bytes& data) {
          const std::string_view view = data;
          const WavFile wav = ReadWav(std::span(reinterpret_cast<const std::uint8_t*>(view.data()),
                                                view.size()));
          return py::make_tuple(FromVector(wav.signal.samples), wav.signal.sample_rate);
        },
        py::arg("data"), "Decode 16-bit mono PCM WAV bytes into (samples, sample_rate).");
  m.def("write_wav",
        [](const RealArray& x, double sample_rate) {
          const EncodedWav enc = WriteWav(WavFile{ToSignal(x, sample_rate), 16});
          return py::make_tuple(
              py::bytes(reinterpret_cast<const char*>(enc.bytes.data()), enc.bytes.size()),
              enc.clipped);
        },
        py::arg("x"), py::arg("sample_rate"), "Encode samples as 16-bit PCM; returns (bytes, clipped).");
  m.def("load_wav",
        [](const std::filesystem::path& path) {
          const WavFile wav = LoadWav(path);
          return py::make_tuple(FromVector(wav.signal.samples), wav.signal.sample_rate);
        },
        py::arg("path"));
  m.def("save_wav",
        [](const std::filesystem::path& path, const RealArray& x, double sample_rate) {
          return SaveWav(path, WavFile{ToSignal(x, sample_rate), 16});
        },
        py::arg("path"), py::arg("x"), py::arg("sample_rate"));
}
