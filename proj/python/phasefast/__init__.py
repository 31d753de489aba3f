# Copyright 2026 The phasefast Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Spectrogram inversion with Griffin-Lim and fast Griffin-Lim."""

from phasefast._core import (
    ColaReport,
    ConfigError,
    DomainError,
    Error,
    InvalidParamError,
    IoError,
    MetricError,
    NonInvertibleError,
    ObserverError,
    ParseError,
    ReconstructionResult,
    StftConfig,
    UnsupportedFormatError,
    analyze,
    fft_overlay,
    fgla,
    gla,
    load_wav,
    overlay_distance,
    project_consistent,
    project_magnitude,
    read_wav,
    reconstruct,
    save_wav,
    snr_db,
    spectral_convergence,
    synthesize,
    validate_cola,
    write_wav,
)

__version__ = "0.1.0"
