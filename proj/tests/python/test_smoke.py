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


import os
import pathlib

import numpy as np
import pytest

import phasefast as pf


def corpus_clip():
    root = os.environ.get("PHASEFAST_CORPUS_DIR")
    if root is None:
        root = pathlib.Path(__file__).resolve().parents[2] / "corpus"
    return pathlib.Path(root) / "clip1_short.wav"


def noise(n, seed=0):
    return np.random.default_rng(seed).uniform(-0.5, 0.5, n)


def test_config_defaults():
    cfg = pf.StftConfig()
    assert (cfg.window_length, cfg.hop_length, cfg.fft_length) == (1000, 250, 1024)
    assert cfg.bins == 513
    assert cfg.frames(20000) == 81
    assert pf.StftConfig.for_frame_shift(20000.0) == cfg
    with pytest.raises(pf.ConfigError):
        pf.StftConfig(fft_length=1023)


def test_analyze_matches_numpy_rfft():
    cfg = pf.StftConfig(64, 16, 64, 8000.0)
    x = noise(300)
    c = pf.analyze(x, cfg)
    assert c.shape == (33, cfg.frames(300))
    padded = np.concatenate([np.zeros(32), x, np.zeros(32)])
    window = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(64) / 64)
    frame = padded[3 * 16 : 3 * 16 + 64] * window
    np.testing.assert_allclose(c[:, 3], np.fft.rfft(frame), atol=1e-12)


def test_round_trip():
    x = noise(5000, 1)
    c = pf.analyze(x)
    y = pf.synthesize(c, signal_length=len(x))
    assert pf.snr_db(x, y) >= 120.0


def test_projections():
    x = noise(3000, 2)
    c = pf.analyze(x)
    s = np.abs(c)
    once = pf.project_magnitude(c * np.exp(0.3j), s)
    np.testing.assert_array_equal(pf.project_magnitude(once, s), once)
    p = pf.project_consistent(c, signal_length=3000)
    np.testing.assert_allclose(p, c, atol=1e-9)


def test_alpha_zero_matches_gla():
    s = np.abs(pf.analyze(noise(4000, 3)))
    g = pf.gla(s, signal_length=4000, iterations=10)
    f = pf.fgla(s, signal_length=4000, iterations=10, alpha=0.0)
    assert g.residual_trace == f.residual_trace
    np.testing.assert_array_equal(g.waveform, f.waveform)


def test_reconstruct_clip_and_observer():
    x, rate = pf.load_wav(str(corpus_clip()))
    assert rate == 20000.0
    s = np.abs(pf.analyze(x))
    seen = []
    result = pf.reconstruct(s, "fgla", signal_length=len(x),
                            observer=lambda i, r, t: seen.append((i, r)))
    assert len(result.residual_trace) == 30
    assert [i for i, _ in seen] == list(range(1, 31))
    assert len(result.waveform) == len(x)
    sc = pf.spectral_convergence(s, result.waveform)
    assert 0.0 < sc < 0.5


def test_parameter_errors():
    s = np.abs(pf.analyze(noise(2000, 4)))
    with pytest.raises(pf.InvalidParamError, match=r"\[0, 1\)"):
        pf.fgla(s, signal_length=2000, alpha=1.5)
    with pytest.raises(pf.DomainError):
        pf.gla(s[:-1], signal_length=2000)

    def boom(*_):
        raise RuntimeError("stop")

    with pytest.raises(pf.ObserverError):
        pf.gla(s, signal_length=2000, iterations=3, observer=boom)


def test_metrics():
    assert pf.overlay_distance([2.0, 4.0, 6.0], [1.0, 2.0, 3.0]) == pytest.approx(0.5)
    impulse = np.zeros(10)
    impulse[0] = 1.0
    np.testing.assert_allclose(pf.fft_overlay(impulse, 64), np.ones(33))
    assert pf.validate_cola().ok
    assert not pf.validate_cola(pf.StftConfig(1000, 1000, 1024)).ok


def test_wav_bytes(tmp_path):
    data, clipped = pf.write_wav(np.array([0.5, -1.0, 1.5]), 20000.0)
    assert clipped == 1
    assert len(data) == 44 + 6
    samples, rate = pf.read_wav(data)
    assert rate == 20000.0
    np.testing.assert_array_equal(samples, [0.5, -1.0, 32767 / 32768])
    assert pf.write_wav(samples, rate)[0] == data
    with pytest.raises(pf.ParseError):
        pf.read_wav(data[:30])
    path = tmp_path / "x.wav"
    pf.save_wav(str(path), samples, rate)
    assert path.read_bytes() == data
    with pytest.raises(pf.IoError):
        pf.load_wav(str(tmp_path / "missing.wav"))
