import math
import struct

import numpy as np
import pytest

from videofoley.audiomix import (
    AudioBuffer,
    MixConfig,
    Track,
    TrackRole,
    apply_pan,
    crossfade_windows,
    gain_db_to_linear,
    loop_to_length,
    pan_scales,
    read_wav,
    render_ambient,
    render_interval,
    resample,
    stack,
    to_mono,
    wav_bytes,
    write_wav,
)
from videofoley.errors import InputError
from videofoley.spatial import ChunkMix

RATE = 48000


def mono(data, rate=RATE) -> AudioBuffer:
    return AudioBuffer(sample_rate=rate, samples=np.asarray(data, dtype=np.float64)[None, :])


def constant(value, seconds, rate=RATE) -> AudioBuffer:
    return mono(np.full(round(seconds * rate), value), rate)


# --- WAV codec ----------------------------------------------------------------

def test_pcm16_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(30)
    ints = rng.integers(-32768, 32768, size=2 * 1000, dtype=np.int16)
    samples = ints.astype(np.float64).reshape(-1, 2).T / 32768.0
    buffer = AudioBuffer(sample_rate=44100, samples=samples)
    path = tmp_path / "x.wav"
    write_wav(buffer, path)
    again = read_wav(path)
    assert again.sample_rate == 44100
    assert np.array_equal(again.samples, buffer.samples)
    assert wav_bytes(again) == wav_bytes(buffer)


def test_float32_roundtrip(tmp_path):
    rng = np.random.default_rng(31)
    samples = rng.uniform(-1, 1, size=(1, 500)).astype(np.float32).astype(np.float64)
    buffer = AudioBuffer(sample_rate=RATE, samples=samples)
    path = tmp_path / "f.wav"
    write_wav(buffer, path, sample_format="float32")
    again = read_wav(path)
    assert np.array_equal(again.samples, samples)


def test_three_channel_rejected(tmp_path):
    fmt = struct.pack("<HHIIHH", 1, 3, RATE, RATE * 6, 6, 16)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", 0)
    path = tmp_path / "3ch.wav"
    path.write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
    with pytest.raises(InputError, match="unsupported channel count"):
        read_wav(path)


def test_unsupported_codec(tmp_path):
    fmt = struct.pack("<HHIIHH", 85, 1, RATE, RATE, 1, 8)  # mp3-in-wav
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", 0)
    path = tmp_path / "bad.wav"
    path.write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
    with pytest.raises(InputError, match="unsupported codec"):
        read_wav(path)


def test_truncated_file(tmp_path):
    buffer = constant(0.5, 0.01)
    path = tmp_path / "t.wav"
    write_wav(buffer, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(InputError, match="truncated"):
        read_wav(path)


def test_not_a_wav(tmp_path):
    path = tmp_path / "nope.wav"
    path.write_bytes(b"hello world, definitely not riff")
    with pytest.raises(InputError, match="not a RIFF WAV"):
        read_wav(path)


def test_resample_length_ratio():
    n = 1000
    buffer = mono(np.sin(np.linspace(0, 20, n)), rate=44100)
    out = resample(buffer, 48000)
    assert out.length == math.ceil(n * 48000 / 44100)
    assert out.sample_rate == 48000


def test_resample_identity():
    buffer = constant(0.25, 0.01)
    assert resample(buffer, RATE) is buffer


# --- pan / gain ----------------------------------------------------------------

def test_pan_hard_left():
    out = apply_pan(constant(0.5, 0.001), -1.0)
    assert np.allclose(out.samples[0], 0.5)
    assert np.allclose(out.samples[1], 0.0, atol=1e-12)


def test_pan_hard_right():
    out = apply_pan(constant(0.5, 0.001), 1.0)
    assert np.allclose(out.samples[0], 0.0, atol=1e-12)
    assert np.allclose(out.samples[1], 0.5)


def test_pan_center_scales_by_sqrt_half():
    out = apply_pan(constant(1.0, 0.001), 0.0)
    assert np.allclose(out.samples, math.sqrt(2) / 2)


def test_pan_out_of_range():
    with pytest.raises(ValueError, match="pan out of range"):
        apply_pan(constant(0.1, 0.001), 1.5)


def test_pan_requires_mono():
    stereo = AudioBuffer(sample_rate=RATE, samples=np.zeros((2, 10)))
    with pytest.raises(ValueError, match="mono"):
        apply_pan(stereo, 0.0)


def test_constant_power_over_grid():
    for pan in np.linspace(-1, 1, 1001):
        left, right = pan_scales(pan)
        assert left**2 + right**2 == pytest.approx(1.0, abs=1e-6)


def test_gain_db_identity():
    assert gain_db_to_linear(0.0) == 1.0


def test_gain_db_minus_five():
    assert gain_db_to_linear(-5.0) == pytest.approx(0.56234, abs=1e-5)


def test_gain_db_minus_infinity():
    assert gain_db_to_linear(-math.inf) == 0.0


def test_crossfade_windows_identity():
    fade_out, fade_in = crossfade_windows(4801)
    assert np.max(np.abs(fade_out**2 + fade_in**2 - 1.0)) < 1e-6
    assert fade_out[0] > fade_out[-1]
    assert fade_in[0] < fade_in[-1]


# --- interval rendering ----------------------------------------------------------

def chunk(start, end, pan=0.0, gain=1.0):
    return ChunkMix(pan=pan, gain=gain, time_range=(start, end))


def test_render_single_chunk_centered():
    clip = constant(0.5, 2.0)
    out = render_interval(clip, [chunk(0.0, 1.0)])
    assert out.channels == 2
    assert out.length == RATE
    expected = 0.5 * math.cos(math.pi / 4)
    assert np.allclose(out.samples, expected)
    assert expected == pytest.approx(0.35355, abs=1e-5)


def test_render_identical_chunks_rms_steady_across_stitch():
    clip = constant(0.5, 3.0)
    out = render_interval(clip, [chunk(0.0, 1.0, pan=0.3, gain=0.8), chunk(1.0, 2.0, pan=0.3, gain=0.8)])
    stitch = out.samples[:, RATE - 2400 : RATE + 2400]
    window = 480
    rms = [
        math.sqrt(float(np.mean(stitch[:, i : i + window] ** 2)))
        for i in range(0, stitch.shape[1] - window, window)
    ]
    spread_db = 20 * math.log10(max(rms) / min(rms))
    assert spread_db < 0.1


def test_render_zero_gain_chunk_is_silent_in_core():
    clip = constant(0.5, 3.0)
    out = render_interval(clip, [chunk(0.0, 1.0, gain=1.0), chunk(1.0, 2.0, gain=0.0)])
    fade = round(0.1 * RATE)
    core = out.samples[:, RATE + fade : 2 * RATE]
    assert np.array_equal(core, np.zeros_like(core))


def test_render_duration_error_below_one_sample():
    clip = constant(0.2, 5.0)
    chunks = [chunk(0.0, 1.0), chunk(1.0, 2.0), chunk(2.0, 2.37)]
    out = render_interval(clip, chunks)
    assert abs(out.length - round(2.37 * RATE)) < 1


def test_render_loops_short_clip():
    clip = constant(0.4, 0.5)
    out = render_interval(clip, [chunk(0.0, 2.0)])
    assert out.length == 2 * RATE
    tail = out.samples[:, -100:]
    assert np.abs(tail).max() > 0.1  # looped content reaches the end


def test_render_requires_chunks():
    with pytest.raises(ValueError):
        render_interval(constant(0.1, 1.0), [])


def test_render_different_pans_transition_smoothly():
    clip = constant(0.5, 2.0)
    out = render_interval(clip, [chunk(0.0, 1.0, pan=-1.0), chunk(1.0, 2.0, pan=1.0)])
    left = out.samples[0]
    diffs = np.abs(np.diff(left))
    assert diffs.max() < 0.01  # no step discontinuity at the boundary


# --- ambient rendering -----------------------------------------------------------

def test_ambient_trim_and_gain():
    clip = constant(0.5, 10.0)
    out = render_ambient(clip, 4.0)
    assert out.length == 4 * RATE
    expected = 0.5 * 0.5623413251903491 * math.cos(math.pi / 4)
    assert np.allclose(out.samples, expected)


def test_ambient_loops_to_exact_length():
    clip = constant(0.3, 2.0)
    out = render_ambient(clip, 5.0)
    assert out.length == 5 * RATE
    assert np.abs(out.samples[:, -100:]).max() > 0.05


def test_ambient_silent_clip():
    out = render_ambient(constant(0.0, 2.0), 3.0)
    assert np.array_equal(out.samples, np.zeros_like(out.samples))


def test_ambient_stereo_passthrough_scaled():
    stereo = AudioBuffer(sample_rate=RATE, samples=np.vstack([np.full(RATE, 0.2), np.full(RATE, 0.4)]))
    out = render_ambient(stereo, 1.0)
    scale = 0.5623413251903491
    assert np.allclose(out.samples[0], 0.2 * scale)
    assert np.allclose(out.samples[1], 0.4 * scale)


def test_loop_to_length_trim():
    samples = np.arange(10, dtype=np.float64)[None, :]
    assert np.array_equal(loop_to_length(samples, 4, 2), samples[:, :4])


def test_to_mono_averages():
    stereo = AudioBuffer(sample_rate=RATE, samples=np.vstack([np.full(8, 0.2), np.full(8, 0.6)]))
    assert np.allclose(to_mono(stereo).samples, 0.4)


# --- stacking --------------------------------------------------------------------

def stereo_track(label, value, seconds=0.02, role=TrackRole.EFFECT, scene_id=0):
    n = round(seconds * RATE)
    samples = np.full((2, n), value, dtype=np.float64)
    return Track(label_id=label, role=role, buffer=AudioBuffer(sample_rate=RATE, samples=samples), scene_id=scene_id)


def test_stack_silence():
    out = stack([stereo_track("a", 0.0), stereo_track("b", 0.0)])
    assert np.array_equal(out.samples, np.zeros_like(out.samples))


def test_stack_below_peak_untouched():
    out = stack([stereo_track("a", 0.8)])
    assert np.allclose(out.samples, 0.8)


def test_stack_normalizes_to_headroom():
    out = stack([stereo_track("a", 0.6), stereo_track("b", 0.6)])
    assert np.abs(out.samples).max() == pytest.approx(10 ** (-1 / 20), abs=1e-9)


def test_stack_mismatch_errors():
    short = stereo_track("a", 0.1, seconds=0.01)
    long = stereo_track("b", 0.1, seconds=0.02)
    with pytest.raises(ValueError, match="length mismatch"):
        stack([short, long])
    other_rate = Track(
        label_id="c",
        role=TrackRole.EFFECT,
        buffer=AudioBuffer(sample_rate=44100, samples=np.zeros((2, round(0.01 * RATE)))),
        scene_id=0,
    )
    with pytest.raises(ValueError, match="sample rate mismatch"):
        stack([short, other_rate])


def test_stack_peak_bounded_random():
    rng = np.random.default_rng(33)
    for _ in range(25):
        tracks = [
            stereo_track(f"t{i}", float(rng.uniform(-0.9, 0.9)))
            for i in range(int(rng.integers(1, 6)))
        ]
        out = stack(tracks)
        assert np.abs(out.samples).max() <= 1.0


def test_stack_order_invariant_bytes():
    rng = np.random.default_rng(34)
    tracks = []
    for i in range(5):
        samples = rng.uniform(-0.5, 0.5, size=(2, 960))
        tracks.append(
            Track(
                label_id=f"t{i}",
                role=TrackRole.EFFECT if i % 2 else TrackRole.AMBIENT,
                buffer=AudioBuffer(sample_rate=RATE, samples=samples),
                scene_id=0,
            )
        )
    reference = wav_bytes(stack(tracks))
    for _ in range(5):
        shuffled = [tracks[i] for i in rng.permutation(len(tracks))]
        assert wav_bytes(stack(shuffled)) == reference


def test_render_deterministic_bytes():
    clip = mono(np.sin(np.linspace(0, 200, RATE)))
    chunks = [chunk(0.0, 0.5, pan=-0.5, gain=0.7), chunk(0.5, 1.0, pan=0.5, gain=0.9)]
    first = wav_bytes(render_interval(clip, chunks))
    second = wav_bytes(render_interval(clip, chunks))
    assert first == second
