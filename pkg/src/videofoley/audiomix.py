"""Audio rendering: WAV I/O, constant-power panning, chunk automation,
ambient beds, and per-scene track stacking.

All processing is float64; PCM16 conversion happens only at export, with
round-half-away-from-zero and no dither, so renders are bit-reproducible.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from videofoley.errors import InputError
from videofoley.spatial import ChunkMix


@dataclass(frozen=True)
class AudioBuffer:
    sample_rate: int
    samples: np.ndarray  # (channels, n) float64

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 2 or samples.shape[0] not in (1, 2):
            raise ValueError("samples must be (channels, n) with 1 or 2 channels")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")
        object.__setattr__(self, "samples", samples)

    @property
    def channels(self) -> int:
        return self.samples.shape[0]

    @property
    def length(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.length / self.sample_rate


class TrackRole(str, Enum):
    EFFECT = "effect"
    AMBIENT = "ambient"


@dataclass(frozen=True)
class Track:
    label_id: str
    role: TrackRole
    buffer: AudioBuffer
    scene_id: int


@dataclass(frozen=True)
class MixConfig:
    render_sample_rate: int = 48000
    crossfade_ms: float = 100.0
    ambient_gain_db: float = -5.0
    headroom_peak: float = 10 ** (-1 / 20)  # ~0.8913, -1 dBFS

    def __post_init__(self) -> None:
        if self.crossfade_ms < 0:
            raise ValueError("crossfade_ms must be >= 0")
        if self.render_sample_rate <= 0:
            raise ValueError("render_sample_rate must be > 0")


# --- WAV codec ---------------------------------------------------------------

_FORMAT_PCM = 1
_FORMAT_FLOAT = 3


def read_wav(path: str | Path) -> AudioBuffer:
    """Read a RIFF WAV file (PCM 16-bit or IEEE float 32-bit, mono/stereo)."""
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise InputError(f"not a RIFF WAV file: {path}")

    fmt: tuple[int, int, int, int] | None = None
    raw: bytes | None = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise InputError(f"truncated WAV file: {path}")
        if chunk_id == b"fmt ":
            if size < 16:
                raise InputError(f"truncated WAV fmt chunk: {path}")
            code, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", body, 0)
            fmt = (code, channels, rate, bits)
        elif chunk_id == b"data":
            raw = body
        pos += 8 + size + (size & 1)

    if fmt is None or raw is None:
        raise InputError(f"truncated WAV file: {path}")
    code, channels, rate, bits = fmt
    if channels not in (1, 2):
        raise InputError(f"unsupported channel count {channels}: {path}")
    if code == _FORMAT_PCM and bits == 16:
        ints = np.frombuffer(raw[: len(raw) - len(raw) % (2 * channels)], dtype="<i2")
        samples = ints.astype(np.float64) / 32768.0
    elif code == _FORMAT_FLOAT and bits == 32:
        floats = np.frombuffer(raw[: len(raw) - len(raw) % (4 * channels)], dtype="<f4")
        samples = floats.astype(np.float64)
    else:
        raise InputError(f"unsupported codec (format {code}, {bits}-bit): {path}")
    return AudioBuffer(sample_rate=rate, samples=samples.reshape(-1, channels).T)


def write_wav(buffer: AudioBuffer, path: str | Path, sample_format: str = "pcm16") -> None:
    """Write mono/stereo WAV as PCM16 (default) or IEEE float32."""
    Path(path).write_bytes(wav_bytes(buffer, sample_format))


def wav_bytes(buffer: AudioBuffer, sample_format: str = "pcm16") -> bytes:
    interleaved = buffer.samples.T.reshape(-1)
    if sample_format == "pcm16":
        code, bits = _FORMAT_PCM, 16
        payload = _to_pcm16(interleaved).tobytes()
    elif sample_format == "float32":
        code, bits = _FORMAT_FLOAT, 32
        payload = interleaved.astype("<f4").tobytes()
    else:
        raise ValueError(f"unsupported sample_format {sample_format!r}")

    channels = buffer.channels
    block_align = channels * bits // 8
    fmt = struct.pack(
        "<HHIIHH", code, channels, buffer.sample_rate, buffer.sample_rate * block_align, block_align, bits
    )
    chunks = [b"fmt " + struct.pack("<I", len(fmt)) + fmt]
    if code == _FORMAT_FLOAT:
        chunks.append(b"fact" + struct.pack("<II", 4, buffer.length))
    chunks.append(b"data" + struct.pack("<I", len(payload)) + payload + (b"\x00" if len(payload) & 1 else b""))
    body = b"WAVE" + b"".join(chunks)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def _to_pcm16(x: np.ndarray) -> np.ndarray:
    scaled = x * 32768.0
    rounded = np.copysign(np.floor(np.abs(scaled) + 0.5), scaled)  # half away from zero
    return np.clip(rounded, -32768, 32767).astype("<i2")


# --- primitive operations -----------------------------------------------------

def gain_db_to_linear(db: float) -> float:
    """10^(db/20); -inf maps to 0."""
    if db == -math.inf:
        return 0.0
    return 10.0 ** (db / 20.0)


def pan_scales(pan: float) -> tuple[float, float]:
    """Constant-power law: left^2 + right^2 = 1 for every pan position."""
    if not -1.0 <= pan <= 1.0:
        raise ValueError(f"pan out of range: {pan}")
    theta = (pan + 1.0) * math.pi / 4.0
    return math.cos(theta), math.sin(theta)


def apply_pan(mono: AudioBuffer, pan: float) -> AudioBuffer:
    """Place a mono buffer in the stereo field with the constant-power law."""
    if mono.channels != 1:
        raise ValueError("apply_pan expects a mono buffer")
    left, right = pan_scales(pan)
    return AudioBuffer(
        sample_rate=mono.sample_rate,
        samples=np.vstack([left * mono.samples[0], right * mono.samples[0]]),
    )


def crossfade_windows(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Equal-power fade pair: out[k]^2 + in[k]^2 = 1 at every sample."""
    phase = (np.arange(n) + 0.5) / n * (math.pi / 2.0)
    return np.cos(phase), np.sin(phase)


def to_mono(buffer: AudioBuffer) -> AudioBuffer:
    if buffer.channels == 1:
        return buffer
    return AudioBuffer(
        sample_rate=buffer.sample_rate,
        samples=buffer.samples.mean(axis=0, keepdims=True),
    )


def resample(buffer: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Linear resampling; output length = ceil(n * target / source)."""
    if target_rate <= 0:
        raise ValueError("target_rate must be > 0")
    if target_rate == buffer.sample_rate:
        return buffer
    n_out = math.ceil(buffer.length * target_rate / buffer.sample_rate)
    positions = np.arange(n_out, dtype=np.float64) * buffer.sample_rate / target_rate
    source_index = np.arange(buffer.length, dtype=np.float64)
    resampled = np.vstack(
        [np.interp(positions, source_index, channel) for channel in buffer.samples]
    )
    return AudioBuffer(sample_rate=target_rate, samples=resampled)


def loop_to_length(samples: np.ndarray, n_target: int, seam_samples: int) -> np.ndarray:
    """Trim or loop (channels, n) audio to exactly n_target samples.

    Loop seams overlap by seam_samples with equal-power fades so the wrap is
    inaudible; the seam shrinks if the clip is too short to support it.
    """
    n = samples.shape[1]
    if n == 0:
        raise ValueError("cannot loop empty audio")
    if n >= n_target:
        return samples[:, :n_target].copy()

    seam = min(seam_samples, n // 2)
    step = n - seam
    copies = 1 + math.ceil(max(0, n_target - n) / step)
    total = n + (copies - 1) * step
    out = np.zeros((samples.shape[0], total), dtype=np.float64)
    fade_out, fade_in = crossfade_windows(seam) if seam > 0 else (None, None)
    for i in range(copies):
        piece = samples.copy()
        if seam > 0 and i > 0:
            piece[:, :seam] *= fade_in
        if seam > 0 and i < copies - 1:
            piece[:, n - seam :] *= fade_out
        start = i * step
        out[:, start : start + n] += piece
    return out[:, :n_target]


# --- chunk and track rendering -------------------------------------------------

def render_interval(clip: AudioBuffer, chunks: list[ChunkMix], config: MixConfig | None = None) -> AudioBuffer:
    """Render one effect interval: the clip plays continuously while each
    chunk's pan/gain applies over its span.

    Neighboring chunks hand over inside a crossfade_ms window straddling
    their boundary. Because both chunks process the same continuous clip,
    the handover blends the stereo gain automation with the squared
    equal-power windows (which sum to one), so identical settings pass
    through bit-unchanged and the stitch stays power-steady.
    """
    config = config or MixConfig()
    if not chunks:
        raise ValueError("render_interval needs at least one chunk")

    rate = config.render_sample_rate
    t0 = chunks[0].time_range[0]
    boundaries = [0] + [round((c.time_range[1] - t0) * rate) for c in chunks]
    n_total = boundaries[-1]

    source = to_mono(resample(clip, rate)).samples
    seam = round(config.crossfade_ms / 1000.0 * rate)
    source = loop_to_length(source, n_total, seam)[0]

    amps = np.array(
        [[mix.gain * s for s in pan_scales(mix.pan)] for mix in chunks]
    )  # (chunks, 2)
    gain = np.empty((2, n_total), dtype=np.float64)
    for k in range(len(chunks)):
        gain[:, boundaries[k] : boundaries[k + 1]] = amps[k][:, None]

    xfade = round(config.crossfade_ms / 1000.0 * rate)
    for k in range(1, len(chunks)):
        b = boundaries[k]
        half_left = min(xfade // 2, (b - boundaries[k - 1]) // 2)
        half_right = min(xfade - xfade // 2, (boundaries[k + 1] - b) // 2)
        m = half_left + half_right
        if m < 1:
            continue
        fade_out, fade_in = crossfade_windows(m)
        w_new = fade_in**2  # unity-sum with fade_out**2
        region = slice(b - half_left, b + half_right)
        gain[:, region] = (
            (1.0 - w_new) * amps[k - 1][:, None] + w_new * amps[k][:, None]
        )

    return AudioBuffer(sample_rate=rate, samples=gain * source[None, :])


def render_ambient(clip: AudioBuffer, scene_duration: float, config: MixConfig | None = None) -> AudioBuffer:
    """Loop or trim the ambient bed to the scene, at ambient_gain_db, centered."""
    config = config or MixConfig()
    rate = config.render_sample_rate
    n_target = round(scene_duration * rate)
    resampled = resample(clip, rate)
    seam = round(config.crossfade_ms / 1000.0 * rate)
    looped = loop_to_length(resampled.samples, n_target, seam)
    scale = gain_db_to_linear(config.ambient_gain_db)
    bed = AudioBuffer(sample_rate=rate, samples=looped * scale)
    if bed.channels == 1:
        return apply_pan(bed, 0.0)
    return bed


def effect_track(
    rendered_intervals: list[tuple[float, AudioBuffer]],
    scene_duration: float,
    config: MixConfig | None = None,
) -> AudioBuffer:
    """Assemble scene-relative (start_time, stereo render) pairs into one
    scene-length stereo buffer, silence outside the intervals."""
    config = config or MixConfig()
    rate = config.render_sample_rate
    n = round(scene_duration * rate)
    out = np.zeros((2, n), dtype=np.float64)
    for start_time, rendered in rendered_intervals:
        if rendered.sample_rate != rate or rendered.channels != 2:
            raise ValueError("interval renders must be stereo at the render rate")
        start = round(start_time * rate)
        end = min(start + rendered.length, n)
        out[:, start:end] += rendered.samples[:, : end - start]
    return AudioBuffer(sample_rate=rate, samples=out)


def stack(tracks: list[Track], config: MixConfig | None = None) -> AudioBuffer:
    """Sum tracks sample-wise; scale the whole mix down to headroom_peak only
    if the raw peak exceeds full scale.

    Tracks are summed in a canonical order so any input permutation produces
    identical bytes.
    """
    config = config or MixConfig()
    if not tracks:
        raise ValueError("stack needs at least one track")
    rate = tracks[0].buffer.sample_rate
    length = tracks[0].buffer.length
    for track in tracks:
        if track.buffer.sample_rate != rate:
            raise ValueError("sample rate mismatch between tracks")
        if track.buffer.length != length:
            raise ValueError("length mismatch between tracks")
        if track.buffer.channels != 2:
            raise ValueError("stack expects stereo tracks")

    ordered = sorted(tracks, key=lambda t: (t.role.value, t.label_id, t.scene_id))
    mix = np.sum(np.stack([t.buffer.samples for t in ordered]), axis=0)
    peak = float(np.abs(mix).max()) if mix.size else 0.0
    if peak > 1.0:
        mix = mix * (config.headroom_peak / peak)
    return AudioBuffer(sample_rate=rate, samples=mix)
