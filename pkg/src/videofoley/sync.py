"""Appearance intervals from per-frame similarity, and their ~1 s chunking."""

from __future__ import annotations

import math
from dataclasses import dataclass

from videofoley.catalog import SoundLabel
from videofoley.embed import Embedder, cosine
from videofoley.media import Frame

_EPS = 1e-9


@dataclass(frozen=True)
class Interval:
    label_id: str
    frame_range: tuple[int, int]  # scene-relative, [start, end)
    time_range: tuple[float, float]


@dataclass(frozen=True)
class Chunk:
    label_id: str
    time_range: tuple[float, float]
    reference_frame: int  # scene-relative index of the chunk's first frame


@dataclass(frozen=True)
class SyncConfig:
    score_threshold: float = 0.5  # on min-max normalized scores
    min_interval_frames: int = 3
    max_gap_frames: int = 2
    chunk_seconds: float = 1.0

    def __post_init__(self) -> None:
        if not 0 < self.score_threshold < 1:
            raise ValueError("score_threshold must be in (0, 1)")
        if self.min_interval_frames < 1:
            raise ValueError("min_interval_frames must be >= 1")
        if self.max_gap_frames < 0:
            raise ValueError("max_gap_frames must be >= 0")
        if self.chunk_seconds <= 0:
            raise ValueError("chunk_seconds must be > 0")


def frame_scores(embedder: Embedder, frames: list[Frame], label: SoundLabel) -> list[float]:
    """Per-frame cosine against the label text, min-max normalized to [0, 1].

    When all raw scores are equal the scene carries no contrast to threshold
    on, so every frame normalizes to 1.0 (the label was already classified as
    present in this scene).
    """
    if not frames:
        raise ValueError("frame_scores needs at least one frame")
    text_vec = embedder.embed_text(label.text)
    raw = [cosine(embedder.embed_image(f), text_vec) for f in frames]
    lo, hi = min(raw), max(raw)
    if hi - lo < _EPS:
        return [1.0] * len(raw)
    return [(s - lo) / (hi - lo) for s in raw]


def detect_intervals(
    scores: list[float],
    config: SyncConfig | None = None,
    *,
    label_id: str = "",
    fps: float = 1.0,
) -> list[Interval]:
    """Maximal above-threshold runs, with short gaps bridged and short runs dropped.

    Runs separated by at most max_gap_frames sub-threshold frames merge into
    one interval; merged runs shorter than min_interval_frames are discarded.
    """
    config = config or SyncConfig()
    tau = config.score_threshold

    runs: list[list[int]] = []
    for i, score in enumerate(scores):
        if score >= tau:
            if runs and runs[-1][1] == i:
                runs[-1][1] = i + 1
            else:
                runs.append([i, i + 1])

    merged: list[list[int]] = []
    for run in runs:
        if merged and run[0] - merged[-1][1] <= config.max_gap_frames:
            merged[-1][1] = run[1]
        else:
            merged.append(run)

    return [
        Interval(
            label_id=label_id,
            frame_range=(start, end),
            time_range=(start / fps, end / fps),
        )
        for start, end in merged
        if end - start >= config.min_interval_frames
    ]


def chunk_interval(interval: Interval, fps: float, config: SyncConfig | None = None) -> list[Chunk]:
    """Tile an interval with chunk_seconds-long chunks; the last chunk keeps
    the remainder. Each chunk references its first frame."""
    config = config or SyncConfig()
    start_t, end_t = interval.time_range
    duration = end_t - start_t
    if duration <= 0:
        raise ValueError("interval must be non-empty")

    n_full = int(math.floor(duration / config.chunk_seconds + _EPS))
    remainder = duration - n_full * config.chunk_seconds
    count = n_full + (1 if remainder > _EPS else 0)
    count = max(count, 1)

    first_frame, last_frame = interval.frame_range
    chunks = []
    for k in range(count):
        t0 = start_t + k * config.chunk_seconds
        t1 = min(start_t + (k + 1) * config.chunk_seconds, end_t)
        ref = math.ceil(t0 * fps - 1e-6)
        ref = min(max(ref, first_frame), last_frame - 1)
        chunks.append(Chunk(label_id=interval.label_id, time_range=(t0, t1), reference_frame=ref))
    return chunks
