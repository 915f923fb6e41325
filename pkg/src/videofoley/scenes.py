"""Scene boundary detection from color-histogram distances between neighbors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from videofoley.media import Frame, FrameSequence


@dataclass(frozen=True)
class Scene:
    id: int
    frame_range: tuple[int, int]  # [start, end)
    time_range: tuple[float, float]


@dataclass(frozen=True)
class SceneConfig:
    bins_per_channel: int = 8
    distance_threshold: float = 0.3
    # None resolves to one second of frames at the sequence fps
    min_scene_frames: int | None = None

    def __post_init__(self) -> None:
        if self.bins_per_channel < 2:
            raise ValueError("bins_per_channel must be >= 2")
        if not 0 < self.distance_threshold <= 2:
            raise ValueError("distance_threshold must be in (0, 2]")

    def resolve_min_frames(self, fps: float) -> int:
        if self.min_scene_frames is not None:
            return max(1, self.min_scene_frames)
        return max(1, round(fps))


def histogram(frame: Frame, config: SceneConfig) -> np.ndarray:
    """Joint RGB histogram: B^3 bins, equal channel ranges, sums to 1."""
    b = config.bins_per_channel
    quantized = (frame.pixels.astype(np.uint32) * b) >> 8  # v * B // 256
    flat = (quantized[..., 0] * b + quantized[..., 1]) * b + quantized[..., 2]
    counts = np.bincount(flat.ravel(), minlength=b**3).astype(np.float64)
    return counts / counts.sum()


def histogram_distance(a: np.ndarray, b: np.ndarray) -> float:
    """L1 distance between two normalized histograms, in [0, 2]."""
    if a.shape != b.shape:
        raise ValueError(f"bin-count mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).sum())


def split_scenes(seq: FrameSequence, config: SceneConfig | None = None) -> list[Scene]:
    """Place a boundary wherever neighboring histograms differ beyond the
    threshold, unless that would leave a scene shorter than the minimum."""
    config = config or SceneConfig()
    min_frames = config.resolve_min_frames(seq.fps)
    hists = [histogram(f, config) for f in seq.frames]

    boundaries = [0]
    for i in range(1, len(seq.frames)):
        if (
            histogram_distance(hists[i - 1], hists[i]) > config.distance_threshold
            and i - boundaries[-1] >= min_frames
        ):
            boundaries.append(i)
    boundaries.append(len(seq.frames))

    scenes = []
    for scene_id, (start, end) in enumerate(zip(boundaries, boundaries[1:])):
        scenes.append(
            Scene(
                id=scene_id,
                frame_range=(start, end),
                time_range=(start / seq.fps, end / seq.fps),
            )
        )
    return scenes
