"""Sound-emitter localization heatmaps and the pan/gain automation they drive."""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from videofoley.catalog import SoundLabel
from videofoley.embed import Embedder, LineChannel, cosine, frame_to_ppm_base64
from videofoley.errors import BackendError, InputError
from videofoley.media import Frame


@dataclass(frozen=True)
class Heatmap:
    """Non-negative saliency grid; resolution is independent of the frame."""

    values: np.ndarray  # (H', W') float64, row-major

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise BackendError("invalid heatmap: expected a 2-d grid")
        if not np.isfinite(values).all() or (values < 0).any():
            raise BackendError("invalid heatmap: values must be finite and >= 0")
        object.__setattr__(self, "values", values)

    @property
    def peak(self) -> float:
        return float(self.values.max())

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ChunkMix:
    pan: float  # -1 full left .. +1 full right
    gain: float  # linear amplitude in [0, 1]
    time_range: tuple[float, float]


@dataclass(frozen=True)
class SpatialConfig:
    area_rel_threshold: float = 0.5  # cells >= this fraction of peak count as emitter area
    gain_floor: float = 0.2
    gain_curve: float = 0.5
    occlusion_grid: int = 7
    occlusion_fill: tuple[int, int, int] = (128, 128, 128)

    def __post_init__(self) -> None:
        if not 0 < self.area_rel_threshold < 1:
            raise ValueError("area_rel_threshold must be in (0, 1)")
        if not 0 <= self.gain_floor < 1:
            raise ValueError("gain_floor must be in [0, 1)")
        if self.occlusion_grid < 1:
            raise ValueError("occlusion_grid must be >= 1")


class SaliencyBackend(ABC):
    """Produces a heatmap localizing one label within one frame."""

    @abstractmethod
    def saliency(self, frame: Frame, label: SoundLabel) -> Heatmap: ...


class FixtureSaliency(SaliencyBackend):
    """Heatmaps from a JSON fixture keyed by "<frame_key>|<label_id>"."""

    def __init__(self, path: str | Path) -> None:
        path = Path(path)
        if not path.is_file():
            raise InputError(f"saliency fixture not found: {path}")
        doc = json.loads(path.read_text())
        self._maps: dict[str, Heatmap] = {}
        for key, grid in doc.get("maps", {}).items():
            self._maps[key] = _heatmap_from_grid(grid)

    def saliency(self, frame: Frame, label: SoundLabel) -> Heatmap:
        key = f"{frame.key}|{label.id}"
        if frame.key is None or key not in self._maps:
            raise BackendError(f"no fixture heatmap for {key!r}")
        return self._maps[key]


class OcclusionSaliency(SaliencyBackend):
    """Forward-only saliency: similarity drop when a grid cell is occluded.

    Works with any embedder; no gradients required.
    """

    def __init__(self, embedder: Embedder, config: SpatialConfig | None = None) -> None:
        self._embedder = embedder
        self._config = config or SpatialConfig()

    def saliency(self, frame: Frame, label: SoundLabel) -> Heatmap:
        return occlusion_saliency(
            self._embedder,
            frame,
            label,
            grid=self._config.occlusion_grid,
            fill=self._config.occlusion_fill,
        )


class SidecarSaliency(SaliencyBackend):
    """Gradient-based maps from an external process over the line protocol."""

    def __init__(self, spec: str, channel: LineChannel | None = None) -> None:
        self.channel = channel or LineChannel(spec)

    def saliency(self, frame: Frame, label: SoundLabel) -> Heatmap:
        response = self.channel.request(
            {"kind": "saliency", "ppm_base64": frame_to_ppm_base64(frame), "text": label.text}
        )
        return _heatmap_from_grid(response["map"])

    def close(self) -> None:
        self.channel.close()


def _heatmap_from_grid(grid: dict) -> Heatmap:
    w, h = int(grid["w"]), int(grid["h"])
    values = np.asarray(grid["values"], dtype=np.float64)
    if values.size != w * h:
        raise BackendError(f"invalid heatmap: expected {w * h} values, got {values.size}")
    return Heatmap(values=values.reshape(h, w))


def heatmap_to_grid(h: Heatmap) -> dict:
    return {"w": h.width, "h": h.height, "values": [float(v) for v in h.values.ravel()]}


def occlusion_saliency(
    embedder: Embedder,
    frame: Frame,
    label: SoundLabel,
    grid: int = 7,
    fill: tuple[int, int, int] = (128, 128, 128),
) -> Heatmap:
    """heat(cell) = max(0, base similarity - similarity with the cell filled)."""
    text_vec = embedder.embed_text(label.text)
    base = cosine(embedder.embed_image(frame), text_vec)
    height, width = frame.pixels.shape[:2]
    heat = np.zeros((grid, grid), dtype=np.float64)
    fill_px = np.asarray(fill, dtype=np.uint8)
    for gy in range(grid):
        y0, y1 = (gy * height) // grid, ((gy + 1) * height) // grid
        for gx in range(grid):
            x0, x1 = (gx * width) // grid, ((gx + 1) * width) // grid
            occluded = frame.pixels.copy()
            occluded[y0:y1, x0:x1] = fill_px
            probe = Frame(
                index=frame.index,
                timestamp=frame.timestamp,
                pixels=occluded,
                key=None,
            )
            score = cosine(embedder.embed_image(probe), text_vec)
            heat[gy, gx] = max(0.0, base - score)
    return Heatmap(values=heat)


def center_of_mass_x(h: Heatmap) -> float:
    """Mass-weighted mean of normalized column positions; 0.5 for empty or 1-wide maps."""
    total = float(h.values.sum())
    if total == 0.0 or h.width == 1:
        return 0.5
    x_norm = np.arange(h.width, dtype=np.float64) / (h.width - 1)
    column_mass = h.values.sum(axis=0)
    return float(np.dot(column_mass, x_norm) / total)


def normalized_area(h: Heatmap, config: SpatialConfig | None = None) -> float:
    """Fraction of cells at or above area_rel_threshold of the peak; 0 if flat zero."""
    config = config or SpatialConfig()
    peak = h.peak
    if peak == 0.0:
        return 0.0
    return float((h.values >= config.area_rel_threshold * peak).mean())


def chunk_mix_params(
    h: Heatmap,
    time_range: tuple[float, float],
    config: SpatialConfig | None = None,
) -> ChunkMix:
    """pan from the emitter's center of mass, gain from its normalized area.

    An all-zero heatmap means the emitter is absent: silent, centered.
    """
    config = config or SpatialConfig()
    if h.peak == 0.0:
        return ChunkMix(pan=0.0, gain=0.0, time_range=time_range)
    pan = 2.0 * center_of_mass_x(h) - 1.0
    area = normalized_area(h, config)
    gain = config.gain_floor + (1.0 - config.gain_floor) * area**config.gain_curve
    return ChunkMix(pan=pan, gain=min(gain, 1.0), time_range=time_range)
