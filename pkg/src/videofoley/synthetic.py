"""Deterministic synthetic inputs: frame directories, catalogs with generated
clips, and embedding/saliency fixture files.

Everything here is seeded or closed-form so repeated builds are
byte-identical; the golden two-scene project doubles as the demo input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from videofoley.audiomix import AudioBuffer, write_wav
from videofoley.media import write_ppm


def solid(height: int, width: int, color: tuple[int, int, int]) -> np.ndarray:
    frame = np.empty((height, width, 3), dtype=np.uint8)
    frame[:] = color
    return frame


def with_blob(
    base: np.ndarray,
    cx_norm: float,
    cy_norm: float,
    half: int,
    color: tuple[int, int, int],
) -> np.ndarray:
    """Copy of base with a square blob centered at normalized coordinates."""
    frame = base.copy()
    h, w = frame.shape[:2]
    cx, cy = round(cx_norm * (w - 1)), round(cy_norm * (h - 1))
    frame[max(0, cy - half) : cy + half, max(0, cx - half) : cx + half] = color
    return frame


def write_frame_dir(
    path: Path,
    frames: list[np.ndarray],
    fps: float,
    keys: list[str] | None = None,
) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    h, w = frames[0].shape[:2]
    meta: dict = {"fps": fps, "width": w, "height": h}
    if keys is not None:
        meta["frame_keys"] = keys
    (path / "meta.json").write_text(json.dumps(meta))
    for i, frame in enumerate(frames):
        (path / f"{i:06d}.ppm").write_bytes(write_ppm(frame))
    return path


def tone(seconds: float, freq: float, rate: int = 48000, amplitude: float = 0.4) -> AudioBuffer:
    t = np.arange(round(seconds * rate)) / rate
    return AudioBuffer(sample_rate=rate, samples=(amplitude * np.sin(2 * math.pi * freq * t))[None, :])


def noise(seconds: float, rate: int = 48000, amplitude: float = 0.3, seed: int = 7, channels: int = 1) -> AudioBuffer:
    rng = np.random.default_rng(seed)
    samples = rng.uniform(-amplitude, amplitude, size=(channels, round(seconds * rate)))
    return AudioBuffer(sample_rate=rate, samples=samples)


def basis(dim: int, index: int, scale: float = 1.0) -> np.ndarray:
    vec = np.zeros(dim)
    vec[index] = scale
    return vec


def column_heatmap(width: int, height: int, column: int, value: float = 1.0) -> dict:
    """Grid dict with one hot column; the fixture-file representation."""
    values = np.zeros((height, width))
    values[:, column] = value
    return {"w": width, "h": height, "values": [float(v) for v in values.ravel()]}


def sweep_heatmaps(count: int, width: int = 10, height: int = 6) -> list[dict]:
    """Single-column blobs sweeping left to right across `count` grids."""
    return [
        column_heatmap(width, height, round(i * (width - 1) / (count - 1)))
        for i in range(count)
    ]


@dataclass
class FixtureProject:
    root: Path
    media_dir: Path
    catalog_path: Path
    embed_fixture: Path
    saliency_fixture: Path
    fps: float
    # by-construction facts the tests assert against
    scene_boundaries: list[int] = field(default_factory=list)
    intervals: dict[tuple[int, str], tuple[int, int]] = field(default_factory=dict)

    @property
    def embed_spec(self) -> str:
        return f"fixture:{self.embed_fixture}"

    @property
    def saliency_spec(self) -> str:
        return f"fixture:{self.saliency_fixture}"


def build_golden(root: Path) -> FixtureProject:
    """Two-scene project: a moving 'bell' emitter in scene 0, a static 'dog'
    in scene 1, 'street'/'room' ambients, all backed by fixture files.

    Facts by construction (fps 10, 20 frames per scene):
      scene boundary at frame 20; bell visible scene-relative [4, 17);
      dog visible scene-relative [4, 16); street outranks room everywhere.
    """
    root = Path(root)
    fps = 10.0
    w, h = 64, 48
    dim = 8
    bell_visible = range(4, 17)  # scene 0, scene-relative
    dog_visible = range(4, 16)  # scene 1, scene-relative

    scene0_bg = solid(h, w, (40, 60, 160))
    scene1_bg = solid(h, w, (150, 60, 50))

    frames: list[np.ndarray] = []
    keys: list[str] = []
    images: dict[str, list[float]] = {}
    maps: dict[str, dict] = {}

    def bell_x(rel_index: int) -> float:
        steps = len(bell_visible) - 1
        return 0.1 + 0.8 * (rel_index - bell_visible.start) / steps

    for i in range(20):
        key = f"f{i:03d}"
        keys.append(key)
        visible = i in bell_visible
        if visible:
            x = bell_x(i)
            frames.append(with_blob(scene0_bg, x, 0.5, 5, (230, 200, 40)))
            maps[f"{key}|bell"] = column_heatmap(8, 6, round(x * 7))
        else:
            frames.append(scene0_bg.copy())
        vec = basis(dim, 4) + (basis(dim, 0) if visible else 0) + 0.35 * basis(dim, 2) + 0.1 * basis(dim, 3)
        images[key] = [float(v) for v in vec]

    for i in range(20):
        key = f"f{20 + i:03d}"
        keys.append(key)
        visible = i in dog_visible
        if visible:
            frames.append(with_blob(scene1_bg, 0.3, 0.5, 5, (90, 70, 40)))
            maps[f"{key}|dog"] = column_heatmap(8, 6, round(0.3 * 7))
        else:
            frames.append(scene1_bg.copy())
        vec = basis(dim, 5) + (basis(dim, 1) if visible else 0) + 0.35 * basis(dim, 2) + 0.1 * basis(dim, 3)
        images[key] = [float(v) for v in vec]

    media_dir = write_frame_dir(root / "media", frames, fps, keys)

    texts = {
        "bicycle bell": basis(dim, 0),
        "dog barking": basis(dim, 1),
        "busy street": basis(dim, 2),
        "quiet room": basis(dim, 3),
    }
    embed_fixture = root / "embeddings.json"
    embed_fixture.write_text(
        json.dumps(
            {
                "dimension": dim,
                "images": images,
                "texts": {k: [float(x) for x in v] for k, v in texts.items()},
            }
        )
    )

    saliency_fixture = root / "saliency.json"
    saliency_fixture.write_text(json.dumps({"maps": maps}))

    clips_dir = root / "clips"
    clips_dir.mkdir(parents=True, exist_ok=True)
    write_wav(tone(0.8, 880.0), clips_dir / "bell_short.wav")
    write_wav(tone(3.0, 880.0), clips_dir / "bell_long.wav")
    write_wav(tone(2.5, 523.0), clips_dir / "dog.wav")
    write_wav(noise(1.5, seed=7), clips_dir / "street.wav")
    write_wav(noise(2.5, seed=8, channels=2), clips_dir / "room.wav")

    catalog_path = root / "catalog.json"
    catalog_path.write_text(
        json.dumps(
            {
                "labels": [
                    {"id": "bell", "text": "bicycle bell", "category": "effects"},
                    {"id": "dog", "text": "dog barking", "category": "effects"},
                    {"id": "street", "text": "busy street", "category": "ambients"},
                    {"id": "room", "text": "quiet room", "category": "ambients"},
                ],
                "clips": [
                    {"label_id": "bell", "path": "clips/bell_short.wav", "duration_s": 0.8, "sample_rate": 48000, "channels": 1},
                    {"label_id": "bell", "path": "clips/bell_long.wav", "duration_s": 3.0, "sample_rate": 48000, "channels": 1},
                    {"label_id": "dog", "path": "clips/dog.wav", "duration_s": 2.5, "sample_rate": 48000, "channels": 1},
                    {"label_id": "street", "path": "clips/street.wav", "duration_s": 1.5, "sample_rate": 48000, "channels": 1},
                    {"label_id": "room", "path": "clips/room.wav", "duration_s": 2.5, "sample_rate": 48000, "channels": 2},
                ],
            },
            indent=2,
        )
    )

    return FixtureProject(
        root=root,
        media_dir=media_dir,
        catalog_path=catalog_path,
        embed_fixture=embed_fixture,
        saliency_fixture=saliency_fixture,
        fps=fps,
        scene_boundaries=[0, 20, 40],
        intervals={(0, "bell"): (4, 17), (1, "dog"): (4, 16)},
    )


def build_multiobject(root: Path) -> FixtureProject:
    """One scene where two emitters overlap in time: 'horn' on the left during
    frames [2, 12), 'drum' on the right during [8, 18)."""
    root = Path(root)
    fps = 10.0
    w, h = 64, 48
    dim = 6
    bg = solid(h, w, (30, 120, 90))

    frames: list[np.ndarray] = []
    keys: list[str] = []
    images: dict[str, list[float]] = {}
    maps: dict[str, dict] = {}
    for i in range(20):
        key = f"f{i:03d}"
        keys.append(key)
        horn = 2 <= i < 12
        drum = 8 <= i < 18
        frame = bg.copy()
        if horn:
            frame = with_blob(frame, 0.15, 0.5, 5, (240, 240, 240))
            maps[f"{key}|horn"] = column_heatmap(8, 6, 1)
        if drum:
            frame = with_blob(frame, 0.85, 0.5, 5, (10, 10, 10))
            maps[f"{key}|drum"] = column_heatmap(8, 6, 6)
        frames.append(frame)
        vec = basis(dim, 3) + (basis(dim, 0) if horn else 0) + (basis(dim, 1) if drum else 0) + 0.3 * basis(dim, 2)
        images[key] = [float(v) for v in vec]

    media_dir = write_frame_dir(root / "media", frames, fps, keys)
    (root / "embeddings.json").write_text(
        json.dumps(
            {
                "dimension": dim,
                "images": images,
                "texts": {
                    "car horn": [float(v) for v in basis(dim, 0)],
                    "drum hit": [float(v) for v in basis(dim, 1)],
                    "concert hall": [float(v) for v in basis(dim, 2)],
                },
            }
        )
    )
    (root / "saliency.json").write_text(json.dumps({"maps": maps}))

    clips_dir = root / "clips"
    clips_dir.mkdir(parents=True, exist_ok=True)
    write_wav(tone(2.0, 660.0), clips_dir / "horn.wav")
    write_wav(tone(2.0, 220.0), clips_dir / "drum.wav")
    write_wav(noise(2.5, seed=9), clips_dir / "hall.wav")
    (root / "catalog.json").write_text(
        json.dumps(
            {
                "labels": [
                    {"id": "horn", "text": "car horn", "category": "effects"},
                    {"id": "drum", "text": "drum hit", "category": "effects"},
                    {"id": "hall", "text": "concert hall", "category": "ambients"},
                ],
                "clips": [
                    {"label_id": "horn", "path": "clips/horn.wav", "duration_s": 2.0, "sample_rate": 48000, "channels": 1},
                    {"label_id": "drum", "path": "clips/drum.wav", "duration_s": 2.0, "sample_rate": 48000, "channels": 1},
                    {"label_id": "hall", "path": "clips/hall.wav", "duration_s": 2.5, "sample_rate": 48000, "channels": 1},
                ],
            }
        )
    )
    return FixtureProject(
        root=root,
        media_dir=media_dir,
        catalog_path=root / "catalog.json",
        embed_fixture=root / "embeddings.json",
        saliency_fixture=root / "saliency.json",
        fps=fps,
        scene_boundaries=[0, 20],
        intervals={(0, "horn"): (2, 12), (0, "drum"): (8, 18)},
    )
