"""Frame-directory loading and frame sampling.

The canonical input is a pre-extracted frame directory: meta.json plus
zero-padded NNNNNN.ppm (binary P6) or NNNNNN.png files. PPM is parsed
directly for bit-exact fixtures; PNG goes through Pillow.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from videofoley.errors import InputError

_FRAME_NAME = re.compile(r"^(\d{6})\.(ppm|png)$")


@dataclass(frozen=True)
class Frame:
    index: int
    timestamp: float
    pixels: np.ndarray  # (H, W, 3) uint8
    key: str | None = None

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class FrameSequence:
    frames: tuple[Frame, ...]
    fps: float

    @property
    def duration(self) -> float:
        return len(self.frames) / self.fps

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height


def read_ppm(data: bytes) -> np.ndarray:
    """Decode a binary P6 PPM (maxval 255) into an (H, W, 3) uint8 array."""
    tokens: list[int] = []
    pos = 0
    if data[:2] != b"P6":
        raise InputError("not a P6 ppm")
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InputError("truncated ppm header")
        tokens.append(int(data[start:pos]))
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = tokens
    if maxval != 255:
        raise InputError(f"unsupported ppm maxval {maxval}")
    expected = width * height * 3
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise InputError("truncated ppm raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)


def write_ppm(pixels: np.ndarray) -> bytes:
    h, w, _ = pixels.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def _read_frame_file(path: Path) -> np.ndarray:
    if path.suffix == ".ppm":
        return read_ppm(path.read_bytes())
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8)


def load_frame_sequence(directory: str | Path) -> FrameSequence:
    """Load a frame directory: meta.json + contiguously numbered frames.

    Raises InputError on missing meta, no frames, non-contiguous numbering,
    or a resolution mismatch between frames.
    """
    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.is_file():
        raise InputError(f"missing meta.json in {directory}")
    meta = json.loads(meta_path.read_text())
    fps = float(meta.get("fps", 0))
    if fps <= 0:
        raise InputError("meta.json fps must be > 0")
    frame_keys = meta.get("frame_keys")

    numbered: dict[int, Path] = {}
    for entry in directory.iterdir():
        m = _FRAME_NAME.match(entry.name)
        if m:
            numbered[int(m.group(1))] = entry
    if not numbered:
        raise InputError(f"no frames in {directory}")
    indices = sorted(numbered)
    if indices != list(range(len(indices))):
        raise InputError(f"non-contiguous frame numbering in {directory}")

    frames: list[Frame] = []
    shape: tuple[int, int] | None = None
    for index in indices:
        pixels = _read_frame_file(numbered[index])
        if shape is None:
            shape = pixels.shape[:2]
        elif pixels.shape[:2] != shape:
            raise InputError(
                f"resolution mismatch at frame {index}: "
                f"{pixels.shape[1]}x{pixels.shape[0]} vs {shape[1]}x{shape[0]}"
            )
        key = None
        if frame_keys is not None and index < len(frame_keys):
            key = frame_keys[index]
        frames.append(Frame(index=index, timestamp=index / fps, pixels=pixels, key=key))

    if "width" in meta and frames[0].width != int(meta["width"]):
        raise InputError("meta.json width does not match frames")
    if "height" in meta and frames[0].height != int(meta["height"]):
        raise InputError("meta.json height does not match frames")
    return FrameSequence(frames=tuple(frames), fps=fps)


def sample_frames(seq: FrameSequence, target_rate: float) -> list[Frame]:
    """Subsample frames to roughly target_rate fps; always includes frame 0."""
    if target_rate <= 0:
        raise ValueError("target_rate must be > 0")
    if target_rate >= seq.fps:
        return list(seq.frames)
    stride = max(1, math.floor(seq.fps / target_rate))
    return [seq.frames[i] for i in range(0, len(seq.frames), stride)]
