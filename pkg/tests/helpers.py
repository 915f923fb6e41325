"""Shared test doubles and small constructors."""

from __future__ import annotations

import numpy as np

from videofoley.embed import Embedder, normalize
from videofoley.errors import BackendError
from videofoley.media import Frame


def make_frame(pixels: np.ndarray, index: int = 0, fps: float = 10.0, key: str | None = None) -> Frame:
    return Frame(index=index, timestamp=index / fps, pixels=np.asarray(pixels, dtype=np.uint8), key=key)


def gray_frame(h: int = 4, w: int = 4, value: int = 100, **kwargs) -> Frame:
    return make_frame(np.full((h, w, 3), value, dtype=np.uint8), **kwargs)


class ArrayEmbedder(Embedder):
    """Embeddings from dicts: frames looked up by key, texts by string."""

    def __init__(self, images: dict[str, np.ndarray] | None = None, texts: dict[str, np.ndarray] | None = None):
        super().__init__()
        self.images = {k: normalize(v) for k, v in (images or {}).items()}
        self.texts = {k: normalize(v) for k, v in (texts or {}).items()}

    @property
    def dimension(self) -> int:
        for vec in list(self.images.values()) + list(self.texts.values()):
            return vec.shape[0]
        raise BackendError("empty ArrayEmbedder")

    def _embed_image(self, frame: Frame):
        if frame.key is None or frame.key not in self.images:
            raise BackendError(f"no embedding for frame key {frame.key!r}")
        return self.images[frame.key]

    def _embed_text(self, text: str):
        if text not in self.texts:
            raise BackendError(f"no embedding for text {text!r}")
        return self.texts[text]


class PixelKeyEmbedder(Embedder):
    """Embeddings keyed by exact pixel content; drives occlusion tests."""

    def __init__(self, by_pixels: dict[bytes, np.ndarray], texts: dict[str, np.ndarray]):
        super().__init__()
        self.by_pixels = {k: normalize(v) for k, v in by_pixels.items()}
        self.texts = {k: normalize(v) for k, v in texts.items()}

    @property
    def dimension(self) -> int:
        return next(iter(self.texts.values())).shape[0]

    def _embed_image(self, frame: Frame):
        key = frame.pixels.tobytes()
        if key not in self.by_pixels:
            raise BackendError("no embedding for this pixel content")
        return self.by_pixels[key]

    def _embed_text(self, text: str):
        return self.texts[text]


def unit(dim: int, index: int) -> np.ndarray:
    vec = np.zeros(dim)
    vec[index] = 1.0
    return vec


def random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim)
    while np.linalg.norm(vec) < 1e-9:
        vec = rng.normal(size=dim)
    return vec / np.linalg.norm(vec)
