"""Embedding backends: image/text to unit vectors in a joint space.

Three backends share one contract: a fixture file (normative for tests), an
external model sidecar speaking line-delimited JSON over stdio or TCP, and
anything else a caller supplies that satisfies Embedder. Engine code never
depends on a concrete backend.
"""

from __future__ import annotations

import base64
import json
import shlex
import socket
import subprocess
import threading
from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np

from videofoley.errors import BackendError, InputError
from videofoley.media import Frame, write_ppm


def normalize(values) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1:
        raise ValueError("embedding must be a 1-d vector")
    norm = float(np.linalg.norm(vec))
    if norm == 0 or not np.isfinite(norm):
        raise BackendError("invalid embedding: zero or non-finite norm")
    return vec / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of two unit vectors; raises on dimension mismatch."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a, b))


class Embedder(ABC):
    """Backend contract: deterministic image/text encoders with a fixed dimension.

    Text embeddings are memoized per session, which also pins determinism.
    single_flight backends are serialized by the engine.
    """

    single_flight = False

    def __init__(self) -> None:
        self._text_memo: dict[str, np.ndarray] = {}

    @property
    @abstractmethod
    def dimension(self) -> int: ...

    @abstractmethod
    def _embed_image(self, frame: Frame) -> np.ndarray: ...

    @abstractmethod
    def _embed_text(self, text: str) -> np.ndarray: ...

    def embed_image(self, frame: Frame) -> np.ndarray:
        return normalize(self._embed_image(frame))

    def embed_text(self, text: str) -> np.ndarray:
        if not text:
            raise ValueError("empty label")
        if text not in self._text_memo:
            self._text_memo[text] = normalize(self._embed_text(text))
        return self._text_memo[text]


def scene_embedding(embedder: Embedder, frames: list[Frame]) -> np.ndarray:
    """L2-normalized mean of the frame embeddings."""
    if not frames:
        raise ValueError("scene_embedding needs at least one frame")
    stacked = np.stack([embedder.embed_image(f) for f in frames])
    return normalize(stacked.mean(axis=0))


class PromptedEmbedder(Embedder):
    """Wraps a backend, formatting label text through a prompt template."""

    def __init__(self, inner: Embedder, template: str) -> None:
        super().__init__()
        if "{}" not in template:
            raise ValueError("prompt template must contain '{}'")
        self._inner = inner
        self._template = template
        self.single_flight = inner.single_flight

    @property
    def dimension(self) -> int:
        return self._inner.dimension

    def _embed_image(self, frame: Frame) -> np.ndarray:
        return self._inner.embed_image(frame)

    def _embed_text(self, text: str) -> np.ndarray:
        return self._inner.embed_text(self._template.format(text))


class FixtureEmbedder(Embedder):
    """Embeddings from a JSON fixture file; frames are looked up by frame key."""

    def __init__(self, path: str | Path) -> None:
        super().__init__()
        path = Path(path)
        if not path.is_file():
            raise InputError(f"embedding fixture not found: {path}")
        doc = json.loads(path.read_text())
        self._dimension = int(doc["dimension"])
        self._images = {k: normalize(v) for k, v in doc.get("images", {}).items()}
        self._texts = {k: normalize(v) for k, v in doc.get("texts", {}).items()}
        for vec in list(self._images.values()) + list(self._texts.values()):
            if vec.shape != (self._dimension,):
                raise BackendError("fixture vector dimension does not match declared dimension")

    @property
    def dimension(self) -> int:
        return self._dimension

    def _embed_image(self, frame: Frame) -> np.ndarray:
        if frame.key is None or frame.key not in self._images:
            raise BackendError(f"no fixture embedding for frame key {frame.key!r}")
        return self._images[frame.key]

    def _embed_text(self, text: str) -> np.ndarray:
        if text not in self._texts:
            raise BackendError(f"no fixture embedding for text {text!r}")
        return self._texts[text]


class LineChannel:
    """One JSON object per line over a subprocess' stdio or a TCP socket.

    Requests carry increasing ids; responses may arrive out of order and are
    buffered until their id is requested. Single-flight per channel lock.
    """

    def __init__(self, spec: str) -> None:
        self._lock = threading.Lock()
        self._pending: dict[int, dict] = {}
        self._next_id = 1
        self._proc: subprocess.Popen | None = None
        if spec.startswith("tcp:"):
            host, _, port = spec[4:].rpartition(":")
            sock = socket.create_connection((host or "127.0.0.1", int(port)))
            self._reader = sock.makefile("r", encoding="utf-8")
            self._writer = sock.makefile("w", encoding="utf-8")
        else:
            self._proc = subprocess.Popen(
                shlex.split(spec),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
            self._reader = self._proc.stdout
            self._writer = self._proc.stdin

    def request(self, payload: dict) -> dict:
        with self._lock:
            rid = self._next_id
            self._next_id += 1
            try:
                self._writer.write(json.dumps({"id": rid, **payload}) + "\n")
                self._writer.flush()
            except (BrokenPipeError, OSError) as exc:
                raise BackendError(f"sidecar unavailable: {exc}") from exc
            while rid not in self._pending:
                line = self._reader.readline()
                if not line:
                    raise BackendError("sidecar closed the connection")
                try:
                    msg = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise BackendError(f"sidecar sent invalid JSON: {exc}") from exc
                self._pending[int(msg["id"])] = msg
            response = self._pending.pop(rid)
        if "error" in response:
            raise BackendError(f"sidecar error: {response['error']}")
        return response

    def close(self) -> None:
        if self._proc is not None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)


def frame_to_ppm_base64(frame: Frame) -> str:
    return base64.b64encode(write_ppm(frame.pixels)).decode("ascii")


class SidecarEmbedder(Embedder):
    """Embeddings served by an external process over the line protocol.

    The dimension is learned from the first response and enforced afterwards.
    """

    single_flight = True

    def __init__(self, spec: str, channel: LineChannel | None = None) -> None:
        super().__init__()
        self.channel = channel or LineChannel(spec)
        self._dimension: int | None = None

    @property
    def dimension(self) -> int:
        if self._dimension is None:
            raise BackendError("sidecar dimension unknown before the first request")
        return self._dimension

    def _receive(self, response: dict) -> np.ndarray:
        vec = normalize(response["embedding"])
        if self._dimension is None:
            self._dimension = vec.shape[0]
        elif vec.shape[0] != self._dimension:
            raise BackendError(
                f"sidecar changed dimension: {vec.shape[0]} vs {self._dimension}"
            )
        return vec

    def _embed_image(self, frame: Frame) -> np.ndarray:
        return self._receive(
            self.channel.request({"kind": "image", "ppm_base64": frame_to_ppm_base64(frame)})
        )

    def _embed_text(self, text: str) -> np.ndarray:
        return self._receive(self.channel.request({"kind": "text", "text": text}))

    def close(self) -> None:
        self.channel.close()
