"""Backend spec strings -> concrete embedding / saliency backends.

Specs come from the CLI: "fixture:FILE" or "sidecar:CMD" for embeddings;
"fixture:FILE", "occlusion", or "sidecar:CMD" for saliency. Sidecar CMD may
be "tcp:HOST:PORT" to connect instead of spawning.
"""

from __future__ import annotations

from videofoley.embed import Embedder, FixtureEmbedder, PromptedEmbedder, SidecarEmbedder
from videofoley.errors import InputError
from videofoley.spatial import (
    FixtureSaliency,
    OcclusionSaliency,
    SaliencyBackend,
    SidecarSaliency,
    SpatialConfig,
)


def make_embedder(spec: str, prompt_template: str = "") -> Embedder:
    kind, _, arg = spec.partition(":")
    if kind == "fixture" and arg:
        embedder: Embedder = FixtureEmbedder(arg)
    elif kind == "sidecar" and arg:
        embedder = SidecarEmbedder(arg)
    else:
        raise InputError(f"unknown embed backend spec {spec!r} (use fixture:FILE or sidecar:CMD)")
    if prompt_template:
        embedder = PromptedEmbedder(embedder, prompt_template)
    return embedder


def make_saliency(spec: str, embedder: Embedder, config: SpatialConfig) -> SaliencyBackend:
    kind, _, arg = spec.partition(":")
    if kind == "fixture" and arg:
        return FixtureSaliency(arg)
    if kind == "occlusion":
        return OcclusionSaliency(embedder, config)
    if kind == "sidecar" and arg:
        return SidecarSaliency(arg)
    raise InputError(
        f"unknown saliency backend spec {spec!r} (use fixture:FILE, occlusion, or sidecar:CMD)"
    )
