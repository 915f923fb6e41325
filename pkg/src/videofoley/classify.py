"""Label ranking for a scene: effects, ambients, and selection-aware rerank."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from videofoley.catalog import Catalog, Category, SoundLabel, labels_by_category
from videofoley.embed import Embedder, cosine
from videofoley.errors import InputError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Recommendation:
    label_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class ClassifyConfig:
    top_k: int = 5
    rerank_blend: float = 0.5  # alpha: weight of the visual score in the rerank

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not 0 <= self.rerank_blend <= 1:
            raise ValueError("rerank_blend must be in [0, 1]")


def _rank(
    embedder: Embedder,
    scene_emb: np.ndarray,
    labels: list[SoundLabel],
    top_k: int,
) -> list[Recommendation]:
    scores = [cosine(scene_emb, embedder.embed_text(label.text)) for label in labels]
    order = sorted(range(len(labels)), key=lambda i: (-scores[i], i))
    return [
        Recommendation(label_id=labels[i].id, score=scores[i], rank=rank)
        for rank, i in enumerate(order[:top_k], start=1)
    ]


def rank_effects(
    embedder: Embedder,
    scene_emb: np.ndarray,
    catalog: Catalog,
    config: ClassifyConfig | None = None,
) -> list[Recommendation]:
    """Top-k effects labels by cosine against the scene embedding."""
    config = config or ClassifyConfig()
    labels = labels_by_category(catalog, Category.EFFECTS)
    if not labels:
        raise InputError("no effects labels in catalog")
    return _rank(embedder, scene_emb, labels, config.top_k)


def rank_ambients(
    embedder: Embedder,
    scene_emb: np.ndarray,
    catalog: Catalog,
    config: ClassifyConfig | None = None,
) -> list[Recommendation]:
    """Top-k ambients labels by cosine against the scene embedding."""
    config = config or ClassifyConfig()
    labels = labels_by_category(catalog, Category.AMBIENTS)
    if not labels:
        raise InputError("no ambient labels in catalog")
    return _rank(embedder, scene_emb, labels, config.top_k)


def rerank_ambients(
    embedder: Embedder,
    catalog: Catalog,
    ambient_recs: list[Recommendation],
    selected_effects: list[SoundLabel],
    config: ClassifyConfig | None = None,
) -> list[Recommendation]:
    """Blend each ambient's visual score with its text similarity to the
    selected effects: alpha * visual + (1 - alpha) * mean text-text cosine.

    An empty selection leaves the input untouched (logged, not an error).
    """
    config = config or ClassifyConfig()
    if not ambient_recs:
        raise InputError("no ambient recommendations to rerank")
    if not selected_effects:
        log.warning("rerank_ambients called with no selected effects; order unchanged")
        return list(ambient_recs)

    alpha = config.rerank_blend
    effect_vecs = [embedder.embed_text(e.text) for e in selected_effects]
    blended: list[float] = []
    for rec in ambient_recs:
        ambient_vec = embedder.embed_text(catalog.label(rec.label_id).text)
        text_sim = float(np.mean([cosine(vec, ambient_vec) for vec in effect_vecs]))
        blended.append(alpha * rec.score + (1 - alpha) * text_sim)

    order = sorted(range(len(ambient_recs)), key=lambda i: (-blended[i], i))
    return [
        Recommendation(label_id=ambient_recs[i].label_id, score=blended[i], rank=rank)
        for rank, i in enumerate(order, start=1)
    ]
