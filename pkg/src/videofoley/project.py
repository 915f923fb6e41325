"""Project state: everything the pipeline computes, persisted as one JSON file.

Generated WAVs live in an artifacts/ directory next to the project file and
carry content hashes in their names, so stale artifacts can never be read
back by accident: changing a selection drops the scene's references.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from videofoley.classify import Recommendation
from videofoley.config import AppConfig
from videofoley.errors import InputError
from videofoley.scenes import Scene


@dataclass
class Selection:
    effects: list[str]
    ambient: str


@dataclass
class SceneRecommendations:
    effects: list[Recommendation]
    ambients_visual: list[Recommendation]  # pure visual ranking
    ambients: list[Recommendation]  # reranked with the current effect selection


@dataclass
class ChunkPreview:
    label_id: str
    time_range: tuple[float, float]
    reference_frame: int
    pan: float
    gain: float
    heatmap: dict  # {"w", "h", "values"}


@dataclass
class TrackArtifact:
    label_id: str
    role: str  # "effect" | "ambient"
    wav: str  # path relative to the project file


@dataclass
class SceneArtifacts:
    tracks: list[TrackArtifact]
    mix_wav: str
    chunk_previews: list[ChunkPreview]
    flags: list[str] = field(default_factory=list)


@dataclass
class Project:
    media_dir: str
    catalog_path: str
    config: AppConfig
    embed_backend: str
    saliency_backend: str
    scenes: list[Scene]
    recommendations: dict[int, SceneRecommendations]
    selections: dict[int, Selection]
    generated: dict[int, SceneArtifacts] = field(default_factory=dict)

    def invalidate_scene(self, scene_id: int) -> None:
        self.generated.pop(scene_id, None)

    @property
    def is_generated(self) -> bool:
        return all(s.id in self.generated for s in self.scenes)

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "media_dir": self.media_dir,
            "catalog_path": self.catalog_path,
            "config": self.config.to_dict(),
            "embed_backend": self.embed_backend,
            "saliency_backend": self.saliency_backend,
            "scenes": [
                {"id": s.id, "frame_range": list(s.frame_range), "time_range": list(s.time_range)}
                for s in self.scenes
            ],
            "recommendations": {
                str(i): {
                    "effects": [_rec_dict(r) for r in recs.effects],
                    "ambients_visual": [_rec_dict(r) for r in recs.ambients_visual],
                    "ambients": [_rec_dict(r) for r in recs.ambients],
                }
                for i, recs in self.recommendations.items()
            },
            "selections": {
                str(i): {"effects": sel.effects, "ambient": sel.ambient}
                for i, sel in self.selections.items()
            },
            "generated": {
                str(i): {
                    "tracks": [
                        {"label_id": t.label_id, "role": t.role, "wav": t.wav} for t in art.tracks
                    ],
                    "mix_wav": art.mix_wav,
                    "chunk_previews": [
                        {
                            "label_id": p.label_id,
                            "time_range": list(p.time_range),
                            "reference_frame": p.reference_frame,
                            "pan": p.pan,
                            "gain": p.gain,
                            "heatmap": p.heatmap,
                        }
                        for p in art.chunk_previews
                    ],
                    "flags": art.flags,
                }
                for i, art in self.generated.items()
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> Project:
        scenes = [
            Scene(id=s["id"], frame_range=tuple(s["frame_range"]), time_range=tuple(s["time_range"]))
            for s in doc["scenes"]
        ]
        recommendations = {
            int(i): SceneRecommendations(
                effects=[_rec_from(r) for r in recs["effects"]],
                ambients_visual=[_rec_from(r) for r in recs["ambients_visual"]],
                ambients=[_rec_from(r) for r in recs["ambients"]],
            )
            for i, recs in doc["recommendations"].items()
        }
        selections = {
            int(i): Selection(effects=list(sel["effects"]), ambient=sel["ambient"])
            for i, sel in doc["selections"].items()
        }
        generated = {
            int(i): SceneArtifacts(
                tracks=[TrackArtifact(**t) for t in art["tracks"]],
                mix_wav=art["mix_wav"],
                chunk_previews=[
                    ChunkPreview(
                        label_id=p["label_id"],
                        time_range=tuple(p["time_range"]),
                        reference_frame=p["reference_frame"],
                        pan=p["pan"],
                        gain=p["gain"],
                        heatmap=p["heatmap"],
                    )
                    for p in art["chunk_previews"]
                ],
                flags=list(art.get("flags", [])),
            )
            for i, art in doc.get("generated", {}).items()
        }
        return cls(
            media_dir=doc["media_dir"],
            catalog_path=doc["catalog_path"],
            config=AppConfig.from_dict(doc["config"]),
            embed_backend=doc["embed_backend"],
            saliency_backend=doc["saliency_backend"],
            scenes=scenes,
            recommendations=recommendations,
            selections=selections,
            generated=generated,
        )


def _rec_dict(r: Recommendation) -> dict:
    return {"label_id": r.label_id, "score": r.score, "rank": r.rank}


def _rec_from(doc: dict) -> Recommendation:
    return Recommendation(label_id=doc["label_id"], score=doc["score"], rank=doc["rank"])


def save_project(project: Project, path: str | Path) -> None:
    """Atomic write: the project file is never observed half-written."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(project.to_dict(), indent=2, sort_keys=True))
    os.replace(tmp, path)


def load_project(path: str | Path) -> Project:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"project file not found: {path}")
    return Project.from_dict(json.loads(path.read_text()))


def artifacts_dir(project_path: str | Path) -> Path:
    return Path(project_path).parent / "artifacts"
