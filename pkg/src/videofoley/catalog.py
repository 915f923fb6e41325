"""Sound clip library: manifest loading and duration-aware clip selection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from videofoley.errors import InputError


class Category(str, Enum):
    EFFECTS = "effects"
    AMBIENTS = "ambients"


@dataclass(frozen=True)
class SoundLabel:
    id: str
    text: str
    category: Category


@dataclass(frozen=True)
class AudioClipRef:
    label_id: str
    path: Path
    duration_s: float
    sample_rate: int
    channels: int


@dataclass(frozen=True)
class Catalog:
    """Immutable library of labels and their clips, in manifest order."""

    labels: tuple[SoundLabel, ...]
    clips: tuple[AudioClipRef, ...]
    _by_id: dict[str, SoundLabel] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {label.id: label for label in self.labels})

    def label(self, label_id: str) -> SoundLabel:
        try:
            return self._by_id[label_id]
        except KeyError:
            raise InputError(f"unknown label {label_id!r}") from None

    def has_label(self, label_id: str) -> bool:
        return label_id in self._by_id

    def clips_for(self, label_id: str) -> list[AudioClipRef]:
        return [c for c in self.clips if c.label_id == label_id]


def load_manifest(path: str | Path) -> Catalog:
    """Load a catalog manifest (JSON) and validate referential integrity.

    Clip paths are resolved relative to the manifest location. Raises
    InputError on missing files, duplicate ids, unresolved label references,
    or labels with zero clips.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest is not valid JSON ({path}, line {exc.lineno}): {exc.msg}") from exc

    labels: list[SoundLabel] = []
    seen: set[str] = set()
    for i, entry in enumerate(doc.get("labels", [])):
        label = _parse_label(entry, i)
        if label.id in seen:
            raise InputError(f"duplicate label id {label.id!r} (labels[{i}])")
        seen.add(label.id)
        labels.append(label)

    clips: list[AudioClipRef] = []
    for i, entry in enumerate(doc.get("clips", [])):
        clip = _parse_clip(entry, i, base=path.parent)
        if clip.label_id not in seen:
            raise InputError(f"unresolved label {clip.label_id!r} (clips[{i}])")
        clips.append(clip)

    with_clips = {c.label_id for c in clips}
    for label in labels:
        if label.id not in with_clips:
            raise InputError(f"label {label.id!r} has no clips")

    return Catalog(labels=tuple(labels), clips=tuple(clips))


def _parse_label(entry: dict, index: int) -> SoundLabel:
    for key in ("id", "text", "category"):
        if key not in entry:
            raise InputError(f"labels[{index}] missing field {key!r}")
    if not entry["text"]:
        raise InputError(f"labels[{index}] has empty text")
    try:
        category = Category(entry["category"])
    except ValueError:
        raise InputError(
            f"labels[{index}] category must be 'effects' or 'ambients', got {entry['category']!r}"
        ) from None
    return SoundLabel(id=str(entry["id"]), text=str(entry["text"]), category=category)


def _parse_clip(entry: dict, index: int, base: Path) -> AudioClipRef:
    for key in ("label_id", "path", "duration_s", "sample_rate", "channels"):
        if key not in entry:
            raise InputError(f"clips[{index}] missing field {key!r}")
    duration = float(entry["duration_s"])
    rate = int(entry["sample_rate"])
    channels = int(entry["channels"])
    if duration <= 0:
        raise InputError(f"clips[{index}] duration_s must be > 0")
    if rate <= 0:
        raise InputError(f"clips[{index}] sample_rate must be > 0")
    if channels not in (1, 2):
        raise InputError(f"clips[{index}] channels must be 1 or 2")
    clip_path = base / str(entry["path"])
    if not clip_path.is_file():
        raise InputError(f"clips[{index}] audio file not found: {clip_path}")
    return AudioClipRef(
        label_id=str(entry["label_id"]),
        path=clip_path,
        duration_s=duration,
        sample_rate=rate,
        channels=channels,
    )


def labels_by_category(catalog: Catalog, category: Category) -> list[SoundLabel]:
    """All labels of one category, manifest order preserved."""
    return [label for label in catalog.labels if label.category == category]


def select_clip(catalog: Catalog, label_id: str, required_duration: float) -> AudioClipRef:
    """Pick the clip for a label given the span it must cover.

    Returns the shortest clip whose duration covers required_duration; if none
    is long enough, the longest available clip (the renderer loops it). Ties
    break by manifest order.
    """
    catalog.label(label_id)
    candidates = catalog.clips_for(label_id)
    long_enough = [c for c in candidates if c.duration_s >= required_duration]
    if long_enough:
        return min(long_enough, key=lambda c: c.duration_s)
    return max(candidates, key=lambda c: c.duration_s)


def catalog_to_manifest(catalog: Catalog, base: Path) -> dict:
    """Re-serialize a catalog to the manifest schema (paths relative to base)."""
    return {
        "labels": [
            {"id": l.id, "text": l.text, "category": l.category.value} for l in catalog.labels
        ],
        "clips": [
            {
                "label_id": c.label_id,
                "path": _relative_or_absolute(c.path, base),
                "duration_s": c.duration_s,
                "sample_rate": c.sample_rate,
                "channels": c.channels,
            }
            for c in catalog.clips
        ],
    }


def _relative_or_absolute(path: Path, base: Path) -> str:
    try:
        return path.relative_to(base).as_posix()
    except ValueError:
        return str(path)
