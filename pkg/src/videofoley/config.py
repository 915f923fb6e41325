"""One bundle for every stage's tunables, loadable from a JSON file."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from videofoley.audiomix import MixConfig
from videofoley.classify import ClassifyConfig
from videofoley.errors import InputError
from videofoley.scenes import SceneConfig
from videofoley.spatial import SpatialConfig
from videofoley.sync import SyncConfig


@dataclass(frozen=True)
class AppConfig:
    scene: SceneConfig = field(default_factory=SceneConfig)
    classify: ClassifyConfig = field(default_factory=ClassifyConfig)
    sync: SyncConfig = field(default_factory=SyncConfig)
    spatial: SpatialConfig = field(default_factory=SpatialConfig)
    mix: MixConfig = field(default_factory=MixConfig)
    classify_fps: float = 4.0  # frame sampling rate for scene classification
    prompt_template: str = ""  # e.g. "a photo of {}"; empty embeds label text verbatim

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["spatial"]["occlusion_fill"] = list(self.spatial.occlusion_fill)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> AppConfig:
        def build(config_cls, section: dict):
            known = {f.name for f in fields(config_cls)}
            unknown = set(section) - known
            if unknown:
                raise InputError(f"unknown config keys {sorted(unknown)} for {config_cls.__name__}")
            return config_cls(**section)

        sections = dict(doc)
        spatial = dict(sections.pop("spatial", {}))
        if "occlusion_fill" in spatial:
            spatial["occlusion_fill"] = tuple(spatial["occlusion_fill"])
        return cls(
            scene=build(SceneConfig, sections.pop("scene", {})),
            classify=build(ClassifyConfig, sections.pop("classify", {})),
            sync=build(SyncConfig, sections.pop("sync", {})),
            spatial=build(SpatialConfig, spatial),
            mix=build(MixConfig, sections.pop("mix", {})),
            classify_fps=float(sections.pop("classify_fps", 4.0)),
            prompt_template=str(sections.pop("prompt_template", "")),
        )


def load_config(path: str | Path | None) -> AppConfig:
    if path is None:
        return AppConfig()
    path = Path(path)
    if not path.is_file():
        raise InputError(f"config file not found: {path}")
    return AppConfig.from_dict(json.loads(path.read_text()))
