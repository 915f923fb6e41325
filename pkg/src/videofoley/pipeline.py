"""End-to-end orchestration: analyze -> generate -> export.

A generation is reproducible: identical project inputs produce byte-identical
WAVs and a byte-identical stems archive (fixed zip timestamps, stored
members, canonical manifest JSON).
"""

from __future__ import annotations

import hashlib
import json
import math
import zipfile
from pathlib import Path
from typing import Callable

import numpy as np

from videofoley import audiomix, catalog as cat, classify, scenes as sc, spatial, sync
from videofoley.audiomix import AudioBuffer, MixConfig, Track, TrackRole
from videofoley.config import AppConfig
from videofoley.embed import Embedder, scene_embedding
from videofoley.errors import InputError
from videofoley.media import Frame, FrameSequence, load_frame_sequence
from videofoley.project import (
    ChunkPreview,
    Project,
    SceneArtifacts,
    SceneRecommendations,
    Selection,
    TrackArtifact,
    artifacts_dir,
)
from videofoley.spatial import SaliencyBackend

ProgressFn = Callable[[int, int, str], None]
CancelFn = Callable[[], bool]


class GenerationCancelled(Exception):
    pass


def analyze(
    media_dir: str | Path,
    catalog_path: str | Path,
    config: AppConfig,
    embedder: Embedder,
    embed_backend: str,
    saliency_backend: str,
) -> Project:
    """Split scenes, rank effects and ambients per scene, pre-select rank 1."""
    catalog = cat.load_manifest(catalog_path)
    if not cat.labels_by_category(catalog, cat.Category.AMBIENTS):
        raise InputError("no ambient labels in catalog")
    if not cat.labels_by_category(catalog, cat.Category.EFFECTS):
        raise InputError("no effects labels in catalog")
    seq = load_frame_sequence(media_dir)
    scene_list = sc.split_scenes(seq, config.scene)

    recommendations: dict[int, SceneRecommendations] = {}
    selections: dict[int, Selection] = {}
    for scene in scene_list:
        frames = _scene_frames(seq, scene)
        sampled = _sample_scene_frames(frames, seq.fps, config.classify_fps)
        emb = scene_embedding(embedder, sampled)
        effects = classify.rank_effects(embedder, emb, catalog, config.classify)
        ambients_visual = classify.rank_ambients(embedder, emb, catalog, config.classify)
        default_effects = [effects[0].label_id]
        ambients = classify.rerank_ambients(
            embedder,
            catalog,
            ambients_visual,
            [catalog.label(i) for i in default_effects],
            config.classify,
        )
        recommendations[scene.id] = SceneRecommendations(
            effects=effects, ambients_visual=ambients_visual, ambients=ambients
        )
        selections[scene.id] = Selection(effects=default_effects, ambient=ambients[0].label_id)

    return Project(
        media_dir=str(media_dir),
        catalog_path=str(catalog_path),
        config=config,
        embed_backend=embed_backend,
        saliency_backend=saliency_backend,
        scenes=scene_list,
        recommendations=recommendations,
        selections=selections,
    )


def update_selection(
    project: Project, scene_id: int, effects: list[str], ambient: str, embedder: Embedder
) -> None:
    """Apply a new selection, rerank the scene's ambients with it, and drop
    the scene's generated artifacts (they no longer match)."""
    if scene_id not in project.selections:
        raise InputError(f"unknown scene {scene_id}")
    catalog = cat.load_manifest(project.catalog_path)
    effects = list(dict.fromkeys(effects))  # dedupe, order preserved
    for label_id in effects:
        if catalog.label(label_id).category is not cat.Category.EFFECTS:
            raise InputError(f"label {label_id!r} is not an effects label")
    if catalog.label(ambient).category is not cat.Category.AMBIENTS:
        raise InputError(f"label {ambient!r} is not an ambients label")

    recs = project.recommendations[scene_id]
    if effects:
        recs.ambients = classify.rerank_ambients(
            embedder,
            catalog,
            recs.ambients_visual,
            [catalog.label(i) for i in effects],
            project.config.classify,
        )
    else:
        recs.ambients = list(recs.ambients_visual)
    project.selections[scene_id] = Selection(effects=list(effects), ambient=ambient)
    project.invalidate_scene(scene_id)


def generate(
    project: Project,
    project_path: str | Path,
    embedder: Embedder,
    saliency: SaliencyBackend,
    progress: ProgressFn | None = None,
    cancelled: CancelFn | None = None,
) -> None:
    """Render every scene's selected effects and ambient, stack the mixdown,
    and record per-chunk heatmap previews. Writes WAVs under artifacts/."""
    for scene in project.scenes:
        selection = project.selections.get(scene.id)
        if selection is None or not selection.effects or not selection.ambient:
            raise InputError(f"scene {scene.id} has no complete selection")

    catalog = cat.load_manifest(project.catalog_path)
    seq = load_frame_sequence(project.media_dir)
    out_dir = artifacts_dir(project_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    total = len(project.scenes)

    for scene in project.scenes:
        if cancelled and cancelled():
            raise GenerationCancelled()
        _report(progress, scene.id, total, "scoring frames")
        artifacts = _generate_scene(project, scene, seq, catalog, embedder, saliency, out_dir, progress, total)
        project.generated[scene.id] = artifacts
    _report(progress, total, total, "done")


def _generate_scene(
    project: Project,
    scene: sc.Scene,
    seq: FrameSequence,
    catalog: cat.Catalog,
    embedder: Embedder,
    saliency: SaliencyBackend,
    out_dir: Path,
    progress: ProgressFn | None,
    total: int,
) -> SceneArtifacts:
    config = project.config
    selection = project.selections[scene.id]
    frames = _scene_frames(seq, scene)
    scene_duration = scene.time_range[1] - scene.time_range[0]

    tracks: list[Track] = []
    previews: list[ChunkPreview] = []
    flags: list[str] = []

    for label_id in selection.effects:
        label = catalog.label(label_id)
        scores = sync.frame_scores(embedder, frames, label)
        intervals = sync.detect_intervals(
            scores, config.sync, label_id=label_id, fps=seq.fps
        )
        if not intervals:
            flags.append(f"no intervals: {label_id}")
            buffer = AudioBuffer(
                sample_rate=config.mix.render_sample_rate,
                samples=_silence(scene_duration, config.mix),
            )
            tracks.append(Track(label_id=label_id, role=TrackRole.EFFECT, buffer=buffer, scene_id=scene.id))
            continue

        _report(progress, scene.id, total, f"localizing {label_id}")
        rendered: list[tuple[float, AudioBuffer]] = []
        for interval in intervals:
            chunks = sync.chunk_interval(interval, seq.fps, config.sync)
            mixes = []
            for chunk in chunks:
                ref = frames[chunk.reference_frame]
                heat = saliency.saliency(ref, label)
                mix = spatial.chunk_mix_params(heat, chunk.time_range, config.spatial)
                mixes.append(mix)
                previews.append(
                    ChunkPreview(
                        label_id=label_id,
                        time_range=chunk.time_range,
                        reference_frame=chunk.reference_frame,
                        pan=mix.pan,
                        gain=mix.gain,
                        heatmap=spatial.heatmap_to_grid(heat),
                    )
                )
            duration = interval.time_range[1] - interval.time_range[0]
            clip_ref = cat.select_clip(catalog, label_id, duration)
            clip = audiomix.read_wav(clip_ref.path)
            rendered.append(
                (interval.time_range[0], audiomix.render_interval(clip, mixes, config.mix))
            )
        _report(progress, scene.id, total, f"rendering {label_id}")
        buffer = audiomix.effect_track(rendered, scene_duration, config.mix)
        tracks.append(Track(label_id=label_id, role=TrackRole.EFFECT, buffer=buffer, scene_id=scene.id))

    _report(progress, scene.id, total, "rendering ambient")
    ambient_ref = cat.select_clip(catalog, selection.ambient, scene_duration)
    ambient_clip = audiomix.read_wav(ambient_ref.path)
    ambient_buffer = audiomix.render_ambient(ambient_clip, scene_duration, config.mix)
    tracks.append(
        Track(label_id=selection.ambient, role=TrackRole.AMBIENT, buffer=ambient_buffer, scene_id=scene.id)
    )

    _report(progress, scene.id, total, "stacking")
    mixdown = audiomix.stack(tracks, config.mix)

    track_artifacts = []
    for track in tracks:
        name = _artifact_name(scene.id, track.role.value, track.label_id, track.buffer)
        audiomix.write_wav(track.buffer, out_dir / name)
        track_artifacts.append(
            TrackArtifact(label_id=track.label_id, role=track.role.value, wav=f"artifacts/{name}")
        )
    mix_name = _artifact_name(scene.id, "mix", "all", mixdown)
    audiomix.write_wav(mixdown, out_dir / mix_name)

    previews.sort(key=lambda p: (p.time_range[0], p.label_id))
    return SceneArtifacts(
        tracks=track_artifacts,
        mix_wav=f"artifacts/{mix_name}",
        chunk_previews=previews,
        flags=flags,
    )


def export_stems(project: Project, project_path: str | Path, out_path: str | Path) -> Path:
    """Write the per-scene stems zip: video refs, effect/ambient stems, the
    mixdown, and a manifest with content hashes. Byte-stable across runs."""
    if not project.is_generated:
        raise InputError("nothing generated: run generate before export")
    base = Path(project_path).parent
    out_path = Path(out_path)

    members: list[tuple[str, bytes]] = []
    manifest: dict = {"scenes": [], "config": project.config.to_dict()}
    for scene in project.scenes:
        artifacts = project.generated[scene.id]
        scene_members: dict[str, str] = {}

        video_ref = json.dumps(
            {
                "media_dir": project.media_dir,
                "frame_range": list(scene.frame_range),
                "time_range": list(scene.time_range),
            },
            sort_keys=True,
        ).encode()
        members.append((f"scene-{scene.id:02}-video.ref", video_ref))
        scene_members["video"] = f"scene-{scene.id:02}-video.ref"

        for track in artifacts.tracks:
            data = (base / track.wav).read_bytes()
            kind = "ambient" if track.role == "ambient" else "effects"
            name = f"scene-{scene.id:02}-{kind}-{track.label_id}.wav"
            members.append((name, data))
            scene_members[track.role + ":" + track.label_id] = name

        mix_data = (base / artifacts.mix_wav).read_bytes()
        members.append((f"scene-{scene.id:02}-mix.wav", mix_data))
        scene_members["mix"] = f"scene-{scene.id:02}-mix.wav"

        manifest["scenes"].append(
            {
                "id": scene.id,
                "time_range": list(scene.time_range),
                "effects": [t.label_id for t in artifacts.tracks if t.role == "effect"],
                "ambient": next(t.label_id for t in artifacts.tracks if t.role == "ambient"),
                "members": scene_members,
            }
        )

    manifest["hashes"] = {name: hashlib.sha256(data).hexdigest() for name, data in members}
    manifest_bytes = json.dumps(manifest, indent=2, sort_keys=True).encode()

    with zipfile.ZipFile(out_path, "w", compression=zipfile.ZIP_STORED) as archive:
        for name, data in [("manifest.json", manifest_bytes)] + members:
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            info.external_attr = 0o644 << 16
            archive.writestr(info, data)
    return out_path


def _scene_frames(seq: FrameSequence, scene: sc.Scene) -> list[Frame]:
    start, end = scene.frame_range
    return list(seq.frames[start:end])


def _sample_scene_frames(frames: list[Frame], fps: float, target_rate: float) -> list[Frame]:
    if target_rate >= fps:
        return list(frames)
    stride = max(1, math.floor(fps / target_rate))
    return frames[::stride]


def _silence(duration: float, config: MixConfig) -> np.ndarray:
    return np.zeros((2, round(duration * config.render_sample_rate)))


def _artifact_name(scene_id: int, role: str, label_id: str, buffer: AudioBuffer) -> str:
    digest = hashlib.sha256(audiomix.wav_bytes(buffer)).hexdigest()[:12]
    return f"scene{scene_id:02d}-{role}-{label_id}-{digest}.wav"


def _report(progress: ProgressFn | None, scene: int, total: int, stage: str) -> None:
    if progress:
        progress(scene, total, stage)
