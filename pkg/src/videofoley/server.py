"""HTTP service over a project: the contract the browser UI consumes.

Mutations are serialized by a single writer lock; generation runs as a
background job polled via /api/jobs/{id}.
"""

from __future__ import annotations

import tempfile
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from videofoley import catalog as cat, pipeline
from videofoley.backends import make_embedder, make_saliency
from videofoley.embed import Embedder
from videofoley.errors import InputError, VideoFoleyError
from videofoley.jobs import JobManager
from videofoley.project import Project, load_project, save_project
from videofoley.spatial import SaliencyBackend


class SelectionBody(BaseModel):
    effects: list[str]
    ambient: str


def create_app(
    project_path: str | Path,
    embedder: Embedder | None = None,
    saliency: SaliencyBackend | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    project_path = Path(project_path)
    project: Project = load_project(project_path)
    if embedder is None:
        embedder = make_embedder(project.embed_backend, project.config.prompt_template)
    if saliency is None:
        saliency = make_saliency(project.saliency_backend, embedder, project.config.spatial)

    app = FastAPI(title="videofoley")
    jobs = JobManager()
    write_lock = threading.Lock()

    def scene_or_404(scene_id: int):
        for scene in project.scenes:
            if scene.id == scene_id:
                return scene
        raise HTTPException(status_code=404, detail=f"unknown scene {scene_id}")

    @app.exception_handler(VideoFoleyError)
    async def domain_error(_, exc: VideoFoleyError):
        status = 400 if isinstance(exc, InputError) else 502
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/api/project")
    def get_project():
        return project.to_dict()

    @app.get("/api/scenes")
    def get_scenes():
        return [
            {
                "id": s.id,
                "frame_range": list(s.frame_range),
                "time_range": list(s.time_range),
                "generated": s.id in project.generated,
                "selection": {
                    "effects": project.selections[s.id].effects,
                    "ambient": project.selections[s.id].ambient,
                },
            }
            for s in project.scenes
        ]

    @app.get("/api/scenes/{scene_id}/recommendations")
    def get_recommendations(scene_id: int):
        scene_or_404(scene_id)
        recs = project.recommendations[scene_id]
        return {
            "effects": [vars(r) for r in recs.effects],
            "ambients": [vars(r) for r in recs.ambients],
            "ambients_visual": [vars(r) for r in recs.ambients_visual],
        }

    @app.put("/api/scenes/{scene_id}/selection")
    def put_selection(scene_id: int, body: SelectionBody):
        scene_or_404(scene_id)
        with write_lock:
            if jobs.any_running():
                raise HTTPException(status_code=409, detail="generation in progress")
            pipeline.update_selection(project, scene_id, body.effects, body.ambient, embedder)
            save_project(project, project_path)
        return {
            "effects": project.selections[scene_id].effects,
            "ambient": project.selections[scene_id].ambient,
            "generated": scene_id in project.generated,
        }

    @app.post("/api/generate")
    def post_generate():
        with write_lock:
            if jobs.any_running():
                raise HTTPException(status_code=409, detail="generation already running")

            def work(progress, cancelled):
                pipeline.generate(
                    project, project_path, embedder, saliency, progress=progress, cancelled=cancelled
                )
                with write_lock:
                    save_project(project, project_path)

            job_id = jobs.start(work)
        return {"job_id": job_id}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        status = jobs.status(job_id)
        if status is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return status.to_dict()

    @app.post("/api/jobs/{job_id}/cancel")
    def cancel_job(job_id: str):
        if not jobs.cancel(job_id):
            raise HTTPException(status_code=404, detail="unknown job")
        return {"cancelled": True}

    @app.get("/api/scenes/{scene_id}/heatmaps")
    def get_heatmaps(scene_id: int):
        scene_or_404(scene_id)
        artifacts = project.generated.get(scene_id)
        if artifacts is None:
            raise HTTPException(status_code=409, detail="scene not generated")
        return {
            "chunks": [
                {
                    "label_id": p.label_id,
                    "time_range": list(p.time_range),
                    "reference_frame": p.reference_frame,
                    "pan": p.pan,
                    "gain": p.gain,
                    "heatmap": p.heatmap,
                }
                for p in artifacts.chunk_previews
            ]
        }

    @app.get("/api/scenes/{scene_id}/preview.wav")
    def get_scene_preview(scene_id: int):
        scene_or_404(scene_id)
        artifacts = project.generated.get(scene_id)
        if artifacts is None:
            raise HTTPException(status_code=409, detail="scene not generated")
        return FileResponse(project_path.parent / artifacts.mix_wav, media_type="audio/wav")

    @app.get("/api/clips/{label_id}/preview.wav")
    def get_clip_preview(label_id: str):
        catalog = cat.load_manifest(project.catalog_path)
        if not catalog.has_label(label_id):
            raise HTTPException(status_code=404, detail=f"unknown label {label_id}")
        clip = catalog.clips_for(label_id)[0]
        return FileResponse(clip.path, media_type="audio/wav")

    @app.get("/api/export.zip")
    def get_export():
        if not project.is_generated:
            raise HTTPException(status_code=409, detail="nothing generated")
        with tempfile.NamedTemporaryFile(suffix=".zip", delete=False) as handle:
            out = Path(handle.name)
        pipeline.export_stems(project, project_path, out)
        data = out.read_bytes()
        out.unlink()
        return Response(
            content=data,
            media_type="application/zip",
            headers={"Content-Disposition": "attachment; filename=stems.zip"},
        )

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
