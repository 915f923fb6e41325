"""Minimal background job runner for generation: one worker thread per job,
cooperative cancellation, atomic progress snapshots."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable


@dataclass
class JobStatus:
    id: str
    state: str = "queued"  # queued | running | done | error | cancelled
    scene: int = 0
    total_scenes: int = 0
    stage: str = ""
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "state": self.state,
            "progress": {"scene": self.scene, "total_scenes": self.total_scenes, "stage": self.stage},
            "error": self.error,
        }


@dataclass
class _Job:
    status: JobStatus
    cancel_event: threading.Event = field(default_factory=threading.Event)
    thread: threading.Thread | None = None


class JobManager:
    def __init__(self) -> None:
        self._jobs: dict[str, _Job] = {}
        self._lock = threading.Lock()

    def start(self, work: Callable[[Callable[[int, int, str], None], Callable[[], bool]], None]) -> str:
        """Run work(progress, cancelled) on a daemon thread; returns the job id."""
        job_id = uuid.uuid4().hex[:12]
        job = _Job(status=JobStatus(id=job_id))
        with self._lock:
            self._jobs[job_id] = job

        def progress(scene: int, total: int, stage: str) -> None:
            with self._lock:
                job.status.scene = scene
                job.status.total_scenes = total
                job.status.stage = stage

        def run() -> None:
            with self._lock:
                job.status.state = "running"
            try:
                work(progress, job.cancel_event.is_set)
            except Exception as exc:  # noqa: BLE001 - job state carries the error
                with self._lock:
                    if job.cancel_event.is_set():
                        job.status.state = "cancelled"
                    else:
                        job.status.state = "error"
                        job.status.error = str(exc)
                return
            with self._lock:
                job.status.state = "done"

        job.thread = threading.Thread(target=run, daemon=True)
        job.thread.start()
        return job_id

    def status(self, job_id: str) -> JobStatus | None:
        with self._lock:
            job = self._jobs.get(job_id)
            return None if job is None else JobStatus(**vars(job.status))

    def cancel(self, job_id: str) -> bool:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            return False
        job.cancel_event.set()
        return True

    def any_running(self) -> bool:
        with self._lock:
            return any(j.status.state in ("queued", "running") for j in self._jobs.values())

    def wait(self, job_id: str, timeout: float | None = None) -> None:
        with self._lock:
            job = self._jobs.get(job_id)
        if job and job.thread:
            job.thread.join(timeout)
