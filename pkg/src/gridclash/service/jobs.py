"""Minimal thread-backed job registry for the long-running endpoints
(leagues, profiles, tuning). Jobs report fractional progress and leave their
result payload behind for polling clients."""

from __future__ import annotations

import threading
import traceback
import uuid


class Job:
    def __init__(self, kind: str, output_dir: str | None = None):
        self.job_id = uuid.uuid4().hex[:12]
        self.kind = kind
        self.state = "queued"
        self.progress = 0.0
        self.message = ""
        self.result: dict | None = None
        self.output_dir = output_dir
        self._thread: threading.Thread | None = None

    def view(self) -> dict:
        return {
            "job_id": self.job_id,
            "kind": self.kind,
            "state": self.state,
            "progress": round(self.progress, 4),
            "message": self.message,
            "result": self.result,
            "output_dir": self.output_dir,
        }


class JobRegistry:
    def __init__(self):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, kind: str, fn, output_dir: str | None = None) -> Job:
        """Run ``fn(job)`` on a worker thread; the function sets
        ``job.progress`` as it goes and returns the result payload."""
        job = Job(kind, output_dir)

        def run():
            job.state = "running"
            try:
                job.result = fn(job)
                job.progress = 1.0
                job.state = "done"
            except Exception as exc:  # surfaced to the polling client
                job.state = "error"
                job.message = f"{type(exc).__name__}: {exc}"
                job.result = {"traceback": traceback.format_exc()}

        with self._lock:
            self._jobs[job.job_id] = job
        thread = threading.Thread(target=run, daemon=True)
        job._thread = thread
        thread.start()
        return job

    def get(self, job_id: str) -> Job | None:
        return self._jobs.get(job_id)

    def wait(self, job_id: str, timeout: float | None = None) -> Job:
        job = self._jobs[job_id]
        if job._thread is not None:
            job._thread.join(timeout)
        return job
