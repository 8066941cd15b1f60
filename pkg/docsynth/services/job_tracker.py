"""In-memory thread-safe state of the current generation run."""

import secrets
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

from docsynth.models.manifest import SampleFailure


class JobStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    PARTIAL = "partial"  # finished with per-sample failures
    FAILED = "failed"
    INTERRUPTED = "interrupted"


@dataclass
class GenerationJob:
    job_id: str
    output_root: str
    total: int = 0
    status: JobStatus = JobStatus.PENDING
    phase: str = ""
    generated: int = 0
    skipped: int = 0
    failures: list[SampleFailure] = field(default_factory=list)
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    completed_at: str = ""
    phase_started: float = 0.0  # monotonic clock
    phase_seconds: dict[str, float] = field(default_factory=dict)

    @property
    def done(self) -> int:
        return self.generated + self.skipped + len(self.failures)


_jobs: dict[str, GenerationJob] = {}
_lock = threading.Lock()


def create_job(output_root: str, total: int = 0) -> str:
    """Create a new job and return its ID (12-char hex)."""
    job_id = secrets.token_hex(6)
    job = GenerationJob(job_id=job_id, output_root=output_root, total=total)
    with _lock:
        _jobs[job_id] = job
    return job_id


def get_job(job_id: str) -> Optional[GenerationJob]:
    with _lock:
        return _jobs.get(job_id)


def update_job(job_id: str, **kwargs) -> None:
    """Update fields on an existing job."""
    with _lock:
        job = _jobs.get(job_id)
        if job is None:
            return
        for key, value in kwargs.items():
            if hasattr(job, key):
                setattr(job, key, value)


def record_generated(job_id: str, count: int = 1) -> int:
    """Bump the generated counter; returns the number of samples accounted for."""
    with _lock:
        job = _jobs[job_id]
        job.generated += count
        return job.done


def record_skipped(job_id: str, count: int = 1) -> None:
    with _lock:
        _jobs[job_id].skipped += count


def record_failure(job_id: str, failure: SampleFailure) -> int:
    """Append to the failure list; returns the number of samples accounted for."""
    with _lock:
        job = _jobs[job_id]
        job.failures.append(failure)
        return job.done


def failures(job_id: str) -> list[SampleFailure]:
    """Failures sorted by sample id, independent of completion order."""
    with _lock:
        return sorted(_jobs[job_id].failures, key=lambda f: f.sample_id)


def _close_phase(job: GenerationJob, now: float) -> None:
    if job.phase:
        job.phase_seconds[job.phase] = job.phase_seconds.get(job.phase, 0.0) + now - job.phase_started


def enter_phase(job_id: str, phase: str) -> None:
    """Charge the elapsed time to the current phase and switch to `phase`."""
    now = time.monotonic()
    with _lock:
        job = _jobs[job_id]
        _close_phase(job, now)
        job.phase, job.phase_started = phase, now


def finish_job(job_id: str, status: JobStatus) -> dict[str, float]:
    """Close the open phase, stamp completion and return seconds per phase."""
    now = time.monotonic()
    with _lock:
        job = _jobs[job_id]
        _close_phase(job, now)
        job.phase = ""
        job.status = status
        job.completed_at = datetime.now(timezone.utc).isoformat()
        return dict(job.phase_seconds)


def get_running_jobs() -> list[GenerationJob]:
    with _lock:
        return [j for j in _jobs.values() if j.status == JobStatus.RUNNING]
