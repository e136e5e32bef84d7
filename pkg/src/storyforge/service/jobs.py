"""Job lifecycle: a bounded worker pool drives one pipeline run per job.

State machine: queued -> writing -> reviewing -> directing -> rendering
-> assembling -> done, with failed reachable from any non-terminal
state. Transitions only ever move forward; the full history is recorded
on the job document.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import Future, ThreadPoolExecutor
from datetime import datetime, timezone

from ..errors import (
    BriefValidationError,
    InvalidRequestError,
    PipelineStageError,
    StoryforgeError,
)
from ..narrative import AnimationStyle, StoryBrief, brief_to_dict
from ..pipeline import Pipeline, StoryAgents, manifest_to_bytes
from ..store import BlobStore
from .config import ServiceConfig, load_voice_reference
from .records import RecordStore, new_id

log = logging.getLogger("storyforge.service")

STATE_ORDER = ("queued", "writing", "reviewing", "directing", "rendering", "assembling", "done")
TERMINAL_STATES = {"done", "failed"}

ALLOWED_OVERRIDES = {"animation_style"}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class JobService:
    def __init__(
        self,
        records: RecordStore,
        blobs: BlobStore,
        config: ServiceConfig,
        agents: StoryAgents,
        functions: list,
    ):
        self.records = records
        self.blobs = blobs
        self.config = config
        self.agents = agents
        self.functions = functions
        self.voice_reference = load_voice_reference(config, blobs)
        self._executor = ThreadPoolExecutor(max_workers=config.workers)
        self._futures: dict[str, Future] = {}

    def submit(self, brief: StoryBrief, overrides: dict | None = None) -> dict:
        """Queue a generation job; returns immediately with the job record."""
        brief = apply_overrides(brief, overrides)
        job = {
            "id": new_id("job"),
            "brief": brief_to_dict(brief),
            "state": "queued",
            "state_history": ["queued"],
            "progress": {
                "segments_total": 0,
                "directed": 0,
                "videos": 0,
                "music": 0,
                "narration": 0,
            },
            "error": None,
            "package_ref": None,
            "created_at": _now(),
            "updated_at": _now(),
        }
        self.records.save("jobs", job["id"], job)
        self._futures[job["id"]] = self._executor.submit(self._run, job["id"], brief)
        return job

    def status(self, job_id: str) -> dict:
        return self.records.load("jobs", job_id)

    def wait(self, job_id: str, timeout: float | None = None) -> dict:
        """Block until the job's worker finishes (test and CLI support)."""
        future = self._futures.get(job_id)
        if future is not None:
            future.result(timeout=timeout)
        return self.status(job_id)

    def shutdown(self) -> None:
        self._executor.shutdown(wait=True)

    def _run(self, job_id: str, brief: StoryBrief) -> None:
        def on_stage(stage: str) -> None:
            self._advance(job_id, stage)

        def on_progress(kind: str, done: int, total: int) -> None:
            def mutate(job: dict) -> dict:
                job["progress"][kind] = done
                if kind != "narration":
                    job["progress"]["segments_total"] = total
                job["updated_at"] = _now()
                return job

            self.records.update("jobs", job_id, mutate)

        pipeline = Pipeline(
            self.agents,
            functions=self.functions,
            max_review_rounds=self.config.max_review_rounds,
            video_duration=self.config.video_duration,
            voice_reference=self.voice_reference,
            max_workers=self.config.pipeline_workers,
            on_stage=on_stage,
            on_progress=on_progress,
        )
        try:
            package = pipeline.run(brief)
            package_ref = self.blobs.put(manifest_to_bytes(package.manifest))
            self._finish(job_id, package_ref)
        except BriefValidationError as exc:
            self._fail(job_id, "validation", str(exc))
        except PipelineStageError as exc:
            self._fail(job_id, exc.stage, str(exc.cause))
        except StoryforgeError as exc:
            self._fail(job_id, "internal", str(exc))
        except Exception as exc:  # pragma: no cover - defensive
            log.exception("job %s crashed", job_id)
            self._fail(job_id, "internal", f"unexpected error: {exc}")

    def _advance(self, job_id: str, state: str) -> None:
        def mutate(job: dict) -> dict:
            if job["state"] in TERMINAL_STATES:
                return job
            current = STATE_ORDER.index(job["state"])
            target = STATE_ORDER.index(state)
            if target <= current:
                return job
            job["state"] = state
            job["state_history"].append(state)
            job["updated_at"] = _now()
            return job

        self.records.update("jobs", job_id, mutate)

    def _finish(self, job_id: str, package_ref: str) -> None:
        def mutate(job: dict) -> dict:
            job["state"] = "done"
            job["state_history"].append("done")
            job["package_ref"] = package_ref
            job["updated_at"] = _now()
            return job

        self.records.update("jobs", job_id, mutate)

    def _fail(self, job_id: str, stage: str, message: str) -> None:
        def mutate(job: dict) -> dict:
            if job["state"] in TERMINAL_STATES:
                return job
            job["state"] = "failed"
            job["state_history"].append("failed")
            job["error"] = {"stage": stage, "message": message}
            job["updated_at"] = _now()
            return job

        self.records.update("jobs", job_id, mutate)


def apply_overrides(brief: StoryBrief, overrides: dict | None) -> StoryBrief:
    if not overrides:
        return brief
    unknown = set(overrides) - ALLOWED_OVERRIDES
    if unknown:
        raise InvalidRequestError(f"invalid overrides: {', '.join(sorted(unknown))}")
    if "animation_style" in overrides:
        try:
            style = AnimationStyle(str(overrides["animation_style"]))
        except ValueError:
            raise InvalidRequestError(
                f"invalid overrides: animation_style must be one of "
                f"{', '.join(s.value for s in AnimationStyle)}"
            ) from None
        brief = dataclasses.replace(brief, animation_style=style)
    return brief
