"""The assembled service: storage, catalog, sessions, jobs, artifacts."""

from __future__ import annotations

import json
from pathlib import Path

from ..narrative import ProppFunction, catalog as load_catalog
from ..store import FileBlobStore
from .config import ServiceConfig, build_agents, default_config
from .jobs import JobService
from .records import RecordStore
from .sessions import SessionService

MEDIA_TYPES = {
    "wav": "audio/wav",
    "mp4": "video/mp4",
    "json": "application/json",
    "bin": "application/octet-stream",
}


def classify_payload(data: bytes) -> str:
    """Infer an artifact's format from its payload."""
    if data[:4] == b"RIFF" and data[8:12] == b"WAVE":
        return "wav"
    if len(data) >= 12 and data[4:8] == b"ftyp":
        return "mp4"
    try:
        json.loads(data.decode("utf-8"))
        return "json"
    except (UnicodeDecodeError, ValueError):
        return "bin"


class StoryService:
    def __init__(self, config: ServiceConfig | None = None):
        self.config = config or default_config()
        data_dir = Path(self.config.data_dir)
        self.blobs = FileBlobStore(data_dir / "blobs")
        self.records = RecordStore(data_dir / "meta")
        self.functions: list[ProppFunction] = load_catalog(self.config.catalog_path)
        self.sessions = SessionService(self.records, self.functions)
        agents = build_agents(self.config, self.blobs)
        self.jobs = JobService(self.records, self.blobs, self.config, agents, self.functions)

    def fetch_artifact(self, artifact_id: str) -> tuple[bytes, str]:
        """Return (payload, format); the read verifies the checksum."""
        data = self.blobs.get(artifact_id)
        return data, classify_payload(data)

    def catalog_dicts(self) -> list[dict]:
        return [
            {
                "id": fn.id,
                "name": fn.name,
                "phase": fn.phase.label,
                "phase_ordinal": fn.phase.ordinal,
                "card_text": fn.card_text,
                "questions": list(fn.questions),
            }
            for fn in self.functions
        ]

    def close(self) -> None:
        self.jobs.shutdown()
