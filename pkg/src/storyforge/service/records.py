"""JSON document storage for sessions, jobs, and manifest references.

One file per record under <root>/<kind>/<id>.json. Updates happen under
a per-record lock and are written through a temp file and rename, so a
reader never observes a half-written document.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from pathlib import Path
from typing import Callable

from ..errors import NotFoundError, StorageError


def new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


class RecordStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create record directory {self.root}: {exc}") from exc
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, kind: str, record_id: str) -> threading.Lock:
        key = (kind, record_id)
        with self._registry_lock:
            lock = self._locks.get(key)
            if lock is None:
                lock = threading.Lock()
                self._locks[key] = lock
            return lock

    def _path(self, kind: str, record_id: str) -> Path:
        return self.root / kind / f"{record_id}.json"

    def save(self, kind: str, record_id: str, document: dict) -> None:
        with self._lock_for(kind, record_id):
            self._write(kind, record_id, document)

    def load(self, kind: str, record_id: str) -> dict:
        path = self._path(kind, record_id)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise NotFoundError(f"no {kind} record {record_id}") from None
        except json.JSONDecodeError as exc:
            raise StorageError(f"{kind} record {record_id} is corrupt: {exc}") from exc

    def update(self, kind: str, record_id: str, mutate: Callable[[dict], dict]) -> dict:
        """Read-modify-write under the record lock; returns the new document."""
        with self._lock_for(kind, record_id):
            document = mutate(self.load(kind, record_id))
            self._write(kind, record_id, document)
            return document

    def exists(self, kind: str, record_id: str) -> bool:
        return self._path(kind, record_id).is_file()

    def list_ids(self, kind: str) -> list[str]:
        directory = self.root / kind
        if not directory.is_dir():
            return []
        return sorted(p.stem for p in directory.glob("*.json"))

    def _write(self, kind: str, record_id: str, document: dict) -> None:
        path = self._path(kind, record_id)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(document, fh, indent=2, sort_keys=True)
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageError(f"cannot write {kind} record {record_id}: {exc}") from exc
