"""Content-addressed blob storage.

Blob ids are the sha256 hex digest of the payload, so the id doubles as
an integrity check: every read recomputes the digest and fails loudly on
mismatch. File-backed stores write through a temp file and rename, which
keeps concurrent writers safe on POSIX filesystems.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path
from typing import Protocol

from .errors import IntegrityError, NotFoundError, StorageError


def digest_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class BlobStore(Protocol):
    def put(self, data: bytes) -> str: ...

    def get(self, blob_id: str) -> bytes: ...

    def exists(self, blob_id: str) -> bool: ...


class MemoryBlobStore:
    """In-process store for tests and library use."""

    def __init__(self) -> None:
        self._blobs: dict[str, bytes] = {}

    def put(self, data: bytes) -> str:
        blob_id = digest_of(data)
        self._blobs[blob_id] = data
        return blob_id

    def get(self, blob_id: str) -> bytes:
        try:
            data = self._blobs[blob_id]
        except KeyError:
            raise NotFoundError(f"no blob {blob_id}") from None
        if digest_of(data) != blob_id:
            raise IntegrityError(f"blob {blob_id} failed checksum verification")
        return data

    def exists(self, blob_id: str) -> bool:
        return blob_id in self._blobs


class FileBlobStore:
    """Directory-backed store; one file per blob, named by digest."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create blob directory {self.root}: {exc}") from exc

    def _path(self, blob_id: str) -> Path:
        return self.root / blob_id

    def put(self, data: bytes) -> str:
        blob_id = digest_of(data)
        path = self._path(blob_id)
        if path.exists():
            return blob_id
        try:
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-")
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageError(f"cannot write blob {blob_id}: {exc}") from exc
        return blob_id

    def get(self, blob_id: str) -> bytes:
        path = self._path(blob_id)
        if not path.is_file():
            raise NotFoundError(f"no blob {blob_id}")
        data = path.read_bytes()
        if digest_of(data) != blob_id:
            raise IntegrityError(f"blob {blob_id} failed checksum verification")
        return data

    def exists(self, blob_id: str) -> bool:
        return self._path(blob_id).is_file()
