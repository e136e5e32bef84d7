"""Uniform client over the generative backends.

Adds what every call site needs and no backend provides: bounded retries
with exponential backoff and full jitter on transport failures, a
per-endpoint concurrency cap (single-GPU backends fall over under
parallel load), and content-addressed storage of returned media.
"""

from __future__ import annotations

import base64
import random
import threading
import time
from typing import Callable, Protocol

from ..errors import GenerationError, InvalidRequestError, TransportFailure
from ..store import BlobStore, digest_of
from .types import (
    FORMAT_FOR_KIND,
    BackendEndpoint,
    BackendRole,
    MediaAsset,
    MediaKind,
    MusicRequest,
    SpeechRequest,
    TextRequest,
    VideoRequest,
)

BACKOFF_BASE_SECONDS = 0.5
BACKOFF_FACTOR = 2.0


class Transport(Protocol):
    def send(self, endpoint: BackendEndpoint, path: str, payload: dict) -> dict: ...


class GatewayClient:
    """Stateless apart from per-endpoint semaphores; safe to share."""

    def __init__(
        self,
        store: BlobStore,
        transport: Transport,
        *,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        self.store = store
        self.transport = transport
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._semaphores: dict[tuple, threading.BoundedSemaphore] = {}
        self._lock = threading.Lock()

    def generate_text(self, endpoint: BackendEndpoint, request: TextRequest) -> str:
        self._require_role(endpoint, BackendRole.TEXT)
        payload = {
            "model_id": endpoint.model_id,
            "system_prompt": request.system_prompt,
            "user_message": request.user_message,
            "max_length": request.max_length,
            "temperature": request.temperature,
        }
        body = self._send(endpoint, "/generate/text", payload)
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            raise GenerationError("text backend returned an empty completion")
        return text

    def synthesize_speech(self, endpoint: BackendEndpoint, request: SpeechRequest) -> MediaAsset:
        self._require_role(endpoint, BackendRole.SPEECH)
        payload: dict = {"model_id": endpoint.model_id, "text": request.text}
        if request.voice_reference is not None:
            reference = self.store.get(request.voice_reference.payload_ref)
            payload["voice_reference_b64"] = base64.b64encode(reference).decode("ascii")
            payload["voice_reference_format"] = request.voice_reference.format
        body = self._send(endpoint, "/generate/speech", payload)
        return self._store_media(body, MediaKind.SPEECH)

    def generate_video(self, endpoint: BackendEndpoint, request: VideoRequest) -> MediaAsset:
        self._require_role(endpoint, BackendRole.VIDEO)
        payload = {
            "model_id": endpoint.model_id,
            "prompt": request.prompt,
            "style": request.style.value,
            "duration": request.duration,
        }
        body = self._send(endpoint, "/generate/video", payload)
        return self._store_media(body, MediaKind.VIDEO)

    def generate_music(self, endpoint: BackendEndpoint, request: MusicRequest) -> MediaAsset:
        self._require_role(endpoint, BackendRole.MUSIC)
        payload = {
            "model_id": endpoint.model_id,
            "composition": request.composition,
            "duration": request.duration,
        }
        body = self._send(endpoint, "/generate/music", payload)
        return self._store_media(body, MediaKind.MUSIC)

    def _require_role(self, endpoint: BackendEndpoint, role: BackendRole) -> None:
        if endpoint.role is not role:
            raise InvalidRequestError(
                f"endpoint role is {endpoint.role.value}, operation needs {role.value}"
            )

    def _send(self, endpoint: BackendEndpoint, path: str, payload: dict) -> dict:
        # max_retries + 1 attempts total; only transport failures retry.
        attempts = endpoint.max_retries + 1
        semaphore = self._semaphore_for(endpoint)
        last: TransportFailure | None = None
        for attempt in range(attempts):
            try:
                with semaphore:
                    return self.transport.send(endpoint, path, payload)
            except TransportFailure as exc:
                last = exc
                if attempt + 1 < attempts:
                    self._sleep(self._backoff_delay(attempt))
        raise TransportFailure(
            f"{path} failed after {attempts} attempt(s): {last}"
        ) from last

    def _backoff_delay(self, attempt: int) -> float:
        return self._rng.uniform(0.0, BACKOFF_BASE_SECONDS * BACKOFF_FACTOR**attempt)

    def _semaphore_for(self, endpoint: BackendEndpoint) -> threading.BoundedSemaphore:
        key = (endpoint.role, endpoint.base_url, endpoint.model_id)
        with self._lock:
            semaphore = self._semaphores.get(key)
            if semaphore is None:
                semaphore = threading.BoundedSemaphore(endpoint.concurrency)
                self._semaphores[key] = semaphore
            return semaphore

    def _store_media(self, body: dict, kind: MediaKind) -> MediaAsset:
        try:
            data = base64.b64decode(body["media_b64"])
            fmt = str(body["format"])
            duration = float(body["duration"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GenerationError(f"malformed media response: {exc}") from exc
        if fmt != FORMAT_FOR_KIND[kind]:
            raise GenerationError(
                f"backend returned {fmt!r} for a {kind.value} request, "
                f"expected {FORMAT_FOR_KIND[kind]!r}"
            )
        blob_id = self.store.put(data)
        return MediaAsset(
            kind=kind,
            format=fmt,
            payload_ref=blob_id,
            duration=duration,
            checksum=digest_of(data),
        )
