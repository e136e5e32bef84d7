"""HTTP transport for the backend wire protocol.

One POST per role: /generate/text, /generate/speech, /generate/video,
/generate/music. Requests and responses are JSON; media payloads travel
base64-encoded with a declared format and duration. A response is
treated as a well-formed backend error (never retried) when it carries
an {"error": {"message": ...}} body; connection problems, timeouts, and
5xx responses without such a body are transport failures the client may
retry.
"""

from __future__ import annotations

import httpx

from ..errors import BackendError, TransportFailure
from .types import BackendEndpoint


class HttpTransport:
    def __init__(self, client: httpx.Client | None = None):
        self._client = client or httpx.Client()

    def send(self, endpoint: BackendEndpoint, path: str, payload: dict) -> dict:
        url = endpoint.base_url.rstrip("/") + path
        headers = {}
        if endpoint.bearer_token:
            headers["Authorization"] = f"Bearer {endpoint.bearer_token}"
        try:
            response = self._client.post(
                url, json=payload, timeout=endpoint.timeout, headers=headers
            )
        except httpx.TimeoutException as exc:
            raise TransportFailure(f"timeout after {endpoint.timeout}s calling {url}") from exc
        except httpx.TransportError as exc:
            raise TransportFailure(f"transport failure calling {url}: {exc}") from exc

        if response.is_success:
            try:
                return response.json()
            except ValueError as exc:
                raise TransportFailure(f"non-JSON success response from {url}") from exc

        message = _error_message(response)
        if message is not None:
            raise BackendError(message, status=response.status_code)
        if response.status_code >= 500:
            raise TransportFailure(f"{url} returned status {response.status_code}")
        raise BackendError(
            f"{url} returned status {response.status_code}", status=response.status_code
        )

    def close(self) -> None:
        self._client.close()


def _error_message(response: httpx.Response) -> str | None:
    try:
        body = response.json()
    except ValueError:
        return None
    if isinstance(body, dict) and isinstance(body.get("error"), dict):
        message = body["error"].get("message")
        if isinstance(message, str):
            return message
    return None
