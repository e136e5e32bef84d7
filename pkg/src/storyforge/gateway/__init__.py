from .client import BACKOFF_BASE_SECONDS, BACKOFF_FACTOR, GatewayClient, Transport
from .http import HttpTransport
from .mock import MOCK_BASE_URL, REVISION_SENTINEL, MockTransport
from .types import (
    BackendEndpoint,
    BackendRole,
    MediaAsset,
    MediaKind,
    MusicRequest,
    SpeechRequest,
    TextRequest,
    VideoRequest,
    style_prefix,
)

__all__ = [
    "BACKOFF_BASE_SECONDS",
    "BACKOFF_FACTOR",
    "BackendEndpoint",
    "BackendRole",
    "GatewayClient",
    "HttpTransport",
    "MOCK_BASE_URL",
    "MediaAsset",
    "MediaKind",
    "MockTransport",
    "MusicRequest",
    "REVISION_SENTINEL",
    "SpeechRequest",
    "TextRequest",
    "Transport",
    "VideoRequest",
    "style_prefix",
]
