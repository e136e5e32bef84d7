"""Backend endpoint descriptors, request payloads, and media assets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidRequestError
from ..narrative import AnimationStyle

MAX_RETRIES_LIMIT = 5


class BackendRole(str, Enum):
    TEXT = "text"
    SPEECH = "speech"
    VIDEO = "video"
    MUSIC = "music"


class MediaKind(str, Enum):
    SPEECH = "speech"
    VIDEO = "video"
    MUSIC = "music"


# Every media kind has exactly one container format.
FORMAT_FOR_KIND = {
    MediaKind.SPEECH: "wav",
    MediaKind.VIDEO: "mp4",
    MediaKind.MUSIC: "wav",
}


@dataclass(frozen=True)
class BackendEndpoint:
    """Where and how to reach one remote generative backend."""

    role: BackendRole
    base_url: str
    model_id: str
    timeout: float = 60.0
    max_retries: int = 2
    concurrency: int = 2
    bearer_token: str | None = None

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise InvalidRequestError(f"timeout must be > 0, got {self.timeout}")
        if not 0 <= self.max_retries <= MAX_RETRIES_LIMIT:
            raise InvalidRequestError(
                f"max_retries must be within 0-{MAX_RETRIES_LIMIT}, got {self.max_retries}"
            )
        if self.concurrency < 1:
            raise InvalidRequestError(f"concurrency must be >= 1, got {self.concurrency}")


@dataclass(frozen=True)
class TextRequest:
    system_prompt: str
    user_message: str
    max_length: int = 2048
    temperature: float = 0.7

    def __post_init__(self) -> None:
        if not self.system_prompt.strip():
            raise InvalidRequestError("system_prompt must be non-empty")
        if self.temperature < 0:
            raise InvalidRequestError(f"temperature must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class SpeechRequest:
    text: str
    voice_reference: "MediaAsset | None" = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise InvalidRequestError("speech text must be non-empty")
        if self.voice_reference is not None and self.voice_reference.format != "wav":
            raise InvalidRequestError("voice_reference must be an audio asset")


def style_prefix(style: AnimationStyle) -> str:
    """The exact prefix every scene prompt must carry for the given style."""
    return f"In a {style.value} world,"


@dataclass(frozen=True)
class VideoRequest:
    prompt: str
    style: AnimationStyle
    duration: float = 6.0

    def __post_init__(self) -> None:
        if not self.prompt.startswith(style_prefix(self.style)):
            raise InvalidRequestError(
                f"missing style prefix: prompt must start with {style_prefix(self.style)!r}"
            )
        if self.duration <= 0:
            raise InvalidRequestError(f"duration must be > 0, got {self.duration}")


@dataclass(frozen=True)
class MusicRequest:
    composition: str
    duration: float = 6.0

    def __post_init__(self) -> None:
        if not self.composition.strip():
            raise InvalidRequestError("composition must be non-empty")
        if self.duration <= 0:
            raise InvalidRequestError(f"duration must be > 0, got {self.duration}")


@dataclass(frozen=True)
class MediaAsset:
    """A generated media blob, addressed by the digest of its payload."""

    kind: MediaKind
    format: str
    payload_ref: str
    duration: float
    checksum: str

    def __post_init__(self) -> None:
        expected = FORMAT_FOR_KIND[self.kind]
        if self.format != expected:
            raise InvalidRequestError(
                f"{self.kind.value} assets must be {expected}, got {self.format}"
            )
        if self.duration < 0:
            raise InvalidRequestError(f"duration must be >= 0, got {self.duration}")

    def to_dict(self) -> dict:
        return {
            "asset_id": self.payload_ref,
            "format": self.format,
            "duration": self.duration,
        }
