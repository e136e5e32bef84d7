"""Exception hierarchy shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class StoryforgeError(Exception):
    """Base class for all package errors."""


class ConfigurationError(StoryforgeError):
    """Bad or missing configuration (catalog file, backend config, ...)."""


class CatalogError(ConfigurationError):
    """The narrative-function catalog file is missing or malformed."""


class InvalidRequestError(StoryforgeError, ValueError):
    """A precondition on an operation's input was violated."""


@dataclass(frozen=True)
class BriefIssue:
    """One validation violation, addressable by phase and function."""

    message: str
    phase_ordinal: int | None = None
    function_id: int | None = None

    def __str__(self) -> str:
        return self.message


class BriefValidationError(StoryforgeError):
    """A story brief failed validation; carries the complete issue list."""

    def __init__(self, issues: list[BriefIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


class GatewayError(StoryforgeError):
    """Base class for backend-gateway failures."""


class TransportFailure(GatewayError):
    """Network-level failure (connect error, reset, timeout); retryable."""


class BackendError(GatewayError):
    """Well-formed error response from a backend; never retried."""

    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class GenerationError(StoryforgeError):
    """A generative stage produced unusable output (empty, malformed)."""


class ReviewParseError(StoryforgeError):
    """Reviewer output did not match the required verdict format."""


class ModerationProtocolError(StoryforgeError):
    """Reviewer output stayed unparseable after the allowed re-ask."""


class UnsafeContentError(StoryforgeError):
    """The story was still judged inappropriate after all repair rounds.

    Carries the full verdict history so the failure can be audited.
    """

    def __init__(self, message: str, history: list | None = None):
        self.history = list(history or [])
        super().__init__(message)


class PipelineStageError(StoryforgeError):
    """A pipeline stage failed; names the stage and keeps the cause."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


class StorageError(StoryforgeError):
    """Persistence-layer failure."""


class NotFoundError(StorageError):
    """No record or blob with the requested id."""


class IntegrityError(StorageError):
    """Stored payload does not match its recorded checksum."""


class SessionOrderError(StoryforgeError):
    """A phase was submitted out of order for an authoring session."""


class ReportSpecError(StoryforgeError):
    """A report spec referenced unknown subjects or sources."""

    def __init__(self, unknown: list[str]):
        self.unknown = tuple(unknown)
        super().__init__("unknown names in report spec: " + ", ".join(self.unknown))
