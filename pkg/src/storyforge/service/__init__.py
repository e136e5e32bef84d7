from .api import create_app, create_default_app
from .config import (
    CONFIG_ENV_VAR,
    DEFAULT_MODELS,
    ServiceConfig,
    build_agents,
    build_pipeline,
    default_config,
    load_config,
    load_voice_reference,
)
from .core import StoryService, classify_payload
from .jobs import STATE_ORDER, TERMINAL_STATES, JobService, apply_overrides
from .records import RecordStore, new_id
from .sessions import SessionService

__all__ = [
    "CONFIG_ENV_VAR",
    "DEFAULT_MODELS",
    "JobService",
    "RecordStore",
    "STATE_ORDER",
    "ServiceConfig",
    "SessionService",
    "StoryService",
    "TERMINAL_STATES",
    "apply_overrides",
    "build_agents",
    "build_pipeline",
    "classify_payload",
    "create_app",
    "create_default_app",
    "default_config",
    "load_config",
    "load_voice_reference",
    "new_id",
]
