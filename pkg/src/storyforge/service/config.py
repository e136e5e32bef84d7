"""Service configuration and backend wiring.

The configuration file is JSON; every key is optional and falls back to
an all-mock setup carrying the default model assignments:

    {"data_dir": "var/storyforge",
     "workers": 2,
     "max_review_rounds": 3,
     "video_duration_seconds": 6,
     "voice_reference_path": "voice.wav",
     "backends": {
       "writer":   {"backend": "mock", "seed": 0},
       "reviewer": {"backend": "mock", "reviewer_verdict": true},
       "animator": {"backend": "http", "base_url": "http://gpu:9000",
                    "model_id": "CogVideoX-5b", "timeout": 600,
                    "max_retries": 1, "concurrency": 2}}}

Backend entries are keyed by agent role. Defaults per agent: the model
assignments of the evaluated final design, mock transport, and a
10-minute timeout for video (a six-second clip takes minutes to render).
"""

from __future__ import annotations

import json
import os
import wave
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigurationError, InvalidRequestError
from ..gateway import (
    BackendEndpoint,
    GatewayClient,
    HttpTransport,
    MOCK_BASE_URL,
    MediaAsset,
    MediaKind,
    MockTransport,
)
from ..narrative import catalog as load_catalog
from ..pipeline import AGENT_MODALITY, AGENT_NAMES, AgentBinding, Pipeline, StoryAgents
from ..store import BlobStore, digest_of

CONFIG_ENV_VAR = "STORYFORGE_CONFIG"

DEFAULT_MODELS = {
    "writer": "Gemma-2-9b",
    "reviewer": "GPT-4o",
    "movie_director": "GPT-4o",
    "music_director": "GPT-4o",
    "narrator": "XTTSv2",
    "musician": "MusicGen-Large",
    "animator": "CogVideoX-5b",
}

DEFAULT_TIMEOUTS = {
    "writer": 120.0,
    "reviewer": 120.0,
    "movie_director": 120.0,
    "music_director": 120.0,
    "narrator": 300.0,
    "musician": 300.0,
    "animator": 600.0,
}


@dataclass(frozen=True)
class BackendSpec:
    agent: str
    kind: str  # "mock" | "http"
    endpoint: BackendEndpoint
    seed: int = 0
    reviewer_verdict: bool = True


def default_backends() -> dict[str, BackendSpec]:
    """All seven agents on the deterministic mock, default models."""
    return {
        agent: BackendSpec(
            agent=agent,
            kind="mock",
            endpoint=BackendEndpoint(
                role=AGENT_MODALITY[agent],
                base_url=MOCK_BASE_URL,
                model_id=DEFAULT_MODELS[agent],
                timeout=DEFAULT_TIMEOUTS[agent],
            ),
        )
        for agent in AGENT_NAMES
    }


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path = Path("var/storyforge")
    workers: int = 2
    max_review_rounds: int = 3
    video_duration: float = 6.0
    pipeline_workers: int = 4
    voice_reference_path: Path | None = None
    catalog_path: Path | None = None  # None -> packaged default catalog
    backends: dict[str, BackendSpec] = field(default_factory=default_backends)

    def models(self) -> dict[str, str]:
        return {name: spec.endpoint.model_id for name, spec in self.backends.items()}


def default_config() -> ServiceConfig:
    return ServiceConfig()


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Load config from path, $STORYFORGE_CONFIG, or built-in defaults."""
    if path is None:
        env = os.environ.get(CONFIG_ENV_VAR)
        path = Path(env) if env else None
    if path is None:
        return default_config()
    source = Path(path)
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {source}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {source} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config file {source} must contain a JSON object")
    return _config_from_dict(raw)


def _config_from_dict(raw: dict) -> ServiceConfig:
    backends_raw = raw.get("backends", {})
    if not isinstance(backends_raw, dict):
        raise ConfigurationError("config key 'backends' must be an object")
    unknown = set(backends_raw) - set(AGENT_NAMES)
    if unknown:
        raise ConfigurationError(f"unknown backend roles: {', '.join(sorted(unknown))}")

    backends: dict[str, BackendSpec] = {}
    for agent in AGENT_NAMES:
        entry = backends_raw.get(agent, {})
        if not isinstance(entry, dict):
            raise ConfigurationError(f"backend entry for {agent!r} must be an object")
        kind = str(entry.get("backend", "mock"))
        if kind not in ("mock", "http"):
            raise ConfigurationError(
                f"backend for {agent!r} must be 'mock' or 'http', got {kind!r}"
            )
        base_url = str(entry.get("base_url", MOCK_BASE_URL))
        if kind == "http" and base_url == MOCK_BASE_URL:
            raise ConfigurationError(f"http backend for {agent!r} requires base_url")
        try:
            endpoint = BackendEndpoint(
                role=AGENT_MODALITY[agent],
                base_url=base_url,
                model_id=str(entry.get("model_id", DEFAULT_MODELS[agent])),
                timeout=float(entry.get("timeout", DEFAULT_TIMEOUTS[agent])),
                max_retries=int(entry.get("max_retries", 2)),
                concurrency=int(entry.get("concurrency", 2)),
                bearer_token=entry.get("bearer_token"),
            )
        except (TypeError, ValueError, InvalidRequestError) as exc:
            raise ConfigurationError(f"bad backend entry for {agent!r}: {exc}") from exc
        backends[agent] = BackendSpec(
            agent=agent,
            kind=kind,
            endpoint=endpoint,
            seed=int(entry.get("seed", raw.get("seed", 0))),
            reviewer_verdict=bool(entry.get("reviewer_verdict", True)),
        )

    voice_path = raw.get("voice_reference_path")
    catalog_path = raw.get("catalog_path")
    return ServiceConfig(
        data_dir=Path(raw.get("data_dir", "var/storyforge")),
        workers=int(raw.get("workers", 2)),
        max_review_rounds=int(raw.get("max_review_rounds", 3)),
        video_duration=float(raw.get("video_duration_seconds", 6.0)),
        pipeline_workers=int(raw.get("pipeline_workers", 4)),
        voice_reference_path=Path(voice_path) if voice_path else None,
        catalog_path=Path(catalog_path) if catalog_path else None,
        backends=backends,
    )


def build_agents(config: ServiceConfig, store: BlobStore) -> StoryAgents:
    """Construct the seven agent bindings; transports shared where possible."""
    http_client: GatewayClient | None = None
    mock_clients: dict[tuple[int, bool], GatewayClient] = {}
    bindings: dict[str, AgentBinding] = {}
    for agent, spec in config.backends.items():
        if spec.kind == "http":
            if http_client is None:
                http_client = GatewayClient(store, HttpTransport())
            client = http_client
        else:
            key = (spec.seed, spec.reviewer_verdict)
            client = mock_clients.get(key)
            if client is None:
                client = GatewayClient(
                    store,
                    MockTransport(seed=spec.seed, reviewer_verdict=spec.reviewer_verdict),
                )
                mock_clients[key] = client
        bindings[agent] = AgentBinding(client=client, endpoint=spec.endpoint)
    return StoryAgents(bindings)


def load_voice_reference(config: ServiceConfig, store: BlobStore) -> MediaAsset | None:
    """Validate and stage the configured cloning reference (16-bit mono wav)."""
    if config.voice_reference_path is None:
        return None
    path = config.voice_reference_path
    try:
        with wave.open(str(path), "rb") as w:
            channels = w.getnchannels()
            sample_width = w.getsampwidth()
            duration = w.getnframes() / float(w.getframerate() or 1)
    except FileNotFoundError:
        raise ConfigurationError(f"voice reference not found: {path}") from None
    except wave.Error as exc:
        raise ConfigurationError(f"voice reference {path} is not a wav file: {exc}") from exc
    if channels != 1 or sample_width != 2:
        raise ConfigurationError(
            f"voice reference {path} must be 16-bit PCM mono, "
            f"got {sample_width * 8}-bit {channels}-channel"
        )
    data = path.read_bytes()
    blob_id = store.put(data)
    return MediaAsset(
        kind=MediaKind.SPEECH,
        format="wav",
        payload_ref=blob_id,
        duration=round(duration, 2),
        checksum=digest_of(data),
    )


def build_pipeline(
    config: ServiceConfig,
    store: BlobStore,
    *,
    on_stage=None,
    on_progress=None,
) -> Pipeline:
    agents = build_agents(config, store)
    return Pipeline(
        agents,
        functions=load_catalog(config.catalog_path),
        max_review_rounds=config.max_review_rounds,
        video_duration=config.video_duration,
        voice_reference=load_voice_reference(config, store),
        max_workers=config.pipeline_workers,
        on_stage=on_stage,
        on_progress=on_progress,
    )
