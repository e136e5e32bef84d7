"""Shared test doubles and builders."""

from __future__ import annotations

from storyforge.errors import TransportFailure
from storyforge.gateway import (
    BackendEndpoint,
    GatewayClient,
    MOCK_BASE_URL,
    MockTransport,
)
from storyforge.narrative import (
    PHASES_IN_ORDER,
    AnimationStyle,
    CardAnswer,
    PhaseInput,
    StoryBrief,
    catalog,
)
from storyforge.pipeline import AGENT_MODALITY, AGENT_NAMES, AgentBinding, StoryAgents
from storyforge.service.config import DEFAULT_MODELS
from storyforge.store import MemoryBlobStore

SAMPLE_ANSWERS = {
    1: "Father sails away to trade in distant lands.",
    2: "Mother warns the children not to open the cellar door.",
    8: "A sly fox steals the village's winter stores.",
    12: "An old owl tests the hero with three riddles.",
    20: "The hero rides home on the miller's cart.",
    27: "The village recognizes the hero by the owl feather.",
}


def sample_brief(style: AnimationStyle = AnimationStyle.CARTOON) -> StoryBrief:
    """One card per phase, using the first function of each phase."""
    functions = catalog()
    by_phase: dict = {}
    for fn in functions:
        by_phase.setdefault(fn.phase, []).append(fn)
    phase_inputs = []
    for phase in PHASES_IN_ORDER:
        fn = by_phase[phase][0]
        answer = SAMPLE_ANSWERS.get(fn.id, f"Something about {fn.name.lower()} happens.")
        phase_inputs.append(
            PhaseInput(phase=phase, cards=(CardAnswer(fn.id, (answer,) * len(fn.questions)),))
        )
    return StoryBrief(phase_inputs=tuple(phase_inputs), animation_style=style)


def endpoint_for(agent: str, **kwargs) -> BackendEndpoint:
    defaults = dict(
        role=AGENT_MODALITY[agent],
        base_url=MOCK_BASE_URL,
        model_id=DEFAULT_MODELS[agent],
        timeout=30.0,
    )
    defaults.update(kwargs)
    return BackendEndpoint(**defaults)


class RecordingTransport:
    """Wraps a transport; captures every request and allows text overrides.

    text_hook(payload) may return a completion string to short-circuit
    the text route, or None to fall through to the wrapped transport.
    """

    def __init__(self, base=None, text_hook=None, seed: int = 0):
        self.base = base or MockTransport(seed=seed)
        self.text_hook = text_hook
        self.requests: list[tuple[str, dict]] = []

    def send(self, endpoint, path, payload):
        self.requests.append((path, payload))
        if path == "/generate/text" and self.text_hook is not None:
            override = self.text_hook(payload)
            if override is not None:
                return {"text": override}
        return self.base.send(endpoint, path, payload)


class FlakyTransport:
    """Fails with a transport error a fixed number of times, then delegates."""

    def __init__(self, failures: int, base=None):
        self.remaining = failures
        self.attempts = 0
        self.base = base or MockTransport()

    def send(self, endpoint, path, payload):
        self.attempts += 1
        if self.remaining > 0:
            self.remaining -= 1
            raise TransportFailure("injected fault")
        return self.base.send(endpoint, path, payload)


def scripted_reviewer_hook(verdicts: list[bool]):
    """Pops one scripted verdict per review call; revision calls untouched."""
    queue = list(verdicts)

    def hook(payload: dict):
        if "content moderator" in payload.get("system_prompt", ""):
            flag = queue.pop(0)
            reasoning = "Reads well." if flag else "Too scary; soften the wolf scene."
            return f"### Reasoning:\n{reasoning}\n\n### Is Appropriate: {flag}"
        return None

    return hook


def build_agents(
    transport=None,
    store: MemoryBlobStore | None = None,
    seed: int = 0,
    reviewer_verdict: bool = True,
) -> tuple[StoryAgents, MemoryBlobStore]:
    store = store if store is not None else MemoryBlobStore()
    transport = transport or MockTransport(seed=seed, reviewer_verdict=reviewer_verdict)
    client = GatewayClient(store, transport, sleep=lambda _s: None)
    bindings = {name: AgentBinding(client, endpoint_for(name)) for name in AGENT_NAMES}
    return StoryAgents(bindings), store
