"""The agent operations: writing, moderation, direction, narration.

Each operation is a thin protocol around one backend call: compose the
exact system prompt and user message, call the gateway, and validate the
result against its structural contract (paragraph counts, verdict
format, style prefix, single-sentence compositions).
"""

from __future__ import annotations

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace

from ..errors import (
    ConfigurationError,
    GenerationError,
    InvalidRequestError,
    ModerationProtocolError,
    ReviewParseError,
    UnsafeContentError,
)
from ..gateway import (
    BackendEndpoint,
    BackendRole,
    GatewayClient,
    MediaAsset,
    SpeechRequest,
    TextRequest,
    style_prefix,
)
from ..narrative import AnimationStyle, ProppFunction, StoryBrief, assemble_writer_input
from . import prompts
from .review import ReviewVerdict, parse_review_output

log = logging.getLogger("storyforge.pipeline")

TARGET_PARAGRAPHS = 5
MAX_PARAGRAPHS = 8

REASK_NOTE = (
    "Your previous reply did not follow the required format. "
    "Answer again, following the instructions exactly."
)


@dataclass(frozen=True)
class StoryDraft:
    """An ordered sequence of story paragraphs at some revision."""

    paragraphs: tuple[str, ...]
    revision: int = 0
    approved: bool = False

    def __post_init__(self) -> None:
        if not 1 <= len(self.paragraphs) <= MAX_PARAGRAPHS:
            raise GenerationError(
                f"story must have 1-{MAX_PARAGRAPHS} paragraphs, got {len(self.paragraphs)}"
            )
        if any(not p.strip() for p in self.paragraphs):
            raise GenerationError("story paragraphs must be non-empty")

    @property
    def text(self) -> str:
        return "\n\n".join(self.paragraphs)


@dataclass(frozen=True)
class SceneGuide:
    """A single-action visual prompt for one paragraph."""

    paragraph_index: int
    style: AnimationStyle
    prompt: str

    def __post_init__(self) -> None:
        if not self.prompt.startswith(style_prefix(self.style)):
            raise InvalidRequestError(
                f"scene prompt must start with {style_prefix(self.style)!r}"
            )


@dataclass(frozen=True)
class MusicGuide:
    """A one-sentence music description for one paragraph."""

    paragraph_index: int
    composition: str

    def __post_init__(self) -> None:
        if not self.composition:
            raise InvalidRequestError("composition must be non-empty")
        if "\n" in self.composition or "\r" in self.composition:
            raise InvalidRequestError("composition must not contain line breaks")
        if not self.composition.endswith(".") or self.composition.endswith(".."):
            raise InvalidRequestError("composition must end with exactly one period")


AGENT_NAMES = (
    "writer",
    "reviewer",
    "movie_director",
    "music_director",
    "narrator",
    "musician",
    "animator",
)

AGENT_MODALITY: dict[str, BackendRole] = {
    "writer": BackendRole.TEXT,
    "reviewer": BackendRole.TEXT,
    "movie_director": BackendRole.TEXT,
    "music_director": BackendRole.TEXT,
    "narrator": BackendRole.SPEECH,
    "musician": BackendRole.MUSIC,
    "animator": BackendRole.VIDEO,
}


@dataclass(frozen=True)
class AgentBinding:
    client: GatewayClient
    endpoint: BackendEndpoint


class StoryAgents:
    """The seven pipeline agents, each bound to a backend endpoint."""

    def __init__(self, bindings: Mapping[str, AgentBinding]):
        missing = [name for name in AGENT_NAMES if name not in bindings]
        if missing:
            raise ConfigurationError(f"missing agent bindings: {', '.join(missing)}")
        for name, binding in bindings.items():
            expected = AGENT_MODALITY.get(name)
            if expected is None:
                raise ConfigurationError(f"unknown agent {name!r}")
            if binding.endpoint.role is not expected:
                raise ConfigurationError(
                    f"agent {name!r} needs a {expected.value} endpoint, "
                    f"got {binding.endpoint.role.value}"
                )
        self._bindings = dict(bindings)

    def binding(self, name: str) -> AgentBinding:
        return self._bindings[name]

    def models(self) -> dict[str, str]:
        return {name: self._bindings[name].endpoint.model_id for name in AGENT_NAMES}

    def complete(self, agent: str, system_prompt: str, user_message: str) -> str:
        binding = self._bindings[agent]
        request = TextRequest(system_prompt=system_prompt, user_message=user_message)
        return binding.client.generate_text(binding.endpoint, request)


def split_paragraphs(text: str) -> list[str]:
    """Split story text on blank-line runs, trimming each paragraph."""
    if not text.strip():
        raise InvalidRequestError("text must be non-empty")
    paragraphs = [p.strip() for p in re.split(r"\n[ \t]*\n+", text) if p.strip()]
    if not paragraphs:
        raise GenerationError("no paragraphs after splitting")
    if len(paragraphs) != TARGET_PARAGRAPHS:
        log.warning(
            "story has %d paragraph(s); the writer targets %d",
            len(paragraphs),
            TARGET_PARAGRAPHS,
        )
    return paragraphs


def write_story(
    agents: StoryAgents,
    brief: StoryBrief,
    functions: Sequence[ProppFunction] | None = None,
) -> StoryDraft:
    """Generate revision 0 of the story from a validated brief.

    The completion is used as-is: if the backend disobeys the no-title
    instruction, the title line stays part of the first paragraph rather
    than being guessed at and stripped.
    """
    message = assemble_writer_input(brief, functions)
    completion = agents.complete("writer", prompts.WRITER_PROMPT, message)
    return StoryDraft(paragraphs=tuple(split_paragraphs(completion)), revision=0)


def review_story(agents: StoryAgents, draft: StoryDraft) -> ReviewVerdict:
    """Ask the reviewer for a verdict, tolerating one malformed reply."""
    raw = agents.complete("reviewer", prompts.REVIEWER_PROMPT, draft.text)
    try:
        return parse_review_output(raw)
    except ReviewParseError as first:
        log.warning("reviewer output unparseable, re-asking once: %s", first)
        retry_raw = agents.complete(
            "reviewer", prompts.REVIEWER_PROMPT, draft.text + "\n\n" + REASK_NOTE
        )
        try:
            return parse_review_output(retry_raw)
        except ReviewParseError as second:
            raise ModerationProtocolError(
                f"reviewer output unparseable after re-ask: {second}"
            ) from second


def revise_story(agents: StoryAgents, draft: StoryDraft, verdict: ReviewVerdict) -> StoryDraft:
    if verdict.is_appropriate:
        raise InvalidRequestError("cannot revise a story already judged appropriate")
    # The reviewer both judges and repairs: the update prompt goes to the
    # same backend that produced the verdict.
    message = draft.text + "\n\nFeedback:\n" + verdict.reasoning
    completion = agents.complete("reviewer", prompts.REVIEWER_UPDATE_PROMPT, message)
    return StoryDraft(
        paragraphs=tuple(split_paragraphs(completion)), revision=draft.revision + 1
    )


def moderation_loop(
    agents: StoryAgents, draft: StoryDraft, max_rounds: int = 3
) -> tuple[StoryDraft, list[ReviewVerdict]]:
    """Review-and-revise until approved; fail closed after max_rounds.

    At most max_rounds review calls are made. A story that is still
    judged inappropriate at that point fails the whole job: nothing of
    it ships.
    """
    if max_rounds < 1:
        raise InvalidRequestError(f"max_rounds must be >= 1, got {max_rounds}")
    history: list[ReviewVerdict] = []
    for round_number in range(1, max_rounds + 1):
        verdict = review_story(agents, draft)
        history.append(verdict)
        if verdict.is_appropriate:
            return replace(draft, approved=True), history
        if round_number < max_rounds:
            draft = revise_story(agents, draft, verdict)
    raise UnsafeContentError(
        f"story still judged inappropriate after {max_rounds} review round(s)",
        history=history,
    )


def direct_scene(
    agents: StoryAgents,
    paragraph: str,
    style: AnimationStyle,
    prior_guides: Sequence[SceneGuide],
) -> SceneGuide:
    """Produce the scene guide for one paragraph.

    All prior guides of the same story ride along in the user message so
    the director can keep characters and environments consistent. A
    completion that misses the mandatory style prefix earns exactly one
    re-ask before the operation fails.
    """
    if not paragraph.strip():
        raise InvalidRequestError("paragraph must be non-empty")
    index = len(prior_guides)
    message = _scene_message(paragraph, style, prior_guides)
    prefix = style_prefix(style)

    completion = agents.complete("movie_director", prompts.MOVIE_DIRECTOR_PROMPT, message).strip()
    if not completion.startswith(prefix):
        log.warning("scene prompt missing style prefix, re-asking once")
        reask = (
            message
            + f"\n\n{REASK_NOTE} The prompt must start with \"{prefix}\"."
        )
        completion = agents.complete(
            "movie_director", prompts.MOVIE_DIRECTOR_PROMPT, reask
        ).strip()
        if not completion.startswith(prefix):
            raise GenerationError(
                f"scene prompt still missing style prefix {prefix!r} after re-ask"
            )
    return SceneGuide(paragraph_index=index, style=style, prompt=completion)


def _scene_message(
    paragraph: str, style: AnimationStyle, prior_guides: Sequence[SceneGuide]
) -> str:
    parts = [f"Animation style: {style.value}"]
    if prior_guides:
        lines = [f"{g.paragraph_index + 1}. {g.prompt}" for g in prior_guides]
        parts.append("Previous scene guides:\n" + "\n".join(lines))
    parts.append(f"Paragraph:\n{paragraph}")
    return "\n\n".join(parts)


def direct_music(agents: StoryAgents, paragraph: str, index: int = 0) -> MusicGuide:
    """Produce the one-sentence music guide for one paragraph."""
    if not paragraph.strip():
        raise InvalidRequestError("paragraph must be non-empty")
    completion = agents.complete("music_director", prompts.MUSIC_DIRECTOR_PROMPT, paragraph)
    return MusicGuide(paragraph_index=index, composition=normalize_composition(completion))


def normalize_composition(text: str) -> str:
    """Collapse to one sentence ending in exactly one period."""
    flattened = " ".join(text.split())
    if flattened.startswith('"') and flattened.endswith('"') and len(flattened) > 1:
        flattened = flattened[1:-1].strip()
    first = re.split(r"(?<=[.!?])\s+", flattened)[0]
    body = first.rstrip(".!?\"' ")
    if not body:
        raise GenerationError("music director returned an empty composition")
    return body + "."


def narrate(
    agents: StoryAgents, story: StoryDraft, voice_reference: MediaAsset | None = None
) -> MediaAsset:
    """Narrate the full approved story (paragraphs joined by blank lines)."""
    if not story.approved:
        raise InvalidRequestError("only an approved story can be narrated")
    binding = agents.binding("narrator")
    request = SpeechRequest(text=story.text, voice_reference=voice_reference)
    return binding.client.synthesize_speech(binding.endpoint, request)
