"""Core narrative domain: dramatic phases, function cards, story briefs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

AGE_BAND = "7 to 12 (3rd to 6th graders)"


class AnimationStyle(str, Enum):
    CARTOON = "cartoon"
    ANIME = "anime"
    ANIMATED = "animated"


class FreytagPhase(Enum):
    """The five dramatic-arc phases, in fixed narrative order."""

    EXPOSITION = (1, "exposition")
    RISING_ACTION = (2, "rising action")
    CLIMAX = (3, "climax")
    FALLING_ACTION = (4, "falling action")
    RESOLUTION = (5, "resolution")

    def __init__(self, ordinal: int, label: str):
        self.ordinal = ordinal
        self.label = label

    @property
    def title(self) -> str:
        return self.label.title()

    @classmethod
    def from_ordinal(cls, ordinal: int) -> FreytagPhase:
        for phase in cls:
            if phase.ordinal == ordinal:
                return phase
        raise ValueError(f"no phase with ordinal {ordinal}")

    @classmethod
    def from_label(cls, label: str) -> FreytagPhase:
        wanted = label.strip().lower()
        for phase in cls:
            if phase.label == wanted:
                return phase
        raise ValueError(f"no phase named {label!r}")


PHASES_IN_ORDER: tuple[FreytagPhase, ...] = tuple(FreytagPhase)


@dataclass(frozen=True)
class ProppFunction:
    """One of the 31 selectable narrative-function cards."""

    id: int
    name: str
    phase: FreytagPhase
    card_text: str
    questions: tuple[str, ...]


@dataclass(frozen=True)
class CardAnswer:
    """A user's answers to one selected function card."""

    function_id: int
    answers: tuple[str, ...]


@dataclass(frozen=True)
class PhaseInput:
    """All cards the user filled in for one phase."""

    phase: FreytagPhase
    cards: tuple[CardAnswer, ...]


@dataclass(frozen=True)
class StoryBrief:
    """The complete five-phase narrative input; source of truth for the writer."""

    phase_inputs: tuple[PhaseInput, ...]
    animation_style: AnimationStyle
    age_band: str = AGE_BAND
