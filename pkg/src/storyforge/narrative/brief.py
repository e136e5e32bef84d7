"""Brief validation, wire-format parsing, and writer-input assembly."""

from __future__ import annotations

from collections.abc import Sequence

from ..errors import BriefIssue, BriefValidationError
from . import catalog as catalog_mod
from .model import (
    AGE_BAND,
    PHASES_IN_ORDER,
    AnimationStyle,
    CardAnswer,
    FreytagPhase,
    PhaseInput,
    ProppFunction,
    StoryBrief,
)


def validate_brief(
    brief: StoryBrief, functions: Sequence[ProppFunction] | None = None
) -> StoryBrief:
    """Check every brief invariant and return the brief unchanged.

    Validation is total: all violations are collected and reported in one
    BriefValidationError rather than stopping at the first.
    """
    issues = collect_issues(brief, functions)
    if issues:
        raise BriefValidationError(issues)
    return brief


def collect_issues(
    brief: StoryBrief, functions: Sequence[ProppFunction] | None = None
) -> list[BriefIssue]:
    functions = list(functions) if functions is not None else catalog_mod.catalog()
    by_id = {fn.id: fn for fn in functions}
    issues: list[BriefIssue] = []

    present = {pi.phase for pi in brief.phase_inputs}
    for phase in PHASES_IN_ORDER:
        if phase not in present:
            issues.append(
                BriefIssue(
                    f"phase {phase.ordinal} ({phase.label}) missing",
                    phase_ordinal=phase.ordinal,
                )
            )

    ordered = [pi.phase for pi in brief.phase_inputs]
    if ordered != sorted(ordered, key=lambda p: p.ordinal):
        issues.append(BriefIssue("phase inputs are not in narrative order"))
    if len(ordered) != len(set(ordered)):
        issues.append(BriefIssue("a phase appears more than once"))

    if brief.age_band != AGE_BAND:
        issues.append(BriefIssue(f"age_band must be {AGE_BAND!r}, got {brief.age_band!r}"))

    for pi in brief.phase_inputs:
        issues.extend(_phase_issues(pi, by_id))
    return issues


def _phase_issues(pi: PhaseInput, by_id: dict[int, ProppFunction]) -> list[BriefIssue]:
    """Issues for a single phase input; reused by the session service."""
    issues: list[BriefIssue] = []
    ordinal = pi.phase.ordinal
    if not pi.cards:
        issues.append(
            BriefIssue(f"phase {ordinal} ({pi.phase.label}) has no cards", phase_ordinal=ordinal)
        )
    seen: set[int] = set()
    for card in pi.cards:
        fn = by_id.get(card.function_id)
        if fn is None:
            issues.append(
                BriefIssue(
                    f"phase {ordinal}: unknown function id {card.function_id}",
                    phase_ordinal=ordinal,
                    function_id=card.function_id,
                )
            )
            continue
        if card.function_id in seen:
            issues.append(
                BriefIssue(
                    f"phase {ordinal}: function {card.function_id} ({fn.name}) selected twice",
                    phase_ordinal=ordinal,
                    function_id=card.function_id,
                )
            )
        seen.add(card.function_id)
        if fn.phase is not pi.phase:
            issues.append(
                BriefIssue(
                    f"phase {ordinal}: function {fn.id} ({fn.name}) belongs to "
                    f"{fn.phase.label}, not {pi.phase.label}",
                    phase_ordinal=ordinal,
                    function_id=fn.id,
                )
            )
        if len(card.answers) != len(fn.questions):
            issues.append(
                BriefIssue(
                    f"phase {ordinal}: function {fn.id} ({fn.name}) expects "
                    f"{len(fn.questions)} answer(s), got {len(card.answers)}",
                    phase_ordinal=ordinal,
                    function_id=fn.id,
                )
            )
        for i, answer in enumerate(card.answers):
            if not answer.strip():
                issues.append(
                    BriefIssue(
                        f"phase {ordinal}: function {fn.id} ({fn.name}) answer "
                        f"{i + 1} is empty",
                        phase_ordinal=ordinal,
                        function_id=fn.id,
                    )
                )
    return issues


def validate_phase_input(
    pi: PhaseInput, functions: Sequence[ProppFunction] | None = None
) -> PhaseInput:
    functions = list(functions) if functions is not None else catalog_mod.catalog()
    issues = _phase_issues(pi, {fn.id: fn for fn in functions})
    if issues:
        raise BriefValidationError(issues)
    return pi


def assemble_writer_input(
    brief: StoryBrief, functions: Sequence[ProppFunction] | None = None
) -> str:
    """Serialize a validated brief into the plain-text writer message.

    Deterministic: five sections in narrative order, each headed by the
    phase name, each card rendered as its function name followed by
    question/answer pairs in question order. Identical briefs always
    produce byte-identical output.
    """
    functions = list(functions) if functions is not None else catalog_mod.catalog()
    by_id = {fn.id: fn for fn in functions}
    ordered = sorted(brief.phase_inputs, key=lambda pi: pi.phase.ordinal)

    blocks: list[str] = []
    for pi in ordered:
        lines = [f"{pi.phase.title}:"]
        for card in pi.cards:
            fn = by_id[card.function_id]
            lines.append(f"Function: {fn.name}")
            for question, answer in zip(fn.questions, card.answers):
                lines.append(f"Q: {question}")
                lines.append(f"A: {answer}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# --- wire format -----------------------------------------------------------
# The brief travels between UI and service as JSON:
#   {"animation_style": "cartoon",
#    "age_band": "7 to 12 (3rd to 6th graders)",   # optional, defaulted
#    "phase_inputs": [{"phase": "exposition" | 1,
#                      "cards": [{"function_id": 1, "answers": ["..."]}]}]}


def brief_from_dict(data: dict) -> StoryBrief:
    """Parse the wire form. Structural problems raise BriefValidationError."""
    issues: list[BriefIssue] = []
    if not isinstance(data, dict):
        raise BriefValidationError([BriefIssue("brief must be a JSON object")])

    style_raw = data.get("animation_style")
    style = AnimationStyle.CARTOON
    try:
        style = AnimationStyle(str(style_raw))
    except ValueError:
        issues.append(
            BriefIssue(
                "animation_style must be one of "
                + ", ".join(s.value for s in AnimationStyle)
                + f"; got {style_raw!r}"
            )
        )

    phase_inputs: list[PhaseInput] = []
    raw_inputs = data.get("phase_inputs")
    if not isinstance(raw_inputs, list):
        issues.append(BriefIssue("phase_inputs must be a list"))
        raw_inputs = []
    for entry in raw_inputs:
        parsed = _phase_input_from_dict(entry, issues)
        if parsed is not None:
            phase_inputs.append(parsed)

    if issues:
        raise BriefValidationError(issues)
    return StoryBrief(
        phase_inputs=tuple(phase_inputs),
        animation_style=style,
        age_band=str(data.get("age_band", AGE_BAND)),
    )


def phase_input_from_dict(entry: object) -> PhaseInput:
    """Parse one phase input from its wire form; structural errors raise."""
    issues: list[BriefIssue] = []
    parsed = _phase_input_from_dict(entry, issues)
    if parsed is None or issues:
        raise BriefValidationError(issues or [BriefIssue("malformed phase input")])
    return parsed


def phase_input_to_dict(pi: PhaseInput) -> dict:
    return {
        "phase": pi.phase.label,
        "cards": [
            {"function_id": card.function_id, "answers": list(card.answers)}
            for card in pi.cards
        ],
    }


def _phase_input_from_dict(entry: object, issues: list[BriefIssue]) -> PhaseInput | None:
    if not isinstance(entry, dict):
        issues.append(BriefIssue("phase input must be an object"))
        return None
    try:
        phase = parse_phase(entry.get("phase"))
    except ValueError as exc:
        issues.append(BriefIssue(str(exc)))
        return None
    cards: list[CardAnswer] = []
    raw_cards = entry.get("cards")
    if not isinstance(raw_cards, list):
        issues.append(
            BriefIssue(f"phase {phase.ordinal}: cards must be a list", phase_ordinal=phase.ordinal)
        )
        raw_cards = []
    for raw in raw_cards:
        if not isinstance(raw, dict) or "function_id" not in raw:
            issues.append(
                BriefIssue(
                    f"phase {phase.ordinal}: card must be an object with function_id",
                    phase_ordinal=phase.ordinal,
                )
            )
            continue
        try:
            function_id = int(raw["function_id"])
        except (TypeError, ValueError):
            issues.append(
                BriefIssue(
                    f"phase {phase.ordinal}: function_id must be an integer",
                    phase_ordinal=phase.ordinal,
                )
            )
            continue
        answers = raw.get("answers")
        if not isinstance(answers, list):
            answers = []
        cards.append(CardAnswer(function_id=function_id, answers=tuple(str(a) for a in answers)))
    return PhaseInput(phase=phase, cards=tuple(cards))


def parse_phase(value: object) -> FreytagPhase:
    if isinstance(value, FreytagPhase):
        return value
    if isinstance(value, bool):
        raise ValueError(f"phase must be an ordinal or name, got {value!r}")
    if isinstance(value, int):
        return FreytagPhase.from_ordinal(value)
    if isinstance(value, str):
        if value.strip().isdigit():
            return FreytagPhase.from_ordinal(int(value))
        return FreytagPhase.from_label(value)
    raise ValueError(f"phase must be an ordinal or name, got {value!r}")


def brief_to_dict(brief: StoryBrief) -> dict:
    return {
        "animation_style": brief.animation_style.value,
        "age_band": brief.age_band,
        "phase_inputs": [phase_input_to_dict(pi) for pi in brief.phase_inputs],
    }
