"""Authoring sessions: the five phases arrive strictly in order."""

from __future__ import annotations

from datetime import datetime, timezone

from ..errors import SessionOrderError
from ..narrative import (
    PHASES_IN_ORDER,
    AnimationStyle,
    PhaseInput,
    ProppFunction,
    StoryBrief,
    phase_input_from_dict,
    phase_input_to_dict,
    validate_phase_input,
)
from .records import RecordStore, new_id

PHASE_COUNT = len(PHASES_IN_ORDER)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionService:
    def __init__(self, records: RecordStore, functions: list[ProppFunction]):
        self.records = records
        self.functions = functions

    def create(self) -> dict:
        session = {
            "id": new_id("session"),
            "current_phase": 1,
            "complete": False,
            "phase_inputs": [],
            "created_at": _now(),
            "updated_at": _now(),
        }
        self.records.save("sessions", session["id"], session)
        return session

    def get(self, session_id: str) -> dict:
        return self.records.load("sessions", session_id)

    def submit_phase(self, session_id: str, phase_input_raw: dict) -> dict:
        """Validate and append one phase; phases advance strictly 1..5."""
        parsed = phase_input_from_dict(phase_input_raw)

        def mutate(session: dict) -> dict:
            if session["complete"]:
                raise SessionOrderError(f"session {session_id} is already complete")
            expected = session["current_phase"]
            if parsed.phase.ordinal != expected:
                raise SessionOrderError(
                    f"expected phase {expected} "
                    f"({PHASES_IN_ORDER[expected - 1].label}), "
                    f"got phase {parsed.phase.ordinal} ({parsed.phase.label})"
                )
            validate_phase_input(parsed, self.functions)
            session["phase_inputs"].append(phase_input_to_dict(parsed))
            if expected == PHASE_COUNT:
                session["complete"] = True
            else:
                session["current_phase"] = expected + 1
            session["updated_at"] = _now()
            return session

        return self.records.update("sessions", session_id, mutate)

    def brief(self, session_id: str, animation_style: str = "animated") -> StoryBrief:
        """Materialize the brief of a complete session."""
        session = self.get(session_id)
        if not session["complete"]:
            missing = PHASES_IN_ORDER[session["current_phase"] - 1]
            raise SessionOrderError(
                f"session incomplete: phase {missing.ordinal} ({missing.label}) missing"
            )
        phase_inputs: list[PhaseInput] = [
            phase_input_from_dict(raw) for raw in session["phase_inputs"]
        ]
        return StoryBrief(
            phase_inputs=tuple(phase_inputs),
            animation_style=AnimationStyle(animation_style),
        )
