"""Score and moderation record loading.

Score CSV schema:       item_id,rater_id,subject_id,criterion,score
Moderation CSV schema:  story_id,source,true_label,predicted_label

Both loaders are strict: a malformed row is an error with its line
number, and duplicate measurements are rejected rather than averaged,
because silently merged duplicates hide corrupted exports.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..errors import InvalidRequestError
from .rubrics import SCORE_VALUES, known_criteria

SCORE_HEADER = ["item_id", "rater_id", "subject_id", "criterion", "score"]
MODERATION_HEADER = ["story_id", "source", "true_label", "predicted_label"]

LABELS = ("appropriate", "inappropriate")


class ScoreDataError(InvalidRequestError):
    """A score or moderation file failed validation."""


@dataclass(frozen=True)
class ScoreRecord:
    item_id: str
    rater_id: str
    subject_id: str
    criterion: str
    score: int


@dataclass(frozen=True)
class ModerationRecord:
    story_id: str
    source: str
    true_label: str
    predicted_label: str

    def __post_init__(self) -> None:
        for field_name, value in (
            ("true_label", self.true_label),
            ("predicted_label", self.predicted_label),
        ):
            if value not in LABELS:
                raise ScoreDataError(
                    f"{field_name} must be one of {LABELS}, got {value!r}"
                )


def load_scores(path: str | Path, criteria: set[str] | None = None) -> list[ScoreRecord]:
    """Parse a score CSV; criteria defaults to the shipped rubrics' union."""
    allowed = criteria if criteria is not None else known_criteria()
    records: list[ScoreRecord] = []
    seen: set[tuple[str, str, str, str]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SCORE_HEADER:
            raise ScoreDataError(
                f"{path}: header must be {','.join(SCORE_HEADER)}, got {header}"
            )
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(SCORE_HEADER):
                raise ScoreDataError(
                    f"{path}:{line_number}: expected {len(SCORE_HEADER)} fields, got {len(row)}"
                )
            item_id, rater_id, subject_id, criterion, score_text = (v.strip() for v in row)
            try:
                score = int(score_text)
            except ValueError:
                raise ScoreDataError(
                    f"{path}:{line_number}: score must be an integer, got {score_text!r}"
                ) from None
            if score not in SCORE_VALUES:
                raise ScoreDataError(
                    f"{path}:{line_number}: score must be in {SCORE_VALUES}, got {score}"
                )
            if criterion not in allowed:
                raise ScoreDataError(
                    f"{path}:{line_number}: unknown criterion {criterion!r}"
                )
            key = (item_id, rater_id, subject_id, criterion)
            if key in seen:
                raise ScoreDataError(
                    f"{path}:{line_number}: duplicate measurement for "
                    f"(item {item_id}, rater {rater_id}, subject {subject_id}, "
                    f"criterion {criterion})"
                )
            seen.add(key)
            records.append(ScoreRecord(item_id, rater_id, subject_id, criterion, score))
    return records


def load_moderation(path: str | Path) -> list[ModerationRecord]:
    records: list[ModerationRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != MODERATION_HEADER:
            raise ScoreDataError(
                f"{path}: header must be {','.join(MODERATION_HEADER)}, got {header}"
            )
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MODERATION_HEADER):
                raise ScoreDataError(
                    f"{path}:{line_number}: expected {len(MODERATION_HEADER)} fields, "
                    f"got {len(row)}"
                )
            try:
                records.append(ModerationRecord(*(v.strip() for v in row)))
            except ScoreDataError as exc:
                raise ScoreDataError(f"{path}:{line_number}: {exc}") from None
    return records
