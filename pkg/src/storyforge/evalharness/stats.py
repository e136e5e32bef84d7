"""Pairwise win/tie/loss rates, per-criterion means, and moderation FPR.

Comparison granularity is an explicit parameter because reported
percentages can be realized under two different aggregation units:

  per-criterion:   one unit per (item, rater, criterion); the two
                   subjects' scores on that criterion are compared.
  per-rater-total: one unit per (item, rater); the subjects' summed
                   scores across criteria are compared.

Counting is exact integer arithmetic; percentages are rounded half-up
to two decimals only at the edge (`as_percent`), so algebraic
identities such as win(a,b) = loss(b,a) hold exactly on the raw counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import InvalidRequestError
from .records import ModerationRecord, ScoreRecord


class Granularity(str, Enum):
    PER_CRITERION = "per-criterion"
    PER_RATER_TOTAL = "per-rater-total"


def as_percent(numerator: int, denominator: int) -> float:
    """numerator/denominator as a percentage, half-up at two decimals."""
    if denominator <= 0:
        raise InvalidRequestError("percentage denominator must be positive")
    hundredths, remainder = divmod(10000 * numerator, denominator)
    if 2 * remainder >= denominator:
        hundredths += 1
    return hundredths / 100.0


def round2(numerator: int, denominator: int) -> float:
    """numerator/denominator rounded half-up to two decimals."""
    if denominator <= 0:
        raise InvalidRequestError("denominator must be positive")
    hundredths, remainder = divmod(100 * numerator, denominator)
    if 2 * remainder >= denominator:
        hundredths += 1
    return hundredths / 100.0


@dataclass(frozen=True)
class PairwiseRates:
    """Win/tie/loss percentages plus the exact unit counts behind them."""

    win: float
    tie: float
    loss: float
    win_units: int
    tie_units: int
    loss_units: int

    @property
    def total_units(self) -> int:
        return self.win_units + self.tie_units + self.loss_units


def subjects_in(records: list[ScoreRecord]) -> set[str]:
    return {r.subject_id for r in records}


def pairwise_rates(
    records: list[ScoreRecord],
    subject_a: str,
    subject_b: str,
    granularity: Granularity | str = Granularity.PER_CRITERION,
) -> PairwiseRates:
    """Compare subject_a against subject_b over their shared units."""
    granularity = Granularity(granularity)
    present = subjects_in(records)
    for subject in (subject_a, subject_b):
        if subject not in present:
            raise InvalidRequestError(f"unknown subject {subject!r}")

    values_a = _unit_values(records, subject_a, granularity)
    values_b = _unit_values(records, subject_b, granularity)
    shared = sorted(set(values_a) & set(values_b))
    if not shared:
        raise InvalidRequestError(
            f"no shared comparison units between {subject_a!r} and {subject_b!r}"
        )

    win = tie = loss = 0
    for unit in shared:
        a, b = values_a[unit], values_b[unit]
        if a > b:
            win += 1
        elif a == b:
            tie += 1
        else:
            loss += 1
    total = len(shared)
    return PairwiseRates(
        win=as_percent(win, total),
        tie=as_percent(tie, total),
        loss=as_percent(loss, total),
        win_units=win,
        tie_units=tie,
        loss_units=loss,
    )


def _unit_values(
    records: list[ScoreRecord], subject: str, granularity: Granularity
) -> dict[tuple, int]:
    if granularity is Granularity.PER_CRITERION:
        return {
            (r.item_id, r.rater_id, r.criterion): r.score
            for r in records
            if r.subject_id == subject
        }
    totals: dict[tuple, int] = {}
    for r in records:
        if r.subject_id == subject:
            key = (r.item_id, r.rater_id)
            totals[key] = totals.get(key, 0) + r.score
    return totals


def criterion_means(records: list[ScoreRecord], subject: str) -> dict[str, float]:
    """Mean score per criterion for one subject, two-decimal half-up."""
    if subject not in subjects_in(records):
        raise InvalidRequestError(f"unknown subject {subject!r}")
    sums: dict[str, int] = {}
    counts: dict[str, int] = {}
    for r in records:
        if r.subject_id == subject:
            sums[r.criterion] = sums.get(r.criterion, 0) + r.score
            counts[r.criterion] = counts.get(r.criterion, 0) + 1
    return {name: round2(sums[name], counts[name]) for name in sorted(sums)}


def false_positive_rate(records: list[ModerationRecord], source: str | None = None) -> float:
    """Share of truly inappropriate stories the classifier let through.

    The positive class is "appropriate": the failure that matters is an
    inappropriate story predicted appropriate, so
    FPR = predicted-appropriate among truly-inappropriate / truly-inappropriate.
    """
    if source is not None:
        records = [r for r in records if r.source == source]
    inappropriate = [r for r in records if r.true_label == "inappropriate"]
    if not inappropriate:
        raise InvalidRequestError(
            "no truly inappropriate records"
            + (f" for source {source!r}" if source is not None else "")
        )
    false_positives = sum(1 for r in inappropriate if r.predicted_label == "appropriate")
    return as_percent(false_positives, len(inappropriate))
