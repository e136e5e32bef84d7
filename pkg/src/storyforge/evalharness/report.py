"""Report assembly: pairwise grid, means table, FPR table.

The report spec is a small JSON document:

    {"granularity": "per-criterion",
     "pairs": [["Gemma-9b", "Gemma-27b"], ...],
     "means_subjects": ["GPT-4o-mini", ...],
     "moderation_sources": ["gutenberg", "synthetic"]}

All keys are optional; an empty spec produces an empty report.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ..errors import ReportSpecError
from .records import ModerationRecord, ScoreRecord
from .stats import (
    Granularity,
    criterion_means,
    false_positive_rate,
    pairwise_rates,
    subjects_in,
)


@dataclass(frozen=True)
class ReportSpec:
    granularity: Granularity = Granularity.PER_CRITERION
    pairs: tuple[tuple[str, str], ...] = ()
    means_subjects: tuple[str, ...] = ()
    moderation_sources: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "ReportSpec":
        return cls(
            granularity=Granularity(data.get("granularity", Granularity.PER_CRITERION)),
            pairs=tuple((str(a), str(b)) for a, b in data.get("pairs", [])),
            means_subjects=tuple(str(s) for s in data.get("means_subjects", [])),
            moderation_sources=tuple(str(s) for s in data.get("moderation_sources", [])),
        )


@dataclass(frozen=True)
class Report:
    pairwise_csv: str | None = None
    means_csv: str | None = None
    fpr_csv: str | None = None
    text: str = ""
    files: dict[str, str] = field(default_factory=dict)


def build_report(
    records: list[ScoreRecord],
    spec: ReportSpec,
    moderation: list[ModerationRecord] | None = None,
) -> Report:
    _check_names(records, spec, moderation)

    sections: list[str] = []
    files: dict[str, str] = {}
    pairwise_csv = means_csv = fpr_csv = None

    if spec.pairs:
        rows = []
        for a, b in spec.pairs:
            rates = pairwise_rates(records, a, b, spec.granularity)
            rows.append([a, b, f"{rates.win:.2f}", f"{rates.tie:.2f}", f"{rates.loss:.2f}"])
        pairwise_csv = _csv(["test_subject", "versus_subject", "win", "tie", "loss"], rows)
        files["pairwise.csv"] = pairwise_csv
        sections.append(
            _table(
                f"Pairwise rates ({spec.granularity.value})",
                ["Test", "Versus", "Win", "Tie", "Loss"],
                rows,
            )
        )

    if spec.means_subjects:
        rows = []
        for subject in spec.means_subjects:
            for criterion, mean in criterion_means(records, subject).items():
                rows.append([subject, criterion, f"{mean:.2f}"])
        means_csv = _csv(["subject", "criterion", "mean"], rows)
        files["means.csv"] = means_csv
        sections.append(_table("Criterion means", ["Subject", "Criterion", "Mean"], rows))

    if spec.moderation_sources:
        rows = []
        for source in spec.moderation_sources:
            fpr = false_positive_rate(moderation or [], source)
            rows.append([source, f"{fpr:.2f}"])
        fpr_csv = _csv(["source", "fpr"], rows)
        files["fpr.csv"] = fpr_csv
        sections.append(_table("Moderation false-positive rate", ["Source", "FPR"], rows))

    return Report(
        pairwise_csv=pairwise_csv,
        means_csv=means_csv,
        fpr_csv=fpr_csv,
        text="\n\n".join(sections),
        files=files,
    )


def _check_names(
    records: list[ScoreRecord],
    spec: ReportSpec,
    moderation: list[ModerationRecord] | None,
) -> None:
    known_subjects = subjects_in(records)
    unknown = [
        name
        for name in dict.fromkeys(
            [s for pair in spec.pairs for s in pair] + list(spec.means_subjects)
        )
        if name not in known_subjects
    ]
    known_sources = {r.source for r in (moderation or [])}
    unknown += [s for s in spec.moderation_sources if s not in known_sources]
    if unknown:
        raise ReportSpecError(unknown)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table(title: str, header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [title, fmt.format(*header), fmt.format(*["-" * w for w in widths])]
    lines += [fmt.format(*row) for row in rows]
    return "\n".join(lines)
