"""Machine-readable scoring rubrics.

Rubric membership is data-driven: the default file ships the story,
speech, video, and moderation rubrics, and a custom rubric file with a
different criterion set is a drop-in replacement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import ConfigurationError

SCORE_VALUES = (0, 1, 2)

MODALITIES = ("story", "tts", "ttv", "moderation")


@dataclass(frozen=True)
class Criterion:
    name: str
    anchors: tuple[tuple[int, str], ...]

    def anchor(self, score: int) -> str:
        for value, text in self.anchors:
            if value == score:
                return text
        raise KeyError(score)


@dataclass(frozen=True)
class Rubric:
    modality: str
    criteria: tuple[Criterion, ...]

    def criterion_names(self) -> list[str]:
        return [c.name for c in self.criteria]


def default_rubrics_path() -> Path:
    return Path(str(resources.files("storyforge.evalharness").joinpath("data/rubrics.json")))


def load_rubric(modality: str, path: str | Path | None = None) -> Rubric:
    """Load one modality's rubric; unknown modalities are an error."""
    rubrics = load_all_rubrics(path)
    if modality not in rubrics:
        raise ConfigurationError(
            f"unknown rubric modality {modality!r}; known: {', '.join(sorted(rubrics))}"
        )
    return rubrics[modality]


def load_all_rubrics(path: str | Path | None = None) -> dict[str, Rubric]:
    source = Path(path) if path is not None else default_rubrics_path()
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigurationError(f"rubric file not found: {source}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"rubric file {source} is not valid JSON: {exc}") from exc

    rubrics: dict[str, Rubric] = {}
    for modality, rows in raw.items():
        criteria = []
        for row in rows:
            anchors = tuple(sorted((int(k), str(v)) for k, v in row["anchors"].items()))
            if tuple(k for k, _ in anchors) != SCORE_VALUES:
                raise ConfigurationError(
                    f"criterion {row['name']!r} must anchor scores {SCORE_VALUES}"
                )
            criteria.append(Criterion(name=str(row["name"]), anchors=anchors))
        rubrics[modality] = Rubric(modality=modality, criteria=tuple(criteria))
    return rubrics


def known_criteria(path: str | Path | None = None) -> set[str]:
    """Union of criterion names across all rubrics (score-file validation)."""
    names: set[str] = set()
    for rubric in load_all_rubrics(path).values():
        names.update(rubric.criterion_names())
    return names
