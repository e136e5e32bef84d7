"""Loading and validation of the narrative-function catalog.

The catalog is a JSON array of 31 card definitions. The function-to-phase
mapping and the question texts live entirely in that file, so swapping in
a different distribution or richer per-card questions is a data change.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..errors import CatalogError
from .model import FreytagPhase, ProppFunction

EXPECTED_FUNCTION_COUNT = 31


def default_catalog_path() -> Path:
    return Path(str(resources.files("storyforge.narrative").joinpath("data/propp_catalog.json")))


def catalog(path: str | Path | None = None) -> list[ProppFunction]:
    """Load all 31 narrative functions, ordered by id.

    Raises CatalogError naming the offending entry when the file is
    missing, malformed, or violates the catalog invariants.
    """
    source = Path(path) if path is not None else default_catalog_path()
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CatalogError(f"catalog file not found: {source}") from None
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog file {source} is not valid JSON: {exc}") from exc

    if not isinstance(raw, list):
        raise CatalogError(f"catalog file {source} must contain a JSON array")

    functions = [_parse_entry(entry, index) for index, entry in enumerate(raw)]

    if len(functions) != EXPECTED_FUNCTION_COUNT:
        raise CatalogError(
            f"expected {EXPECTED_FUNCTION_COUNT} functions, found {len(functions)}"
        )
    seen: dict[int, str] = {}
    for fn in functions:
        if fn.id in seen:
            raise CatalogError(f"duplicate function id {fn.id} ({seen[fn.id]!r} and {fn.name!r})")
        seen[fn.id] = fn.name
    missing = sorted(set(range(1, EXPECTED_FUNCTION_COUNT + 1)) - set(seen))
    if missing:
        raise CatalogError(f"function ids must cover 1-{EXPECTED_FUNCTION_COUNT}; missing {missing}")
    for phase in FreytagPhase:
        if not any(fn.phase is phase for fn in functions):
            raise CatalogError(f"phase {phase.label!r} has no functions assigned")

    return sorted(functions, key=lambda fn: fn.id)


def _parse_entry(entry: object, index: int) -> ProppFunction:
    if not isinstance(entry, dict):
        raise CatalogError(f"catalog entry #{index} is not an object")
    label = entry.get("name") or f"#{index}"
    try:
        fn_id = int(entry["id"])
        name = str(entry["name"])
        phase = FreytagPhase.from_label(str(entry["phase"]))
        card_text = str(entry["card_text"])
        questions = tuple(str(q) for q in entry["questions"])
    except KeyError as exc:
        raise CatalogError(f"catalog entry {label!r} is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise CatalogError(f"catalog entry {label!r} is malformed: {exc}") from exc
    if not 1 <= fn_id <= EXPECTED_FUNCTION_COUNT:
        raise CatalogError(f"catalog entry {label!r} has out-of-range id {fn_id}")
    if not name.strip():
        raise CatalogError(f"catalog entry #{index} has an empty name")
    if not questions or any(not q.strip() for q in questions):
        raise CatalogError(f"catalog entry {label!r} must define at least one non-empty question")
    return ProppFunction(id=fn_id, name=name, phase=phase, card_text=card_text, questions=questions)


def by_id(functions: list[ProppFunction]) -> dict[int, ProppFunction]:
    return {fn.id: fn for fn in functions}
