"""Parsing and rendering of reviewer verdict output.

The nominal format is two marker lines:

    ### Reasoning:
    <free text>

    ### Is Appropriate: True/False

Real model output drifts, so parsing tolerates case differences,
flexible whitespace and trailing punctuation on the verdict token, and
duplicated verdict lines (the last one wins). Both markers must be
present for a parse to succeed; the verdict token must read True or
False after stripping trailing punctuation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ReviewParseError

_REASONING_RE = re.compile(r"^[ \t]*#{3}[ \t]*reasoning[ \t]*:(.*)$", re.IGNORECASE | re.MULTILINE)
_VERDICT_RE = re.compile(
    r"^[ \t]*#{3}[ \t]*is appropriate[ \t]*:[ \t]*(.*?)[ \t]*\r?$",
    re.IGNORECASE | re.MULTILINE,
)
_TRAILING_PUNCT = ".,;:!?\"'"


@dataclass(frozen=True)
class ReviewVerdict:
    reasoning: str
    is_appropriate: bool
    raw: str


def parse_review_output(raw: str) -> ReviewVerdict:
    """Parse reviewer output; raises ReviewParseError on malformed input."""
    reasoning_match = _REASONING_RE.search(raw)
    if reasoning_match is None:
        raise ReviewParseError("reviewer output lacks the '### Reasoning:' marker")

    verdict_matches = list(_VERDICT_RE.finditer(raw))
    if not verdict_matches:
        raise ReviewParseError("reviewer output lacks the '### Is Appropriate:' marker")

    token = verdict_matches[-1].group(1).rstrip(_TRAILING_PUNCT).strip().lower()
    if token == "true":
        is_appropriate = True
    elif token == "false":
        is_appropriate = False
    else:
        raise ReviewParseError(
            f"verdict token must be True or False, got {verdict_matches[-1].group(1)!r}"
        )

    # Reasoning runs from the end of its marker to the first verdict line
    # that follows it (or to the end of the text if none follows).
    start = reasoning_match.end()
    end = len(raw)
    for match in verdict_matches:
        if match.start() >= start:
            end = match.start()
            break
    reasoning = (reasoning_match.group(1) + raw[start:end]).strip()

    return ReviewVerdict(reasoning=reasoning, is_appropriate=is_appropriate, raw=raw)


def render_review_output(reasoning: str, is_appropriate: bool) -> str:
    """Canonical rendering; parse_review_output round-trips it."""
    flag = "True" if is_appropriate else "False"
    return f"### Reasoning:\n{reasoning}\n\n### Is Appropriate: {flag}"
