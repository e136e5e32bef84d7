"""Agent system prompts, loaded verbatim from packaged text resources.

The .txt resources are the contract with the text backends: they are
never reformatted, templated, or "fixed" (including spelling and
punctuation oddities), so the backend sees exactly the instructions the
deployed system was tuned against.
"""

from __future__ import annotations

from importlib import resources


def _load(name: str) -> str:
    return (
        resources.files("storyforge.pipeline")
        .joinpath(f"prompts/{name}.txt")
        .read_text(encoding="utf-8")
    )


WRITER_PROMPT = _load("writer")
REVIEWER_PROMPT = _load("reviewer")
REVIEWER_UPDATE_PROMPT = _load("reviewer_update")
MOVIE_DIRECTOR_PROMPT = _load("movie_director")
MUSIC_DIRECTOR_PROMPT = _load("music_director")

SYSTEM_PROMPTS: dict[str, str] = {
    "writer": WRITER_PROMPT,
    "reviewer": REVIEWER_PROMPT,
    "reviewer_update": REVIEWER_UPDATE_PROMPT,
    "movie_director": MOVIE_DIRECTOR_PROMPT,
    "music_director": MUSIC_DIRECTOR_PROMPT,
}
