"""Deterministic in-process mock backends.

Every response is a pure function of (canonical request bytes, configured
seed), so identical requests yield identical payloads across process
restarts. Text responses are routed on distinctive markers in the system
prompt; media responses carry minimal valid wav/mp4 containers filled
with seeded pseudo-random payload.
"""

from __future__ import annotations

import hashlib
import io
import json
import random
import re
import struct
import wave

from ..errors import BackendError
from .types import BackendEndpoint

MOCK_BASE_URL = "mock://local"

_STOPWORDS = frozenset(
    """the and for with that this from into over under their there then than when
    what where while your they them have been will would could should about
    describe how happens story function animation style previous scene guides
    paragraph feedback""".split()
)

_FALLBACK_WORDS = ("friends", "forest", "lantern", "courage", "river", "song")

_OPENERS = (
    "Once upon a time",
    "Not long after",
    "At the heart of it all",
    "When the hardest moment passed",
    "In the end",
)

_INSTRUMENTS = ("strings", "piano", "flutes", "harp", "woodwinds")
_MOODS = ("gentle", "playful", "soaring", "hushed", "bright")

REVISION_SENTINEL = "Everyone was safe and kind to one another."


def canonical_request_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _rng_for(payload: dict, seed: int) -> random.Random:
    material = str(seed).encode("ascii") + b"\x00" + canonical_request_bytes(payload)
    return random.Random(int.from_bytes(hashlib.sha256(material).digest()[:8], "big"))


def _keywords(text: str) -> list[str]:
    words: list[str] = []
    for match in re.finditer(r"[A-Za-z]{4,}", text):
        word = match.group().lower()
        if word not in _STOPWORDS and word not in words:
            words.append(word)
    return words or list(_FALLBACK_WORDS)


class MockTransport:
    """Serves the backend wire protocol without any network."""

    def __init__(self, seed: int = 0, reviewer_verdict: bool = True):
        self.seed = seed
        self.reviewer_verdict = reviewer_verdict

    def send(self, endpoint: BackendEndpoint, path: str, payload: dict) -> dict:
        rng = _rng_for(payload, self.seed)
        if path == "/generate/text":
            return {"text": self._text(payload, rng)}
        if path == "/generate/speech":
            duration = round(max(1.0, 0.055 * len(payload["text"])), 2)
            return _media_response(_wav_bytes(duration, rng), "wav", duration)
        if path == "/generate/video":
            duration = float(payload["duration"])
            return _media_response(_mp4_bytes(rng), "mp4", duration)
        if path == "/generate/music":
            duration = float(payload["duration"])
            return _media_response(_wav_bytes(duration, rng), "wav", duration)
        raise BackendError(f"mock backend has no route {path}", status=404)

    # Text routing: the five agent roles are recognized by markers that
    # appear in exactly one system prompt each.
    def _text(self, payload: dict, rng: random.Random) -> str:
        system = payload.get("system_prompt", "")
        message = payload.get("user_message", "")
        if "content moderator" in system:
            return self._review(message)
        if "child-friendly" in system:
            return _revised_story(message)
        if "text-to-video" in system:
            return _scene_prompt(message, rng)
        if "music composition" in system:
            return _composition(message, rng)
        if "folktale or fairytale" in system:
            return _story(message, rng)
        words = _keywords(system + " " + message)
        return f"A mock completion about {words[0]}."

    def _review(self, message: str) -> str:
        if self.reviewer_verdict:
            return (
                "### Reasoning:\nThe story uses gentle language and age-appropriate "
                "themes throughout.\n\n### Is Appropriate: True"
            )
        return (
            "### Reasoning:\nSome moments may feel too intense for younger readers; "
            "soften the conflict and remove any frightening detail.\n\n"
            "### Is Appropriate: False"
        )


def _story(message: str, rng: random.Random) -> str:
    words = _keywords(message)
    pick = lambda: words[rng.randrange(len(words))]  # noqa: E731
    paragraphs = []
    for opener in _OPENERS:
        a, b, c = pick(), pick(), pick()
        paragraphs.append(
            f"{opener}, the tale turned to {a}. "
            f"The children spoke softly of {b}, and they remembered {c} together."
        )
    return "\n\n".join(paragraphs)


def _revised_story(message: str) -> str:
    # The update request carries the current story followed by feedback;
    # keep the story text and close on a reassuring note.
    story = message.split("\n\nFeedback:\n", 1)[0]
    return story.rstrip() + " " + REVISION_SENTINEL


def _scene_prompt(message: str, rng: random.Random) -> str:
    match = re.search(r"Animation style:\s*(\w+)", message)
    style = match.group(1) if match else "animated"
    words = _keywords(message)
    a = words[rng.randrange(len(words))]
    b = words[rng.randrange(len(words))]
    return (
        f"In a {style} world, a young hero walks past the {a} "
        f"while the {b} rests quietly in the background."
    )


def _composition(message: str, rng: random.Random) -> str:
    words = _keywords(message)
    word = words[rng.randrange(len(words))]
    instrument = _INSTRUMENTS[rng.randrange(len(_INSTRUMENTS))]
    mood = _MOODS[rng.randrange(len(_MOODS))]
    return f"A {mood} melody on {instrument}, echoing the feeling of {word}."


def _media_response(data: bytes, fmt: str, duration: float) -> dict:
    import base64

    return {
        "media_b64": base64.b64encode(data).decode("ascii"),
        "format": fmt,
        "duration": duration,
    }


def _wav_bytes(duration: float, rng: random.Random) -> bytes:
    # 8 kHz mono 16-bit keeps payloads small while remaining a valid wav.
    frames = max(1, int(duration * 8000))
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(8000)
        w.writeframes(rng.randbytes(frames * 2))
    return buf.getvalue()


def _mp4_bytes(rng: random.Random) -> bytes:
    def box(kind: bytes, body: bytes) -> bytes:
        return struct.pack(">I", 8 + len(body)) + kind + body

    ftyp = box(b"ftyp", b"isom\x00\x00\x02\x00isomiso2mp41")
    mdat = box(b"mdat", rng.randbytes(4096))
    return ftyp + mdat
