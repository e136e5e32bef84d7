"""End-to-end pipeline: brief in, complete story package out.

Stage order: write -> moderation loop -> (narration, per-paragraph scene
and music direction, media generation) -> package assembly. Scene
direction is sequential in paragraph order because each call feeds on
the guides before it; narration and per-paragraph media generation are
independent and overlap on a worker pool, throttled by the gateway's
per-endpoint concurrency caps.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import Future, ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import PipelineStageError
from ..gateway import MediaAsset, MusicRequest, VideoRequest
from ..narrative import ProppFunction, StoryBrief, brief_to_dict, validate_brief
from ..store import digest_of
from .review import ReviewVerdict
from .stages import (
    MusicGuide,
    SceneGuide,
    StoryAgents,
    StoryDraft,
    direct_music,
    direct_scene,
    moderation_loop,
    narrate,
    write_story,
)

log = logging.getLogger("storyforge.pipeline")

STAGES = ("writing", "reviewing", "directing", "rendering", "assembling")

StageCallback = Callable[[str], None]
ProgressCallback = Callable[[str, int, int], None]


@dataclass(frozen=True)
class Segment:
    """Everything generated for one paragraph."""

    index: int
    scene_guide: SceneGuide
    music_guide: MusicGuide
    video: MediaAsset
    music: MediaAsset


@dataclass(frozen=True)
class StoryPackage:
    """The final assembly for one brief: story, verdicts, and all media."""

    brief: StoryBrief
    story: StoryDraft
    verdict_history: tuple[ReviewVerdict, ...]
    narration: MediaAsset
    segments: tuple[Segment, ...]
    manifest: dict

    def __post_init__(self) -> None:
        if len(self.segments) != len(self.story.paragraphs):
            raise ValueError(
                f"{len(self.segments)} segment(s) for "
                f"{len(self.story.paragraphs)} paragraph(s)"
            )
        if not self.verdict_history or not self.verdict_history[-1].is_appropriate:
            raise ValueError("a package requires a final appropriate verdict")
        if any(v.is_appropriate for v in self.verdict_history[:-1]):
            raise ValueError("only the final verdict may be appropriate")


def story_id_for(brief: StoryBrief) -> str:
    """Stable id derived from the brief content alone."""
    canonical = json.dumps(brief_to_dict(brief), sort_keys=True, separators=(",", ":"))
    return digest_of(canonical.encode("utf-8"))[:16]


def build_manifest(
    brief: StoryBrief,
    story: StoryDraft,
    verdicts: Sequence[ReviewVerdict],
    narration: MediaAsset,
    segments: Sequence[Segment],
    models: dict[str, str],
) -> dict:
    return {
        "story_id": story_id_for(brief),
        "style": brief.animation_style.value,
        "paragraphs": list(story.paragraphs),
        "narration": narration.to_dict(),
        "segments": [
            {
                "index": seg.index,
                "scene_prompt": seg.scene_guide.prompt,
                "composition": seg.music_guide.composition,
                "video_asset": seg.video.to_dict(),
                "music_asset": seg.music.to_dict(),
            }
            for seg in segments
        ],
        "verdicts": [
            {"round": i + 1, "is_appropriate": v.is_appropriate, "reasoning": v.reasoning}
            for i, v in enumerate(verdicts)
        ],
        "models": dict(models),
    }


def manifest_to_bytes(manifest: dict) -> bytes:
    """Canonical byte form; identical manifests serialize identically."""
    return (json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


class Pipeline:
    def __init__(
        self,
        agents: StoryAgents,
        *,
        functions: Sequence[ProppFunction] | None = None,
        max_review_rounds: int = 3,
        video_duration: float = 6.0,
        voice_reference: MediaAsset | None = None,
        max_workers: int = 4,
        on_stage: StageCallback | None = None,
        on_progress: ProgressCallback | None = None,
    ):
        self.agents = agents
        self.functions = list(functions) if functions is not None else None
        self.max_review_rounds = max_review_rounds
        self.video_duration = video_duration
        self.voice_reference = voice_reference
        self.max_workers = max_workers
        self._on_stage = on_stage
        self._on_progress = on_progress

    def run(self, brief: StoryBrief) -> StoryPackage:
        """Run the full pipeline; fails before any backend call on an
        invalid brief, and with the stage name and cause otherwise."""
        validate_brief(brief, self.functions)
        style = brief.animation_style

        with self._stage("writing"):
            draft = write_story(self.agents, brief, self.functions)
        with self._stage("reviewing"):
            story, verdicts = moderation_loop(self.agents, draft, self.max_review_rounds)

        paragraphs = story.paragraphs
        total = len(paragraphs)
        pool = ThreadPoolExecutor(max_workers=self.max_workers)
        try:
            narration_future: Future[MediaAsset] = pool.submit(
                narrate, self.agents, story, self.voice_reference
            )
            guides: list[SceneGuide] = []
            video_futures: list[Future[MediaAsset]] = []
            music_futures: list[Future[MediaAsset]] = []
            music_guides: list[MusicGuide] = []

            with self._stage("directing"):
                for index, paragraph in enumerate(paragraphs):
                    guide = direct_scene(self.agents, paragraph, style, guides)
                    music_guide = direct_music(self.agents, paragraph, index)
                    guides.append(guide)
                    music_guides.append(music_guide)
                    video_futures.append(pool.submit(self._render_video, guide))
                    music_futures.append(pool.submit(self._render_music, music_guide))
                    self._progress("directed", index + 1, total)

            with self._stage("rendering"):
                videos: list[MediaAsset] = []
                for index, future in enumerate(video_futures):
                    videos.append(future.result())
                    self._progress("videos", index + 1, total)
                music: list[MediaAsset] = []
                for index, future in enumerate(music_futures):
                    music.append(future.result())
                    self._progress("music", index + 1, total)
                narration = narration_future.result()
                self._progress("narration", 1, 1)
        except BaseException:
            pool.shutdown(wait=False, cancel_futures=True)
            raise
        pool.shutdown(wait=True)

        with self._stage("assembling"):
            segments = tuple(
                Segment(
                    index=i,
                    scene_guide=guides[i],
                    music_guide=music_guides[i],
                    video=videos[i],
                    music=music[i],
                )
                for i in range(total)
            )
            manifest = build_manifest(
                brief, story, verdicts, narration, segments, self.agents.models()
            )
            return StoryPackage(
                brief=brief,
                story=story,
                verdict_history=tuple(verdicts),
                narration=narration,
                segments=segments,
                manifest=manifest,
            )

    def _render_video(self, guide: SceneGuide) -> MediaAsset:
        binding = self.agents.binding("animator")
        request = VideoRequest(
            prompt=guide.prompt, style=guide.style, duration=self.video_duration
        )
        return binding.client.generate_video(binding.endpoint, request)

    def _render_music(self, guide: MusicGuide) -> MediaAsset:
        binding = self.agents.binding("musician")
        request = MusicRequest(composition=guide.composition, duration=self.video_duration)
        return binding.client.generate_music(binding.endpoint, request)

    @contextmanager
    def _stage(self, name: str):
        if self._on_stage is not None:
            self._on_stage(name)
        try:
            yield
        except PipelineStageError:
            raise
        except BaseException as exc:
            log.error("pipeline stage %s failed: %s", name, exc)
            raise PipelineStageError(name, exc) from exc

    def _progress(self, kind: str, done: int, total: int) -> None:
        if self._on_progress is not None:
            self._on_progress(kind, done, total)
