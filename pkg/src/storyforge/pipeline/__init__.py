from .prompts import (
    MOVIE_DIRECTOR_PROMPT,
    MUSIC_DIRECTOR_PROMPT,
    REVIEWER_PROMPT,
    REVIEWER_UPDATE_PROMPT,
    SYSTEM_PROMPTS,
    WRITER_PROMPT,
)
from .review import ReviewVerdict, parse_review_output, render_review_output
from .runner import (
    STAGES,
    Pipeline,
    Segment,
    StoryPackage,
    build_manifest,
    manifest_to_bytes,
    story_id_for,
)
from .stages import (
    AGENT_MODALITY,
    AGENT_NAMES,
    AgentBinding,
    MusicGuide,
    SceneGuide,
    StoryAgents,
    StoryDraft,
    direct_music,
    direct_scene,
    moderation_loop,
    narrate,
    normalize_composition,
    review_story,
    revise_story,
    split_paragraphs,
    write_story,
)

__all__ = [
    "AGENT_MODALITY",
    "AGENT_NAMES",
    "AgentBinding",
    "MOVIE_DIRECTOR_PROMPT",
    "MUSIC_DIRECTOR_PROMPT",
    "MusicGuide",
    "Pipeline",
    "REVIEWER_PROMPT",
    "REVIEWER_UPDATE_PROMPT",
    "ReviewVerdict",
    "STAGES",
    "SYSTEM_PROMPTS",
    "SceneGuide",
    "Segment",
    "StoryAgents",
    "StoryDraft",
    "StoryPackage",
    "WRITER_PROMPT",
    "build_manifest",
    "direct_music",
    "direct_scene",
    "manifest_to_bytes",
    "moderation_loop",
    "narrate",
    "normalize_composition",
    "parse_review_output",
    "render_review_output",
    "review_story",
    "revise_story",
    "split_paragraphs",
    "story_id_for",
    "write_story",
]
