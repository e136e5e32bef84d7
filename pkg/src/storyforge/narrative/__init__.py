from .brief import (
    assemble_writer_input,
    brief_from_dict,
    brief_to_dict,
    collect_issues,
    phase_input_from_dict,
    phase_input_to_dict,
    validate_brief,
    validate_phase_input,
)
from .catalog import catalog, default_catalog_path
from .model import (
    AGE_BAND,
    PHASES_IN_ORDER,
    AnimationStyle,
    CardAnswer,
    FreytagPhase,
    PhaseInput,
    ProppFunction,
    StoryBrief,
)

__all__ = [
    "AGE_BAND",
    "PHASES_IN_ORDER",
    "AnimationStyle",
    "CardAnswer",
    "FreytagPhase",
    "PhaseInput",
    "ProppFunction",
    "StoryBrief",
    "assemble_writer_input",
    "brief_from_dict",
    "brief_to_dict",
    "catalog",
    "collect_issues",
    "default_catalog_path",
    "phase_input_from_dict",
    "phase_input_to_dict",
    "validate_brief",
    "validate_phase_input",
]
