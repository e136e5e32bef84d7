from .records import (
    LABELS,
    MODERATION_HEADER,
    SCORE_HEADER,
    ModerationRecord,
    ScoreDataError,
    ScoreRecord,
    load_moderation,
    load_scores,
)
from .report import Report, ReportSpec, build_report
from .rubrics import (
    MODALITIES,
    SCORE_VALUES,
    Criterion,
    Rubric,
    known_criteria,
    load_all_rubrics,
    load_rubric,
)
from .stats import (
    Granularity,
    PairwiseRates,
    as_percent,
    criterion_means,
    false_positive_rate,
    pairwise_rates,
    round2,
    subjects_in,
)

__all__ = [
    "Criterion",
    "Granularity",
    "LABELS",
    "MODALITIES",
    "MODERATION_HEADER",
    "ModerationRecord",
    "PairwiseRates",
    "Report",
    "ReportSpec",
    "Rubric",
    "SCORE_HEADER",
    "SCORE_VALUES",
    "ScoreDataError",
    "ScoreRecord",
    "as_percent",
    "build_report",
    "criterion_means",
    "false_positive_rate",
    "known_criteria",
    "load_all_rubrics",
    "load_moderation",
    "load_rubric",
    "load_scores",
    "pairwise_rates",
    "round2",
    "subjects_in",
]
