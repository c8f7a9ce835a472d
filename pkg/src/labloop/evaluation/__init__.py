from .metrics import (
    DIRECTIONS,
    SUCCESS_THRESHOLD_PCT,
    RunMetrics,
    TrialResult,
    aggregate_table,
    improvement_pct,
    similarity,
    success_rate,
)
from .scorecard import (
    DEFAULT_SCALE,
    DESIGN_CRITERIA,
    IDEA_CRITERIA,
    Scorecard,
    parse_scores,
    score_design,
    score_idea,
)
from .tables import (
    RECORDED_TABLES,
    load_recorded_table,
    recompute_averages,
    render_comparison_table,
    render_review_table,
    render_run_report,
)

__all__ = [
    "DIRECTIONS",
    "SUCCESS_THRESHOLD_PCT",
    "RunMetrics",
    "TrialResult",
    "aggregate_table",
    "improvement_pct",
    "similarity",
    "success_rate",
    "DEFAULT_SCALE",
    "DESIGN_CRITERIA",
    "IDEA_CRITERIA",
    "Scorecard",
    "parse_scores",
    "score_design",
    "score_idea",
    "RECORDED_TABLES",
    "load_recorded_table",
    "recompute_averages",
    "render_comparison_table",
    "render_review_table",
    "render_run_report",
]
