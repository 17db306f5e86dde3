"""Evaluation: DTW, success metrics, experiment reports and embedding analysis"""

from retrofit_prae.evalkit.analysis import ClusterStats, EmbeddingAnalysis, analyze_embeddings, cluster_stats, nearest_groups
from retrofit_prae.evalkit.dtw import SequenceError, dtw, warping_path
from retrofit_prae.evalkit.evaluate import (
    Aggregate,
    ConfigCompatibilityError,
    EvalConfig,
    EvalMode,
    EvalReport,
    check_compatibility,
    evaluate,
)
from retrofit_prae.evalkit.metrics import (
    TaskThresholds,
    description_success,
    speed_success,
    speed_threshold,
    task_success,
)
from retrofit_prae.evalkit.report import compare_reports, report_tables, rich_table, write_report, write_rows
from retrofit_prae.evalkit.svg import SvgRenderer, word_colors, write_svg

__all__ = [
    "ClusterStats",
    "EmbeddingAnalysis",
    "analyze_embeddings",
    "cluster_stats",
    "nearest_groups",
    "SequenceError",
    "dtw",
    "warping_path",
    "Aggregate",
    "ConfigCompatibilityError",
    "EvalConfig",
    "EvalMode",
    "EvalReport",
    "check_compatibility",
    "evaluate",
    "TaskThresholds",
    "description_success",
    "speed_success",
    "speed_threshold",
    "task_success",
    "compare_reports",
    "report_tables",
    "rich_table",
    "write_report",
    "write_rows",
    "SvgRenderer",
    "word_colors",
    "write_svg",
]
