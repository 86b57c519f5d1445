from .alignment import SimilarityTransform, root_align, procrustes_align
from .errors import joint_errors, mpjpe, pa_mpjpe
from .pck import PCK_THRESHOLD_MM, pck3d, pck_per_joint, root_aligned_errors
from .report import (
    REPORT_FORMAT_VERSION,
    MetricReport,
    MetricDelta,
    EvaluationReport,
    evaluate_poses,
    compare,
    format_table,
    render_text,
    write_report,
)

__all__ = [
    "SimilarityTransform",
    "root_align",
    "procrustes_align",
    "joint_errors",
    "mpjpe",
    "pa_mpjpe",
    "PCK_THRESHOLD_MM",
    "pck3d",
    "pck_per_joint",
    "root_aligned_errors",
    "REPORT_FORMAT_VERSION",
    "MetricReport",
    "MetricDelta",
    "EvaluationReport",
    "evaluate_poses",
    "compare",
    "format_table",
    "render_text",
    "write_report",
]
