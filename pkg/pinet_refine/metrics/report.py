"""
Metric reports: one `MetricReport` per evaluated set, plus an optional
input-vs-refined comparison, rendered as JSON and as plain-text tables.
"""

import json
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import Field

from pinet_refine.base import BaseModel
from pinet_refine.exception import DataIOError
from pinet_refine.skeleton import DEFAULT_ROOT_INDEX, Pose, joint_names
from .errors import pa_mpjpe
from .pck import PCK_THRESHOLD_MM, root_aligned_errors

REPORT_FORMAT_VERSION = 1


class MetricReport(BaseModel):
    threshold_mm: float = PCK_THRESHOLD_MM
    pck: float = Field(ge=0, le=100, description="3DPCK at threshold_mm, percent")
    mpjpe: float = Field(ge=0, description="mm, after root alignment")
    pa_mpjpe: float = Field(ge=0, description="mm, after Procrustes alignment")
    per_joint_pck: list[float]
    joint_names: list[str]
    poses: int = Field(ge=0)
    joints_evaluated: int = Field(ge=0)


class MetricDelta(BaseModel):
    pck: float
    mpjpe: float
    pa_mpjpe: float


class EvaluationReport(BaseModel):
    format_version: int = REPORT_FORMAT_VERSION
    refined: MetricReport
    input: Optional[MetricReport] = None
    delta: Optional[MetricDelta] = None
    config: dict = Field(default_factory=dict)


def evaluate_poses(
    preds: Sequence[Pose],
    gts: Sequence[Pose],
    threshold: float = PCK_THRESHOLD_MM,
    root_index: int = DEFAULT_ROOT_INDEX,
) -> MetricReport:
    """All metrics over index-paired poses."""
    errors = root_aligned_errors(preds, gts, root_index)
    hits = errors <= threshold
    pa = [pa_mpjpe(p, g) for p, g in zip(preds, gts)]
    return MetricReport(
        threshold_mm=threshold,
        pck=float(100.0 * hits.mean()),
        mpjpe=float(errors.mean()),
        pa_mpjpe=float(np.mean(pa)),
        per_joint_pck=(100.0 * hits.mean(axis=0)).tolist(),
        joint_names=joint_names(errors.shape[1]),
        poses=len(preds),
        joints_evaluated=int(errors.size),
    )


def compare(refined: MetricReport, baseline: MetricReport) -> MetricDelta:
    """refined minus baseline"""
    return MetricDelta(
        pck=refined.pck - baseline.pck,
        mpjpe=refined.mpjpe - baseline.mpjpe,
        pa_mpjpe=refined.pa_mpjpe - baseline.pa_mpjpe,
    )


def format_table(header: list[str], rows: list[list[str]]) -> str:
    """Fixed-width text table; first column left-aligned, the rest right-aligned."""
    widths = [max(len(r[k]) for r in [header, *rows]) for k in range(len(header))]

    def fmt(r: list[str]) -> str:
        return "  ".join(c.rjust(w) if k else c.ljust(w) for k, (c, w) in enumerate(zip(r, widths)))

    lines = [fmt(header), "  ".join("-" * w for w in widths)]
    lines += [fmt(r) for r in rows]
    return "\n".join(lines)


def render_text(report: EvaluationReport) -> str:
    """Summary rows (input / refined / delta) followed by a joint-wise 3DPCK table."""
    summary: list[list[str]] = []
    sets = [("input", report.input), ("refined", report.refined)]
    for name, r in sets:
        if r is not None:
            summary.append([name, f"{r.pck:.2f}", f"{r.mpjpe:.2f}", f"{r.pa_mpjpe:.2f}", str(r.poses)])
    if report.delta is not None:
        d = report.delta
        summary.append(["delta", f"{d.pck:+.2f}", f"{d.mpjpe:+.2f}", f"{d.pa_mpjpe:+.2f}", ""])
    threshold = int(report.refined.threshold_mm)
    out = [
        format_table(["set", f"3DPCK@{threshold}mm", "MPJPE(mm)", "PA-MPJPE(mm)", "poses"], summary),
        "",
    ]

    header = ["joint"] + [name for name, r in sets if r is not None]
    rows = []
    for j, joint in enumerate(report.refined.joint_names):
        rows.append([joint] + [f"{r.per_joint_pck[j]:.1f}" for _, r in sets if r is not None])
    out.append(format_table(header, rows))
    return "\n".join(out) + "\n"


def write_report(out_dir: Union[str, Path], report: EvaluationReport) -> Path:
    """Writes report.json, report.txt and report.schema.json into `out_dir`."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(report.model_dump_json(indent=2), encoding="utf-8")
        (out_dir / "report.txt").write_text(render_text(report), encoding="utf-8")
        (out_dir / "report.schema.json").write_text(
            json.dumps(EvaluationReport.model_json_schema(), indent=2), encoding="utf-8"
        )
    except OSError as e:
        raise DataIOError(out_dir, str(e)) from e
    return out_dir / "report.json"


__all__ = [
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
