import json
import logging
from pathlib import Path
from typing import Optional, Union

from pinet_refine.exception import DataIOError, GradCheckFailedError
from pinet_refine.metrics import format_table
from pinet_refine.model import GradCheckCase, run_gradcheck
from pinet_refine.nn import GradCheckReport
from .base import BaseCommand

logger = logging.getLogger(__name__)

GRADCHECK_NAME = "gradcheck.json"


def summarize(reports: list[GradCheckReport]) -> dict[str, GradCheckReport]:
    """Worst report per component, in first-seen order."""
    worst: dict[str, GradCheckReport] = {}
    for report in reports:
        current = worst.get(report.component)
        if current is None or report.max_rel_error > current.max_rel_error:
            worst[report.component] = report
    return worst


def render_summary(worst: dict[str, GradCheckReport], tol: float) -> str:
    rows = [
        [
            name,
            f"{r.max_rel_error:.3e}",
            "ok" if r.passed(tol) else "FAIL",
            str(r.checked),
            str(r.skipped_kinks),
            r.worst_coordinate,
        ]
        for name, r in worst.items()
    ]
    header = ["component", "max rel err", "status", "checked", "kinks", "worst coordinate"]
    return format_table(header, rows) + "\n"


class GradCheckCommand(BaseCommand):
    name = "gradcheck"

    def run(
        self,
        out: Union[str, Path],
        cases: Optional[list[tuple[int, GradCheckCase]]] = None,
    ) -> int:
        """
        Check every hand-derived gradient against central differences

        Args:
            out: (str | Path) directory receiving gradcheck.json and resolved_config.yaml.
            cases: (Optional[list]) (seed, case) pairs replacing the built-in suite.

        Returns:
            int: 0 when every component stays below the tolerance.

        Raises:
            GradCheckFailedError: naming the worst component and coordinate.
        """
        settings = self.config.gradcheck
        reports = run_gradcheck(settings, cases)
        worst = summarize(reports)
        print(render_summary(worst, settings.tol), end="")

        out = Path(out)
        path = out / GRADCHECK_NAME
        try:
            out.mkdir(parents=True, exist_ok=True)
            payload = {"tol": settings.tol, "reports": [r.model_dump(mode="json") for r in reports]}
            path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            raise DataIOError(path, str(e)) from e
        self._write_resolved_config(out)

        failed = [r for r in worst.values() if not r.passed(settings.tol)]
        if failed:
            culprit = max(failed, key=lambda r: r.max_rel_error)
            raise GradCheckFailedError(culprit.component, culprit.worst_coordinate, culprit.max_rel_error)
        return 0


__all__ = [
    "GRADCHECK_NAME",
    "summarize",
    "render_summary",
    "GradCheckCommand",
]
