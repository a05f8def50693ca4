"""Check records and deterministic CSV / JSON emission.

CSV bodies are byte-identical for identical configs: floats are written
with repr (shortest round-trip), the header line carries the version
stamp, and rows keep insertion order.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__


@dataclass
class CheckReport:
    """One verification record; pass iff the stated comparison holds."""

    check_id: str
    inputs: str
    computed: float
    reference: float
    metric: str  # ratio | slope | abs-err | bool | interval
    tolerance: str
    passed: bool
    runtime_s: float = 0.0
    note: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.check_id}: computed={_fmt(self.computed)} "
                f"reference={_fmt(self.reference)} ({self.metric}, tol {self.tolerance})"
                + (f" | {self.note}" if self.note else ""))


def _fmt(v: float) -> str:
    return repr(float(v)) if v == v else "nan"


class timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False


def write_csv(path: Path, header: list[str], rows: list[list], seed=None) -> None:
    """Comma-separated, '.' decimal, repr floats, version-stamped header."""
    lines = [f"# htwl {__version__}" + (f" seed={seed}" if seed is not None else "")]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def reports_to_rows(reports: list[CheckReport]) -> tuple[list[str], list[list]]:
    header = ["check_id", "inputs", "computed", "reference", "metric",
              "tolerance", "passed", "runtime_s", "note"]
    rows = [[r.check_id, r.inputs, r.computed, r.reference, r.metric,
             r.tolerance, r.passed, round(r.runtime_s, 3), r.note] for r in reports]
    return header, rows


def write_summary(path: Path, reports: list[CheckReport], meta: dict) -> None:
    payload = {
        "version": __version__,
        **meta,
        "n_pass": sum(r.passed for r in reports),
        "n_fail": sum(not r.passed for r in reports),
        "checks": [
            {
                "id": r.check_id,
                "inputs": r.inputs,
                "computed": r.computed,
                "reference": r.reference,
                "metric": r.metric,
                "tolerance": r.tolerance,
                "passed": r.passed,
                "runtime_s": round(r.runtime_s, 3),
                "note": r.note,
            }
            for r in reports
        ],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
