"""Run reports and their CSV / JSON-lines serialisation.

CSV: a header row with the report's column list, then one row per record.
Floats are written with 17 significant digits, booleans as ``true``/``false``,
missing values as empty fields and nested values as compact JSON.

JSON: JSON lines.  The first line is the report header (``kind``, ``config``,
``columns``, ``aggregates``, ``costs``, ``wall_clock``, ``trials``); every
following line is one record.  :func:`read_report` inverts :func:`emit_report`.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Any, Optional, TextIO

__all__ = ["RunReport", "emit_report", "read_report", "render", "wilson_interval", "format_value"]


def wilson_interval(successes: int, total: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; ``(0, 1)`` when ``total == 0``."""
    if total == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + level / 2)
    phat = successes / total
    denom = 1 + z * z / total
    centre = (phat + z * z / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == total else min(1.0, centre + half)
    return lo, hi


@dataclass
class RunReport:
    kind: str
    config: dict
    columns: list[str]
    records: list[dict] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    costs: dict = field(default_factory=dict)
    wall_clock: Optional[float] = None

    def __post_init__(self):
        for rec in self.records:
            if list(rec) != self.columns:
                raise ValueError(f"record keys {list(rec)} differ from columns {self.columns}")

    @property
    def trials(self) -> int:
        return len(self.records)

    def header(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config,
            "columns": self.columns,
            "aggregates": self.aggregates,
            "costs": self.costs,
            "wall_clock": self.wall_clock,
            "trials": self.trials,
        }


def format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def render(report: RunReport, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.columns)
        for rec in report.records:
            writer.writerow([format_value(rec[c]) for c in report.columns])
        return buf.getvalue()
    if fmt == "json":
        lines = [json.dumps(report.header(), allow_nan=False)]
        lines.extend(json.dumps(rec, allow_nan=False) for rec in report.records)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report: RunReport, fmt: str, out: Optional[TextIO | str] = None) -> str:
    """Serialise ``report``; write it to ``out`` (a path or a stream) when given."""
    text = render(report, fmt)
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif out is not None:
        out.write(text)
    return text


def read_report(text: str) -> RunReport:
    """Parse the JSON-lines form back into a :class:`RunReport`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = json.loads(lines[0])
    records = [json.loads(ln) for ln in lines[1:]]
    if len(records) != head["trials"]:
        raise ValueError("record count does not match the header")
    return RunReport(
        kind=head["kind"],
        config=head["config"],
        columns=head["columns"],
        records=records,
        aggregates=head["aggregates"],
        costs=head["costs"],
        wall_clock=head["wall_clock"],
    )
