"""engine.report

Report documents of a run.

A report is JSON-serializable so it can be exported, cached and re-run
later: the embedded config reproduces it. Top-level keys are fixed:
config, results, failures, timing, version.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from time import perf_counter
from typing import Any, Dict, Iterator, List, Mapping, Optional

import numpy as np
import scipy

from core import API_VERSION

REPORT_KEYS = ("config", "results", "failures", "timing", "version")
VOLATILE_KEYS = ("timing",)


def to_jsonable(x: Any) -> Any:
    """Plain JSON types; complex -> [re, im], non-finite floats -> strings."""
    if hasattr(x, "to_dict") and callable(x.to_dict):
        return to_jsonable(x.to_dict())
    if isinstance(x, Mapping):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, np.generic):
        return to_jsonable(x.item())
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, complex):
        return [to_jsonable(x.real), to_jsonable(x.imag)]
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    return str(x)


def library_versions() -> Dict[str, str]:
    return {"odba": API_VERSION, "numpy": np.__version__, "scipy": scipy.__version__}


@dataclass
class StageTimer:
    """Collects (stage, status, elapsed_s) records for the report's timing block."""

    records: List[Dict[str, Any]] = field(default_factory=list)

    def stage(self, name: str) -> "_Stage":
        return _Stage(self, name)

    @property
    def total(self) -> float:
        return float(sum(r["elapsed_s"] for r in self.records))

    def to_dict(self) -> Dict[str, Any]:
        return {"stages": list(self.records), "total_s": self.total}


class _Stage:
    def __init__(self, timer: StageTimer, name: str) -> None:
        self.timer = timer
        self.name = name
        self.t0 = 0.0

    def __enter__(self) -> "_Stage":
        self.t0 = perf_counter()
        return self

    def __exit__(self, exc_type: Any, exc: Any, tb: Any) -> bool:
        self.timer.records.append({
            "stage": self.name,
            "status": "ok" if exc_type is None else "error",
            "elapsed_s": perf_counter() - self.t0,
        })
        return False


def make_report(
    *,
    config: Mapping[str, Any],
    results: Mapping[str, Any],
    failures: List[Dict[str, Any]],
    timing: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    return to_jsonable({
        "config": dict(config),
        "results": dict(results),
        "failures": list(failures),
        "timing": dict(timing or {}),
        "version": library_versions(),
    })


def dumps_report(obj: Mapping[str, Any]) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True)


def strip_volatile(obj: Mapping[str, Any]) -> Dict[str, Any]:
    """Report without wall-clock data, for comparing uncached runs."""
    return {k: v for k, v in obj.items() if k not in VOLATILE_KEYS}


def _flat_cell(v: Any) -> Any:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        re_, im_ = v
        return f"{re_!r}" if im_ == 0 else f"{re_!r}{im_:+}j"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return v


def iter_table(obj: Mapping[str, Any]) -> Iterator[Dict[str, Any]]:
    for row in (obj.get("results") or {}).get("table") or []:
        yield {str(k): _flat_cell(v) for k, v in row.items()}


def report_to_csv(obj: Mapping[str, Any]) -> str:
    """The run's main table (results.table), one row per record."""
    rows = list(iter_table(obj))
    columns: List[str] = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
