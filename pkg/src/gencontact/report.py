"""Residual reports: named max/mean residual rows with pass/fail flags."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

THREADS_ENV = "GENCONTACT_THREADS"


@dataclass
class CheckRow:
    name: str
    max_residual: float
    mean_residual: float
    argmax_point: Optional[List[float]]
    tolerance: Optional[float]  # None marks an informational probe

    @property
    def passed(self) -> Optional[bool]:
        if self.tolerance is None:
            return None
        return bool(self.max_residual < self.tolerance)

    def to_dict(self) -> dict:
        return {
            "condition": self.name,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "argmax_point": self.argmax_point,
            "pass": self.passed,
            "tolerance": self.tolerance,
        }


@dataclass
class ResidualReport:
    rows: List[CheckRow] = field(default_factory=list)

    def add(self, name: str, values: Sequence[float], points=None,
            tolerance: Optional[float] = None) -> CheckRow:
        vals = np.asarray([float(v) for v in values], dtype=float)
        if vals.size == 0:
            row = CheckRow(name, 0.0, 0.0, None, tolerance)
        else:
            k = int(np.argmax(vals))
            arg = None
            if points is not None:
                arg = [float(c) for c in np.asarray(points[k]).ravel()]
            row = CheckRow(name, float(vals[k]), float(vals.mean()), arg, tolerance)
        self.rows.append(row)
        return row

    def add_row(self, row: CheckRow) -> CheckRow:
        self.rows.append(row)
        return row

    def extend(self, other: "ResidualReport", prefix: str = "") -> "ResidualReport":
        for row in other.rows:
            self.rows.append(
                CheckRow(prefix + row.name, row.max_residual, row.mean_residual,
                         row.argmax_point, row.tolerance)
            )
        return self

    def __getitem__(self, name: str) -> CheckRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows if row.passed is not None)

    @property
    def max_residual(self) -> float:
        gated = [r.max_residual for r in self.rows if r.tolerance is not None]
        return max(gated) if gated else 0.0

    def to_dict(self) -> dict:
        return {"results": [r.to_dict() for r in self.rows], "pass": self.passed}

    def to_json(self, **extra) -> str:
        payload = dict(extra)
        payload.update(self.to_dict())
        return json.dumps(payload, indent=2, sort_keys=True)

    def summary(self) -> str:
        lines = []
        for r in self.rows:
            flag = "----" if r.passed is None else ("PASS" if r.passed else "FAIL")
            tol = "" if r.tolerance is None else f" (tol {r.tolerance:g})"
            lines.append(f"{flag}  {r.name}: max {r.max_residual:.3e}{tol}")
        return "\n".join(lines)


def map_points(fn: Callable, points: Iterable) -> list:
    """Apply fn over sample points, optionally on a bounded thread pool.

    Collection order follows the input order either way, so reports are
    deterministic for a fixed seed.
    """
    pts = list(points)
    workers = int(os.environ.get(THREADS_ENV, "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, pts))
    return [fn(p) for p in pts]
