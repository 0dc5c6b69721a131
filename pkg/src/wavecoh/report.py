"""Check records and verification reports."""

from __future__ import annotations

import csv
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import mpmath

from .scalars import format_scalar

SCHEMA_VERSION = "1.0"

PASS, FAIL, WARN = "pass", "fail", "warn"


@dataclass
class CheckResult:
    """Outcome of one verification.

    ``anchor`` names the identity being checked; ``residual`` and
    ``tolerance`` are plain floats so reports serialize cleanly.
    """

    name: str
    anchor: str
    status: str
    residual: float
    tolerance: float
    detail: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "residual": _float_str(self.residual),
            "tolerance": _float_str(self.tolerance),
            "detail": {k: _jsonable(v) for k, v in self.detail.items()},
        }
        if timings:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def make_check(name, anchor, residual, tolerance, detail=None, warn_above=None) -> CheckResult:
    """Status is pass if ``residual <= tolerance``; warn if ``<= warn_above``."""
    residual = float(residual)
    tolerance = float(tolerance)
    if residual <= tolerance:
        status = PASS
    elif warn_above is not None and residual <= float(warn_above):
        status = WARN
    else:
        status = FAIL
    return CheckResult(name, anchor, status, residual, tolerance, dict(detail or {}))


@contextmanager
def timed(records: list):
    """Stamp the wall time of every record appended inside the block."""
    start = time.perf_counter()
    n0 = len(records)
    yield
    elapsed = time.perf_counter() - start
    for rec in records[n0:]:
        rec.wall_time = elapsed / max(1, len(records) - n0)


def _float_str(x) -> str:
    return f"{float(x):.6e}"


def _jsonable(v):
    if isinstance(v, (str, bool, int)) or v is None:
        return v
    if isinstance(v, float):
        return _float_str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return format_scalar(v)
    return format_scalar(v)


@dataclass
class VerificationReport:
    config: dict
    spectral_data: list
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "spectral_data": self.spectral_data,
            "checks": [c.to_dict(timings) for c in self.checks],
            "ok": self.ok,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        cols = ["eig", "name", "anchor", "status", "residual", "tolerance"]
        if timings:
            cols.append("wall_time")
        writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for c in self.checks:
            row = c.to_dict(timings)
            row["eig"] = c.detail.get("eig", "")
            writer.writerow(row)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            eig = c.detail.get("eig", "")
            lines.append(f"[{c.status.upper():4}] eig={eig} {c.name}: "
                         f"residual={c.residual:.3e} tol={c.tolerance:.1e}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)
