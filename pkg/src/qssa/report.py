"""Structured results for inequality checks.

Every check produces an InequalityReport. The `relation` field records the
claimed direction; `slack` is always the margin by which the claim holds
(rhs - lhs for "<=", lhs - rhs for ">="), so `passed` is recomputable from
the report's own numbers as slack >= -tol. Reports with status "skipped"
carry no verdict; "expected-violation" marks constructions that are meant
to violate a hypothetical bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional


def default_tol(lhs: float, rhs: float) -> float:
    """Scale-aware tolerance: entropies are O(ln dim), solver error ~1e-12*dim."""
    return 1e-8 * max(1.0, abs(lhs), abs(rhs))


@dataclass
class InequalityReport:
    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    slack: Optional[float]
    tol: float
    passed: bool
    status: str = "ok"
    relation: str = "<="
    seed: Optional[int] = None
    dims: Optional[tuple] = None
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        meta = dict(self.meta)
        meta["relation"] = self.relation
        return {
            "name": self.name,
            "seed": self.seed,
            "dims": list(self.dims) if self.dims is not None else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tol": self.tol,
            "pass": self.passed,
            "status": self.status,
            "meta": meta,
        }


def make_report(
    name: str,
    lhs: float,
    rhs: float,
    relation: str = "<=",
    tol: Optional[float] = None,
    status: str = "ok",
    seed: Optional[int] = None,
    dims=None,
    **meta,
) -> InequalityReport:
    if relation not in ("<=", ">="):
        raise ValueError(f"relation must be '<=' or '>=', got {relation!r}")
    lhs = float(lhs)
    rhs = float(rhs)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise ValueError(f"non-finite bounds lhs={lhs} rhs={rhs}; flag via skipped_report instead")
    slack = rhs - lhs if relation == "<=" else lhs - rhs
    if tol is None:
        tol = default_tol(lhs, rhs)
    passed = slack >= -tol
    if status == "expected-violation":
        passed = True
    return InequalityReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        tol=float(tol),
        passed=passed,
        status=status,
        relation=relation,
        seed=seed,
        dims=tuple(dims) if dims is not None else None,
        meta=meta,
    )


def skipped_report(name: str, reason: str, relation: str = "<=", seed=None, dims=None, **meta) -> InequalityReport:
    meta["reason"] = reason
    return InequalityReport(
        name=name,
        lhs=None,
        rhs=None,
        slack=None,
        tol=0.0,
        passed=True,
        status="skipped",
        relation=relation,
        seed=seed,
        dims=tuple(dims) if dims is not None else None,
        meta=meta,
    )
