"""Per-trial verification records.

A TrialReport is the unit every check emits: two numbers, their gap,
the tolerance that judged them, and enough metadata to reproduce the
trial. Verdicts are computed here so all checks share one rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TrialReport:
    check_id: str
    kind: str  # "identity" or "inequality"
    lhs: float
    rhs: float
    abs_gap: float
    rel_gap: float
    atol: float
    rtol: float
    passed: bool
    n: int | None = None
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def to_row(self) -> dict:
        row = {
            "check_id": self.check_id,
            "kind": self.kind,
            "n": self.n,
            "seed": self.seed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "atol": self.atol,
            "rtol": self.rtol,
            "passed": self.passed,
        }
        row.update({f"p_{k}": v for k, v in sorted(self.params.items())})
        return row


def identity_report(check_id, lhs, rhs, *, atol=0.0, rtol=0.0, scale=None,
                    n=None, seed=None, params=None) -> TrialReport:
    """Two-sided comparison: |lhs - rhs| <= atol + rtol * scale.

    The default scale is max(|lhs|, |rhs|), so rtol is a relative gap
    bound; pass an explicit scale to normalize differently.
    """
    lhs = float(lhs)
    rhs = float(rhs)
    gap = abs(lhs - rhs)
    if scale is None:
        scale = max(abs(lhs), abs(rhs))
    rel = gap / scale if scale > 0 else gap
    passed = gap <= atol + rtol * scale
    return TrialReport(check_id, "identity", lhs, rhs, gap, rel,
                       atol, rtol, passed, n=n, seed=seed, params=params or {})


def inequality_report(check_id, lhs, rhs, *, atol=1e-9, rtol=1e-8,
                      n=None, seed=None, params=None) -> TrialReport:
    """One-sided comparison: lhs <= rhs + atol + rtol * |rhs|."""
    lhs = float(lhs)
    rhs = float(rhs)
    slack = rhs + atol + rtol * abs(rhs) - lhs
    gap = lhs - rhs
    rel = gap / abs(rhs) if rhs != 0 else gap
    return TrialReport(check_id, "inequality", lhs, rhs, gap, rel,
                       atol, rtol, slack >= 0.0, n=n, seed=seed, params=params or {})
