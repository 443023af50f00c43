"""Per-check records shared by the algebra, funcspace and calculus checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"

VERDICTS = (PASS, FAIL, INCONCLUSIVE, HYPOTHESIS_NOT_MET)


def summarize(value: Any) -> Any:
    """JSON-friendly rendering of points, nets and sampled functions."""
    from netcalc.net import Net

    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Net):
        return [summarize(v) for v in value.values]
    if hasattr(value, "label") and hasattr(value, "values"):
        return {"function": value.label}
    if isinstance(value, (tuple, list)):
        return [summarize(v) for v in value]
    if isinstance(value, dict):
        return {str(k): summarize(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((summarize(v) for v in value), key=repr)
    return repr(value)


@dataclass
class CheckRecord:
    check: str
    sample_id: str
    verdict: str
    lhs: Any = None
    rhs: Any = None
    residual: float | None = None
    witness: Any = None
    # "theorem" records are conclusion checks; see ExperimentReport.aggregate
    kind: str = "property"
    expected: str | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def conclusion_failure(self) -> bool:
        if self.kind == "theorem" and self.verdict == FAIL:
            return True
        # an unexpected inconclusive is not a refutation; it only propagates
        return (self.expected is not None and self.verdict != self.expected
                and self.verdict != INCONCLUSIVE)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "sample_id": self.sample_id,
            "verdict": self.verdict,
            "lhs": summarize(self.lhs),
            "rhs": summarize(self.rhs),
            "residual": self.residual,
            "witness": summarize(self.witness),
            "kind": self.kind,
            "expected": self.expected,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CheckRecord":
        return cls(**obj)


@dataclass
class CheckReport:
    check: str
    records: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        verdicts = {r.verdict for r in self.records}
        for v in (FAIL, HYPOTHESIS_NOT_MET, INCONCLUSIVE):
            if v in verdicts:
                return v
        return PASS

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)
