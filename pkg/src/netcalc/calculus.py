"""Difference quotients on grids, numeric derivatives, and the derivative interchange check."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

from netcalc.algebra import (
    NetSpaceTopology,
    PartialLimitAlgebra,
    check_lim_continuity,
)
from netcalc.directed import TruncatedNaturals
from netcalc.errors import DomainError, PreconditionError, SoundnessError
from netcalc.funcspace import FunctionSpace, SampledFunction, _LimitFunction, ev
from netcalc.net import Net, NetMatrix, map_net
from netcalc.report import (
    FAIL,
    HYPOTHESIS_NOT_MET,
    INCONCLUSIVE,
    PASS,
    CheckRecord,
    CheckReport,
)
from netcalc.space import (
    DEFAULT_BUDGET,
    Grid,
    LimitOutcome,
    limit,
    metric_space,
    tail_diameter,
)

log = logging.getLogger(__name__)

# Increments go down from h * 2**MAX_EXP to a single grid step h.
MAX_EXP = 6
DIFF_TOLERANCE = 1e-3


def _quotient(a: Any, b: Any, x: float) -> Any:
    if isinstance(a, tuple):
        return tuple((u - v) / x for u, v in zip(a, b))
    return (a - b) / x


def difference_quotient(f: SampledFunction, p: float, x: float) -> Any:
    """``(f(p + x) - f(p)) / x``, coordinatewise for vector values."""
    if x == 0:
        raise DomainError("zero increment")
    return _quotient(ev(f, p + x), ev(f, p), x)


@dataclass(frozen=True)
class QuotientNet:
    """Quotients of ``f`` at anchor ``p`` along the increment net ``increments``."""

    f: SampledFunction
    p: float
    increments: Net

    def __post_init__(self) -> None:
        for rho, x in self.increments.items():
            if x == 0 or not self.f.grid.contains(self.p + x):
                raise DomainError(f"increment {x!r} at index {rho!r} leaves the grid")

    @property
    def values(self) -> Net:
        return map_net(lambda x: difference_quotient(self.f, self.p, x), self.increments)


def increment_net(grid: Grid, p: float, two_sided: bool = False) -> Net:
    """Grid-aligned increments ``h * 2**(K - rho)`` shrinking to one step.

    One-sided nets go forward unless there is no room to the right of
    ``p``; two-sided nets alternate sign with the same magnitudes.
    """
    h = grid.step
    i = grid.index_of(p)
    ahead, behind = grid.resolution - 1 - i, i
    if two_sided:
        room, sign = min(ahead, behind), 1
    else:
        room, sign = (ahead, 1) if ahead >= 1 else (behind, -1)
    if room < 1:
        raise DomainError(f"no room for increments at {p!r}")
    K = min(MAX_EXP, int(math.floor(math.log2(room))))
    if two_sided:
        return Net.from_function(TruncatedNaturals(2 * (K + 1)),
                                 lambda r: (-1) ** r * h * 2 ** (K - r // 2))
    return Net.from_function(TruncatedNaturals(K + 1), lambda r: sign * h * 2 ** (K - r))


def _line_for(value: Any):
    return metric_space(f"r^n:{len(value)}" if isinstance(value, tuple) else "line")


def differentiate(f: SampledFunction, p: float, N: Net | None = None,
                  budget: int = DEFAULT_BUDGET, space=None) -> LimitOutcome:
    """Limit of the quotient net at ``p``; a forward increment net by default."""
    N = increment_net(f.grid, p) if N is None else N
    Q = QuotientNet(f, p, N).values
    return limit(space or _line_for(Q.values[0]), Q, budget)


def numeric_derivative(f: SampledFunction) -> SampledFunction:
    """Finest forward quotients, backward at the right end."""
    h, v = f.grid.step, f.values
    n = len(v)
    out = [_quotient(v[i + 1], v[i], h) for i in range(n - 1)]
    out.append(_quotient(v[n - 1], v[n - 2], h))
    return SampledFunction(f.grid, tuple(out), f"d/dx {f.label}")


def _derivative_from(values_at, grid: Grid, p: float) -> LimitOutcome:
    """Finest quotient at ``p`` of a function known only through ``values_at``."""
    i = grid.index_of(p)
    j, k = (i, i + 1) if i + 1 < grid.resolution else (i - 1, i)
    a, b = values_at(grid.points[k]), values_at(grid.points[j])
    if not (a.converged and b.converged):
        return a if not a.converged else b
    return LimitOutcome.hit(_quotient(a.point, b.point, grid.step), max(a.residual, b.residual))


def quotient_matrix(S: Net, p: float, N: Net) -> NetMatrix:
    """Entries ``g_{delta,p}(x_rho)``: rows follow the increments, columns follow ``S``."""
    return NetMatrix.from_function(
        N.index, S.index, lambda rho, delta: difference_quotient(S(delta), p, N(rho)))


def check_diff_theorem(S: Net, mode: str, anchors: Sequence[float], *,
                       budget: int = DEFAULT_BUDGET, tol: float = DIFF_TOLERANCE,
                       kinks: Sequence[float] = (), strict: bool = True,
                       codomain=None) -> CheckReport:
    """Derivative of the limit against the limit of the derivatives, per anchor.

    Hypotheses, in order: pointwise dominance, convergence of the
    derivative net, differentiability of every member at the anchor, and
    continuity of the codomain limit map on the quotient matrix.  Every
    hypothesis witness carries the derivative-net tail diameter.
    """
    grid = S.values[0].grid
    for p in anchors:
        if any(abs(p - k) <= grid.step / 2 for k in kinks):
            raise PreconditionError(f"anchor {p!r} is a declared kink")
    FS = FunctionSpace(grid, codomain, mode)
    A = PartialLimitAlgebra(FS.codomain, budget)
    TT = NetSpaceTopology(mode, A)
    derivs = map_net(numeric_derivative, S)
    dlim = _LimitFunction(FS, derivs, budget)
    flim = _LimitFunction(FS, S, budget)
    report = CheckReport("diff-theorem")
    for p in anchors:
        sid = f"anchor-{p:.6g}"
        record = _diff_one(sid, S, p, FS, A, TT, derivs, dlim, flim, budget, tol)
        report.records.append(record)
        if record.verdict == FAIL:
            log.error("conclusion failed with hypotheses met: %s", sid)
            if strict:
                raise SoundnessError(record)
    return report


def _diff_one(sid, S, p, FS, A, TT, derivs, dlim, flim, budget, tol) -> CheckRecord:
    D_p = map_net(lambda g: ev(g, p), derivs)
    diameter = tail_diameter(FS.codomain, D_p)

    def hyp(witness: dict, verdict: str = HYPOTHESIS_NOT_MET) -> CheckRecord:
        witness["derivative_tail_diameter"] = diameter
        return CheckRecord("diff-theorem", sid, verdict, witness=witness, kind="theorem")

    if not (FS.dominates_pointwise and TT.dominates_pointwise):
        return hyp({"stage": "pointwise-dominance"})
    lhs = dlim.at(p)
    if not lhs.converged:
        return hyp({"stage": "derivative-net",
                    "reason": "lim continuity inapplicable: inner nets diverge",
                    "detail": lhs.reason})
    N = increment_net(FS.grid, p)
    for delta, f in S.items():
        out = differentiate(f, p, N, budget, FS.codomain)
        if not out.converged:
            return hyp({"stage": "differentiability", "member": delta, "detail": out.reason})
    limcont = check_lim_continuity(A, TT, [quotient_matrix(S, p, N)], budget, tol).records[0]
    if limcont.verdict != PASS:
        verdict = INCONCLUSIVE if limcont.verdict == INCONCLUSIVE else HYPOTHESIS_NOT_MET
        return hyp({"stage": "lim-continuity", "verdict": limcont.verdict,
                    "detail": limcont.witness}, verdict)
    rhs = _derivative_from(flim.at, FS.grid, p)
    if not rhs.converged:
        return hyp({"stage": "function-limit", "detail": rhs.reason}, INCONCLUSIVE)
    gap = A.distance(lhs.point, rhs.point)
    ok = A.agree(lhs.point, rhs.point, tol + lhs.residual + rhs.residual)
    return CheckRecord("diff-theorem", sid, PASS if ok else FAIL, lhs=lhs.point, rhs=rhs.point,
                       residual=gap, kind="theorem",
                       witness={"anchor": p, "derivative_tail_diameter": diameter})
