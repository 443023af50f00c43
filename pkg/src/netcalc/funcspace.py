"""Grid-sampled function spaces, evaluation maps and the main interchange check."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from netcalc.algebra import (
    MODES,
    UNIFORM,
    NetSpaceTopology,
    PartialLimitAlgebra,
    check_lim_continuity,
    check_morphism,
    check_transposition_property,
)
from netcalc.errors import DomainError, MalformedInputError, PreconditionError, SoundnessError
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
    DEFAULT_TOLERANCE,
    Grid,
    LimitOutcome,
    MetricSpace,
    grid_space,
    limit,
    metric_space,
    sup_space,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampledFunction:
    grid: Grid
    values: tuple
    label: str = "f"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.grid):
            raise MalformedInputError(
                f"{self.label}: {len(self.values)} values for a grid of {len(self.grid)}"
            )

    @classmethod
    def sample(cls, grid: Grid, fn: Callable[[float], Any], label: str = "f") -> "SampledFunction":
        return cls(grid, tuple(fn(x) for x in grid.points), label)

    def __call__(self, x: float) -> Any:
        return self.values[self.grid.index_of(x)]


def ev(f: SampledFunction, x: float) -> Any:
    """Table read; off-grid points are a domain error (no interpolation)."""
    try:
        return f(x)
    except DomainError:
        raise DomainError(f"{x!r} is not on the grid of {f.label}") from None


def ev_at(x: float) -> Callable[[SampledFunction], Any]:
    """Evaluation at a fixed point, as a map on functions."""
    return lambda f: ev(f, x)


def ev_of(f: SampledFunction) -> Callable[[float], Any]:
    """Co-evaluation: the function itself, as a map on points."""
    return lambda x: ev(f, x)


class FunctionSpace:
    """Functions on ``grid`` into ``codomain`` with pointwise or uniform convergence."""

    def __init__(self, grid: Grid, codomain: MetricSpace | None = None, mode: str = UNIFORM):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.grid = grid
        self.codomain = codomain if codomain is not None else metric_space("line")
        self.mode = mode

    # sup over a grid dominates every coordinate, and pointwise is itself
    dominates_pointwise = True

    def distance(self, f: SampledFunction, g: SampledFunction) -> float:
        return max(self.codomain.distance(a, b) for a, b in zip(f.values, g.values))

    def coordinate_distance(self, f: SampledFunction, g: SampledFunction, x: float) -> float:
        return self.codomain.distance(ev(f, x), ev(g, x))

    def contains(self, f: Any) -> bool:
        return isinstance(f, SampledFunction) and f.grid == self.grid

    def __repr__(self) -> str:
        return f"FunctionSpace({self.grid!r}, {self.codomain.name}, {self.mode!r})"


def coordinate_net(S: Net, x: float) -> Net:
    return map_net(ev_at(x), S)


def _check_net(FS: FunctionSpace, S: Net) -> None:
    for d, f in S.items():
        if not FS.contains(f):
            raise PreconditionError(f"function at index {d!r} is not on the space grid")


def limit_of_function_net(FS: FunctionSpace, S: Net,
                          budget: int = DEFAULT_BUDGET) -> LimitOutcome:
    _check_net(FS, S)
    if FS.mode == UNIFORM:
        out = limit(sup_space(FS.codomain), S, budget)
        if not out.converged:
            return out
        f = out.point
        return LimitOutcome.hit(SampledFunction(FS.grid, f.values, f"lim {f.label}"),
                                out.residual)
    values, residual = [], 0.0
    for x in FS.grid.points:
        out = limit(FS.codomain, coordinate_net(S, x), budget)
        if not out.converged:
            return LimitOutcome.miss(f"coordinate {x!r} does not converge: {out.reason}",
                                     {"coordinate": x, "detail": out.witness})
        values.append(out.point)
        residual = max(residual, out.residual)
    label = S.values[0].label if S.values else "f"
    return LimitOutcome.hit(SampledFunction(FS.grid, tuple(values), f"lim {label}"), residual)


class _LimitFunction:
    """Lazily evaluated limit of a function net.

    Uniform mode needs the whole limit up front; pointwise mode only ever
    looks at the coordinates it is asked about.
    """

    def __init__(self, FS: FunctionSpace, S: Net, budget: int):
        self.FS, self.S, self.budget = FS, S, budget
        self._coords: dict = {}
        self.whole = limit_of_function_net(FS, S, budget) if FS.mode == UNIFORM else None

    def at(self, x: float) -> LimitOutcome:
        if self.whole is not None:
            if not self.whole.converged:
                return self.whole
            return LimitOutcome.hit(ev(self.whole.point, x), self.whole.residual)
        if x not in self._coords:
            self._coords[x] = limit(self.FS.codomain, coordinate_net(self.S, x), self.budget)
        return self._coords[x]


def check_pointwise_lemma(FS: FunctionSpace, S: Net, N: Net, budget: int = DEFAULT_BUDGET,
                          tol: float = DEFAULT_TOLERANCE, sample_id: str = "sample-0"
                          ) -> CheckReport:
    """Limit over the function index of ``f_delta(N)`` against ``(lim f_delta)(N)``.

    Only the coordinates visited by ``N`` are needed in pointwise mode.
    """
    _check_net(FS, S)
    report = CheckReport("pointwise-lemma")
    f = _LimitFunction(FS, S, budget)
    lhs, rhs, gap, slack = [], [], 0.0, tol
    for rho, x in N.items():
        left = limit(FS.codomain, coordinate_net(S, x), budget)
        right = f.at(x)
        if not (left.converged and right.converged):
            report.records.append(CheckRecord(
                "pointwise-lemma", sample_id, INCONCLUSIVE,
                witness={"index": rho, "point": x, "lhs": left.reason, "rhs": right.reason}))
            return report
        lhs.append(left.point)
        rhs.append(right.point)
        g = FS.codomain.distance(left.point, right.point)
        if g > tol + left.residual + right.residual:
            report.records.append(CheckRecord(
                "pointwise-lemma", sample_id, FAIL, lhs=lhs, rhs=rhs, residual=g,
                witness={"index": rho, "point": x}))
            return report
        gap, slack = max(gap, g), max(slack, tol + left.residual + right.residual)
    report.records.append(CheckRecord("pointwise-lemma", sample_id, PASS, lhs=lhs, rhs=rhs,
                                      residual=gap))
    return report


def evaluation_matrix(S: Net, N: Net) -> NetMatrix:
    """Entries ``f_delta(x_rho)``: rows follow ``N``, columns follow ``S``."""
    return NetMatrix.from_function(N.index, S.index, lambda rho, delta: ev(S(delta), N(rho)))


@dataclass
class _Context:
    FS: FunctionSpace
    S: Net
    A1: PartialLimitAlgebra
    A2: PartialLimitAlgebra
    TT2: NetSpaceTopology
    f: _LimitFunction
    budget: int
    tol: float


def check_main_theorem(FS: FunctionSpace, S: Net, battery: Sequence[Net],
                       budget: int = DEFAULT_BUDGET, tol: float = DEFAULT_TOLERANCE,
                       strict: bool = True, sample_ids: Sequence[str] | None = None,
                       domain_scale: float | None = None) -> CheckReport:
    """Continuity of the limit of a net of continuous sampled functions.

    For each battery net ``N`` over the grid the hypotheses are checked in
    order (transposition of the evaluation matrix, pointwise dominance,
    continuity of the members and of the evaluations, continuity of the
    codomain limit map) and only then is ``lim f(N) = f(lim N)`` tested.
    """
    _check_net(FS, S)
    ids = [f"net-{i}" for i in range(len(battery))] if sample_ids is None else list(sample_ids)
    A1 = PartialLimitAlgebra(grid_space(FS.grid, domain_scale or FS.codomain.scale), budget)
    A2 = PartialLimitAlgebra(FS.codomain, budget)
    ctx = _Context(FS, S, A1, A2, NetSpaceTopology(FS.mode, A2), _LimitFunction(FS, S, budget),
                   budget, tol)
    report = CheckReport("main-theorem")
    for sid, N in zip(ids, battery):
        record = _main_theorem_one(ctx, sid, N)
        report.records.append(record)
        if record.verdict == FAIL:
            log.error("conclusion failed with hypotheses met: %s", sid)
            if strict:
                raise SoundnessError(record)
    return report


def _members_continuous(ctx: _Context, N: Net) -> dict | None:
    """Every member commutes with the limit of ``N``."""
    for delta, fd in ctx.S.items():
        rep = check_morphism(ev_of(fd), ctx.A1, ctx.A2, [N], ctx.tol)
        if not rep.passed:
            bad = next(r for r in rep if r.verdict != PASS)
            return {"stage": "continuity", "reason": f"member {delta!r} is not continuous",
                    "detail": bad.witness}
    return None


def _main_theorem_one(ctx: _Context, sid: str, N: Net) -> CheckRecord:
    def hyp(witness: dict, verdict: str = HYPOTHESIS_NOT_MET) -> CheckRecord:
        return CheckRecord("main-theorem", sid, verdict, witness=witness, kind="theorem")

    if ctx.f.whole is not None and not ctx.f.whole.converged:
        return hyp({"stage": "function-limit",
                    "reason": f"function net does not converge in {ctx.FS.mode} mode",
                    "detail": ctx.f.whole.reason})
    source = ctx.A1.lim(N)
    if not source.converged:
        return hyp({"stage": "battery", "reason": "battery net does not converge in the domain",
                    "detail": source.reason})
    S_ev = evaluation_matrix(ctx.S, N)

    trans = check_transposition_property(ctx.TT2, [S_ev], ctx.budget, ctx.tol).records[0]
    if trans.verdict != PASS:
        witness = {"stage": "transposition", "verdict": trans.verdict, "detail": trans.witness}
        row = (trans.witness or {}).get("row")
        if row is not None:
            witness["point"] = N(row)
            witness["discrepancy"] = trans.witness["iterated"]["gap"]
        return hyp(witness)

    if not (ctx.FS.dominates_pointwise and ctx.TT2.dominates_pointwise):
        return hyp({"stage": "pointwise-dominance"})

    members = _members_continuous(ctx, N)
    if members is not None:
        return hyp(members)
    for x in sorted(set(N.values) | {source.point}):
        coord = limit(ctx.FS.codomain, coordinate_net(ctx.S, x), ctx.budget)
        at = ctx.f.at(x)
        if not (coord.converged and at.converged):
            return hyp({"stage": "evaluation-continuity", "point": x,
                        "reason": coord.reason or at.reason}, INCONCLUSIVE)
        if not ctx.A2.agree(coord.point, at.point, ctx.tol + coord.residual + at.residual):
            return hyp({"stage": "evaluation-continuity", "point": x,
                        "gap": ctx.A2.distance(coord.point, at.point)})

    limcont = check_lim_continuity(ctx.A2, ctx.TT2, [S_ev], ctx.budget, ctx.tol).records[0]
    if limcont.verdict != PASS:
        verdict = INCONCLUSIVE if limcont.verdict == INCONCLUSIVE else HYPOTHESIS_NOT_MET
        return hyp({"stage": "lim-continuity", "verdict": limcont.verdict,
                    "detail": limcont.witness}, verdict)

    image = [ctx.f.at(x) for x in N.values]
    at_limit = ctx.f.at(source.point)
    if not all(o.converged for o in image) or not at_limit.converged:
        return hyp({"stage": "limit-function", "reason": "limit function undetected"},
                   INCONCLUSIVE)
    lhs = ctx.A2.lim(Net(N.index, tuple(o.point for o in image)))
    if not lhs.converged:
        return hyp({"stage": "conclusion", "reason": lhs.reason}, INCONCLUSIVE)
    rhs = at_limit.point
    gap = ctx.A2.distance(lhs.point, rhs)
    slack = ctx.tol + lhs.residual + at_limit.residual + max(o.residual for o in image)
    ok = ctx.A2.agree(lhs.point, rhs, slack)
    return CheckRecord("main-theorem", sid, PASS if ok else FAIL, lhs=lhs.point, rhs=rhs,
                       residual=gap, kind="theorem",
                       witness={"domain_limit": source.point,
                                "iterated_gap": trans.residual})
