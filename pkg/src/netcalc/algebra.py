"""Limit algebras, net-space topologies and the interchange checks.

A ``PartialLimitAlgebra`` packages a Hausdorff space with its converging
nets and the limit map.  A ``NetSpaceTopology`` is one of the two concrete
convergence structures on nets used throughout: ``pointwise`` (a net of
nets converges iff every coordinate does) and ``uniform`` (sup distance over
the inner index).

Every check returns a ``CheckReport`` of per-sample ``CheckRecord``s.
Verdicts are ``pass``, ``fail``, ``inconclusive`` (a needed limit was not
detected at the budget) and ``hypothesis-not-met``.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Iterable, Sequence

from netcalc.directed import DirectedSet, TruncatedNaturals
from netcalc.errors import PreconditionError, SeparationError, SoundnessError
from netcalc.net import Net, NetMatrix, map_matrix, map_net
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
    FiniteTopology,
    LimitOutcome,
    MetricSpace,
    is_hausdorff,
    limit,
    sup_space,
)

log = logging.getLogger(__name__)

POINTWISE = "pointwise"
UNIFORM = "uniform"
MODES = (POINTWISE, UNIFORM)

# An outer limit over a partially settled net of inner limits is only
# attempted on a prefix of at least this many indices.
MIN_SETTLED = 4


class PartialLimitAlgebra:
    """A Hausdorff space together with its converging nets and ``lim``."""

    def __init__(self, space: Any, budget: int = DEFAULT_BUDGET, samples: Iterable[Net] = ()):
        report = is_hausdorff(space)
        if not report.hausdorff:
            raise SeparationError(f"space is not Hausdorff: {report.witness!r} cannot be separated")
        self.space = space
        self.budget = budget
        self.samples = tuple(samples)
        self._cache: dict = {}

    def lim(self, S: Net, budget: int | None = None) -> LimitOutcome:
        budget = self.budget if budget is None else budget
        try:
            key = (S, budget)
            hash(key)
        except TypeError:
            return limit(self.space, S, budget)
        if key not in self._cache:
            self._cache[key] = limit(self.space, S, budget)
        return self._cache[key]

    def contains(self, S: Net) -> bool:
        """Membership in the converging-net class."""
        return self.lim(S).converged

    def members(self) -> list[Net]:
        return [S for S in self.samples if self.contains(S)]

    def distance(self, a: Any, b: Any) -> float:
        if isinstance(self.space, FiniteTopology):
            return 0.0 if a == b else 1.0
        return self.space.distance(a, b)

    def agree(self, a: Any, b: Any, slack: float) -> bool:
        if isinstance(self.space, FiniteTopology):
            return a == b
        return self.space.distance(a, b) <= slack

    def __repr__(self) -> str:
        return f"PartialLimitAlgebra({getattr(self.space, 'name', 'finite')}, budget={self.budget})"


class NetSpaceTopology:
    """Pointwise or uniform convergence of nets of nets over an algebra."""

    def __init__(self, mode: str, algebra: PartialLimitAlgebra):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if mode == UNIFORM and not isinstance(algebra.space, MetricSpace):
            raise PreconditionError("uniform mode needs a metric base space")
        self.mode = mode
        self.algebra = algebra

    # both provided modes refine pointwise convergence by construction
    dominates_pointwise = True

    def distance(self, S1: Net, S2: Net) -> float:
        """Uniform distance between two equally indexed nets."""
        if S1.index != S2.index:
            raise PreconditionError("nets must share an index")
        return max((self.algebra.distance(a, b) for a, b in zip(S1.values, S2.values)),
                   default=0.0)

    def row_limits(self, M: NetMatrix, budget: int | None = None) -> list[LimitOutcome]:
        return [self.algebra.lim(M.row(d), budget) for d in M.row_index.carrier]

    def column_limits(self, M: NetMatrix, budget: int | None = None) -> list[LimitOutcome]:
        return [self.algebra.lim(M.column(e), budget) for e in M.col_index.carrier]

    def limit(self, M: NetMatrix, budget: int | None = None) -> LimitOutcome:
        """Limit of the net of columns; the point is a net over the row index."""
        budget = self.algebra.budget if budget is None else budget
        if self.mode == UNIFORM:
            return limit(sup_space(self.algebra.space), M.columns(), budget)
        outcomes = self.row_limits(M, budget)
        for d, out in zip(M.row_index.carrier, outcomes):
            if not out.converged:
                return LimitOutcome.miss(
                    f"coordinate {d!r} does not converge: {out.reason}",
                    {"coordinate": d, "detail": out.witness},
                )
        return LimitOutcome.hit(
            Net(M.row_index, tuple(o.point for o in outcomes)),
            max(o.residual for o in outcomes),
        )

    def __repr__(self) -> str:
        return f"NetSpaceTopology({self.mode!r}, {self.algebra!r})"


def outer_limit(algebra: PartialLimitAlgebra, index: DirectedSet,
                inner: Sequence[LimitOutcome], budget: int | None = None) -> LimitOutcome:
    """Limit of the net of inner limits ``inner`` (one per index element).

    Inner limits of a truncated matrix settle only up to some point of the
    outer index.  When the outer index is a truncated natural range, the
    outer limit is taken over the settled prefix if it holds at least
    ``MIN_SETTLED`` indices; the prefix length is reported as
    ``effective_depth``.
    """
    settled = next((i for i, o in enumerate(inner) if not o.converged), len(inner))
    if settled == len(inner):
        net = Net(index, tuple(o.point for o in inner))
    elif isinstance(index, TruncatedNaturals) and settled >= MIN_SETTLED:
        net = Net(TruncatedNaturals(settled), tuple(o.point for o in inner[:settled]))
    else:
        bad = index.carrier[settled]
        return LimitOutcome.miss(
            f"inner limit at {bad!r} not detected: {inner[settled].reason}",
            {"index": bad, "settled": settled},
        )
    out = algebra.lim(net, budget)
    if not out.converged:
        return LimitOutcome.miss(out.reason, {"effective_depth": settled, "detail": out.witness})
    residual = out.residual + max(o.residual for o in inner[:settled])
    return LimitOutcome.hit(out.point, residual, {"effective_depth": settled})


def iterated_limits(algebra: PartialLimitAlgebra, M: NetMatrix,
                    budget: int | None = None) -> dict:
    """Both iterated limits of a matrix and the gap between them.

    ``rows_first`` is lim over rows of the row limits (inner limit along the
    column index); ``columns_first`` is lim over columns of the column limits.
    """
    rows = [algebra.lim(M.row(d), budget) for d in M.row_index.carrier]
    cols = [algebra.lim(M.column(e), budget) for e in M.col_index.carrier]
    rows_first = outer_limit(algebra, M.row_index, rows, budget)
    cols_first = outer_limit(algebra, M.col_index, cols, budget)
    gap = None
    if rows_first.converged and cols_first.converged:
        gap = algebra.distance(rows_first.point, cols_first.point)
    return {
        "rows_first": rows_first.point,
        "columns_first": cols_first.point,
        "rows_first_depth": (rows_first.witness or {}).get("effective_depth"),
        "columns_first_depth": (cols_first.witness or {}).get("effective_depth"),
        "gap": gap,
    }


def _ids(samples: Sequence, sample_ids: Sequence[str] | None) -> list[str]:
    if sample_ids is None:
        return [f"sample-{i}" for i in range(len(samples))]
    if len(sample_ids) != len(samples):
        raise ValueError("one sample id per sample is required")
    return list(sample_ids)


def restricted_arrow(f: Callable, A1: PartialLimitAlgebra, A2: PartialLimitAlgebra,
                     samples: Sequence[Net], sample_ids: Sequence[str] | None = None) -> CheckReport:
    """Where the arrow map of ``f``, restricted to converging nets, lands.

    The restriction is total on the samples iff the report passes.
    """
    report = CheckReport("restricted-arrow")
    for sid, S in zip(_ids(samples, sample_ids), samples):
        if not A1.contains(S):
            raise PreconditionError(f"{sid} is not a converging net of the source algebra")
        image = map_net(f, S)
        out = A2.lim(image)
        if out.converged:
            report.records.append(CheckRecord("restricted-arrow", sid, PASS, lhs=out.point,
                                              residual=out.residual))
        else:
            report.records.append(CheckRecord(
                "restricted-arrow", sid, FAIL, lhs=image,
                witness={"reason": "image net does not converge", "detail": out.reason}))
    return report


def check_morphism(f: Callable, A1: PartialLimitAlgebra, A2: PartialLimitAlgebra,
                   samples: Sequence[Net], tol: float = DEFAULT_TOLERANCE,
                   sample_ids: Sequence[str] | None = None) -> CheckReport:
    """Commutation ``lim2 f(S) = f(lim1 S)`` on every sample."""
    report = CheckReport("morphism")
    for sid, S in zip(_ids(samples, sample_ids), samples):
        source = A1.lim(S)
        if not source.converged:
            raise PreconditionError(f"{sid} does not converge in the source: {source.reason}")
        rhs = f(source.point)
        lhs = A2.lim(map_net(f, S))
        if not lhs.converged:
            report.records.append(CheckRecord(
                "morphism", sid, FAIL, rhs=rhs,
                witness={"reason": "image net non-convergent", "detail": lhs.reason,
                         "source_limit": source.point}))
            continue
        gap = A2.distance(lhs.point, rhs)
        ok = A2.agree(lhs.point, rhs, tol + lhs.residual + source.residual)
        report.records.append(CheckRecord(
            "morphism", sid, PASS if ok else FAIL, lhs=lhs.point, rhs=rhs, residual=gap,
            witness=None if ok else {"reason": "limits disagree", "source_limit": source.point}))
    return report


def check_transposition_property(TT: NetSpaceTopology, samples: Sequence[NetMatrix],
                                 budget: int | None = None, tol: float = DEFAULT_TOLERANCE,
                                 sample_ids: Sequence[str] | None = None) -> CheckReport:
    """Row limits of each matrix against its limit under ``TT``."""
    report = CheckReport("transposition")
    A = TT.algebra
    for sid, M in zip(_ids(samples, sample_ids), samples):
        rows = TT.row_limits(M, budget)
        bad = next((i for i, o in enumerate(rows) if not o.converged), None)
        if bad is not None:
            d = M.row_index.carrier[bad]
            report.records.append(CheckRecord(
                "transposition", sid, FAIL,
                witness={
                    "reason": f"transposition property violated: row {d!r} non-convergent",
                    "row": d,
                    "detail": rows[bad].reason,
                    "iterated": iterated_limits(A, M, budget),
                }))
            continue
        tt = TT.limit(M, budget)
        if not tt.converged:
            report.records.append(CheckRecord(
                "transposition", sid, HYPOTHESIS_NOT_MET,
                witness={"reason": f"sample does not converge in {TT.mode} mode",
                         "detail": tt.reason}))
            continue
        lhs = Net(M.row_index, tuple(o.point for o in rows))
        slack = tol + max(o.residual for o in rows) + tt.residual
        gaps = [A.distance(a, b) for a, b in zip(lhs.values, tt.point.values)]
        worst = max(range(len(gaps)), key=gaps.__getitem__)
        ok = all(A.agree(a, b, slack) for a, b in zip(lhs.values, tt.point.values))
        report.records.append(CheckRecord(
            "transposition", sid, PASS if ok else FAIL, lhs=lhs, rhs=tt.point,
            residual=gaps[worst],
            witness=None if ok else {"row": M.row_index.carrier[worst], "gap": gaps[worst]}))
    return report


def check_lim_continuity(A: PartialLimitAlgebra, TT: NetSpaceTopology,
                         samples: Sequence[NetMatrix], budget: int | None = None,
                         tol: float = DEFAULT_TOLERANCE,
                         sample_ids: Sequence[str] | None = None) -> CheckReport:
    """``lim(lim_TT S)`` against ``lim`` of the net of column limits."""
    report = CheckReport("lim-continuity")
    for sid, M in zip(_ids(samples, sample_ids), samples):
        if TT.mode == UNIFORM:
            tt = TT.limit(M, budget)
            if not tt.converged:
                report.records.append(CheckRecord(
                    "lim-continuity", sid, HYPOTHESIS_NOT_MET,
                    witness={"reason": "sample does not converge in uniform mode",
                             "detail": tt.reason}))
                continue
            left = A.lim(tt.point, budget)
            if left.converged:
                left = LimitOutcome.hit(left.point, left.residual + tt.residual,
                                        {"effective_depth": len(M.row_index)})
        else:
            left = outer_limit(A, M.row_index, TT.row_limits(M, budget), budget)
        right = outer_limit(A, M.col_index, TT.column_limits(M, budget), budget)
        if not (left.converged and right.converged):
            report.records.append(CheckRecord(
                "lim-continuity", sid, INCONCLUSIVE, lhs=left.point, rhs=right.point,
                witness={"lhs": left.reason, "rhs": right.reason}))
            continue
        gap = A.distance(left.point, right.point)
        ok = A.agree(left.point, right.point, tol + left.residual + right.residual)
        report.records.append(CheckRecord(
            "lim-continuity", sid, PASS if ok else FAIL, lhs=left.point, rhs=right.point,
            residual=gap,
            witness={"gap": gap,
                     "lhs_depth": left.witness.get("effective_depth"),
                     "rhs_depth": right.witness.get("effective_depth")}))
    return report


def check_theorem_trans(f: Callable, A1: PartialLimitAlgebra, A2: PartialLimitAlgebra,
                        TT1: NetSpaceTopology, TT2: NetSpaceTopology,
                        samples: Sequence[NetMatrix], budget: int | None = None,
                        tol: float = DEFAULT_TOLERANCE, strict: bool = True,
                        sample_ids: Sequence[str] | None = None) -> CheckReport:
    """Continuity of the arrow map of a continuous ``f`` between net spaces.

    Hypotheses (``f`` commutes with limits of the columns, both topologies
    transpose the sample) are checked first; the conclusion
    ``f(lim_TT1 S) = lim_TT2 f(S)`` is only asserted when they pass.  A
    failing conclusion raises ``SoundnessError`` unless ``strict`` is off.
    """
    report = CheckReport("theorem-trans")
    for sid, M in zip(_ids(samples, sample_ids), samples):
        stage = _trans_hypotheses(f, A1, A2, TT1, TT2, M, budget, tol)
        if stage is not None:
            report.records.append(CheckRecord("theorem-trans", sid, HYPOTHESIS_NOT_MET,
                                              witness=stage, kind="theorem"))
            continue
        fM = map_matrix(f, M)
        t1, t2 = TT1.limit(M, budget), TT2.limit(fM, budget)
        lhs = map_net(f, t1.point)
        gaps = [A2.distance(a, b) for a, b in zip(lhs.values, t2.point.values)]
        slack = tol + t1.residual + t2.residual
        ok = all(A2.agree(a, b, slack) for a, b in zip(lhs.values, t2.point.values))
        record = CheckRecord("theorem-trans", sid, PASS if ok else FAIL, lhs=lhs, rhs=t2.point,
                             residual=max(gaps, default=0.0), kind="theorem")
        report.records.append(record)
        if not ok:
            log.error("conclusion failed with hypotheses met: %s", sid)
            if strict:
                raise SoundnessError(record)
    return report


def _trans_hypotheses(f, A1, A2, TT1, TT2, M, budget, tol) -> dict | None:
    columns = [M.column(e) for e in M.col_index.carrier]
    for e, col in zip(M.col_index.carrier, columns):
        if not A1.lim(col, budget).converged:
            return {"stage": "continuity", "reason": f"column {e!r} does not converge"}
    morph = check_morphism(f, A1, A2, columns, tol)
    if not morph.passed:
        bad = next(r for r in morph if r.verdict != PASS)
        return {"stage": "continuity", "reason": "map is not continuous on the columns",
                "detail": bad.witness}
    for name, TT, sample in (("transposition-1", TT1, M), ("transposition-2", TT2,
                                                           map_matrix(f, M))):
        rep = check_transposition_property(TT, [sample], budget, tol)
        if not rep.passed:
            return {"stage": name, "verdict": rep.verdict, "detail": rep.records[0].witness}
    return None
