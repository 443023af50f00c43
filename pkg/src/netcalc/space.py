"""Convergence spaces and the limit oracle.

Two kinds of space are provided.  ``FiniteTopology`` is a finite point set
with an explicit list of open sets; limits there are decided exactly.
``MetricSpace`` covers the real line, R^n with the max-coordinate metric and
uniform grids; limits there are detected on truncated nets with a geometric
tolerance schedule (radius ``scale * 2**-level`` at level ``level``).

A metric net is declared convergent to the value ``x`` at its top when, for
every level up to the budget, the tail starting at the index set's
level anchor stays inside the level ball around ``x``.  Anchors cut off
roughly half of the remaining index per level, so the top alone can never
witness a level on its own; at too shallow a truncation this reports
no-limit rather than a false convergence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from numbers import Real
from typing import Any, Callable, Iterable, Sequence

from netcalc.directed import _jsonable, _tupled
from netcalc.errors import DomainError, MalformedInputError, PreconditionError, SeparationError
from netcalc.net import Net

DEFAULT_SCALE = 0.25
DEFAULT_BUDGET = 8
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LimitOutcome:
    """Either ``converged`` with a point and residual, or a reason for failure."""

    point: Any = None
    residual: float = 0.0
    reason: str | None = None
    witness: dict | None = None

    @property
    def converged(self) -> bool:
        return self.reason is None

    def __bool__(self) -> bool:
        return self.converged

    @classmethod
    def hit(cls, point: Any, residual: float = 0.0, witness: dict | None = None) -> "LimitOutcome":
        return cls(point=point, residual=residual, witness=witness)

    @classmethod
    def miss(cls, reason: str, witness: dict | None = None) -> "LimitOutcome":
        return cls(reason=reason, witness=witness)


@dataclass(frozen=True)
class Neighborhood:
    contains: Callable[[Any], bool]
    description: str
    radius: float | None = None
    members: frozenset | None = None

    def __contains__(self, x: Any) -> bool:
        return self.contains(x)


# -- finite topologies -------------------------------------------------------


@dataclass(frozen=True)
class FiniteTopology:
    points: tuple
    opens: frozenset

    def __post_init__(self) -> None:
        points = tuple(self.points)
        opens = frozenset(frozenset(u) for u in self.opens)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "opens", opens)
        if not points:
            raise MalformedInputError("a space needs at least one point")
        problems = topology_violations(points, opens)
        if problems:
            raise MalformedInputError("not a topology: " + "; ".join(problems))

    @classmethod
    def discrete(cls, points: Iterable) -> "FiniteTopology":
        points = tuple(points)
        return cls(points, _powerset(points))

    def contains(self, x: Any) -> bool:
        return x in self._point_set

    @cached_property
    def _point_set(self) -> frozenset:
        return frozenset(self.points)

    @cached_property
    def _minimal(self) -> dict:
        return {
            x: frozenset.intersection(*(u for u in self.opens if x in u)) for x in self.points
        }

    def minimal_open(self, x: Any) -> frozenset:
        try:
            return self._minimal[x]
        except KeyError:
            raise DomainError(f"{x!r} is not a point of the space") from None

    @cached_property
    def hausdorff(self) -> bool:
        return is_hausdorff(self).hausdorff

    def to_json(self) -> dict:
        order = {p: i for i, p in enumerate(self.points)}
        opens = sorted((sorted(u, key=order.__getitem__) for u in self.opens),
                       key=lambda u: (len(u), [order[p] for p in u]))
        return {
            "points": [_jsonable(p) for p in self.points],
            "opens": [[_jsonable(p) for p in u] for u in opens],
        }


def topology_violations(points: Sequence, opens: frozenset) -> list[str]:
    whole = frozenset(points)
    problems = []
    if frozenset() not in opens:
        problems.append("empty set missing")
    if whole not in opens:
        problems.append("whole set missing")
    for u in opens:
        if not u <= whole:
            problems.append(f"open set {sorted(map(repr, u))} leaves the point set")
    for u, v in itertools.combinations(opens, 2):
        if u | v not in opens:
            problems.append(f"union of {sorted(map(repr, u))} and {sorted(map(repr, v))} missing")
        if u & v not in opens:
            problems.append(
                f"intersection of {sorted(map(repr, u))} and {sorted(map(repr, v))} missing"
            )
    return problems


def _powerset(points: tuple) -> frozenset:
    return frozenset(
        frozenset(c) for r in range(len(points) + 1) for c in itertools.combinations(points, r)
    )


def all_topologies(points: Sequence) -> list[FiniteTopology]:
    """Every topology on ``points`` (355 of them on four points)."""
    points = tuple(points)
    whole = frozenset(points)
    middle = [u for u in _powerset(points) if u and u != whole]
    middle.sort(key=lambda u: (len(u), sorted(map(repr, u))))
    found = []
    for mask in range(1 << len(middle)):
        family = {frozenset(), whole}
        family.update(u for i, u in enumerate(middle) if mask >> i & 1)
        if all(u | v in family and u & v in family for u, v in itertools.combinations(family, 2)):
            found.append(FiniteTopology(points, frozenset(family)))
    return found


# -- metric spaces -----------------------------------------------------------


def _is_real(x: Any) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class Grid:
    """``resolution`` equally spaced points on ``[lo, hi]``."""

    lo: float
    hi: float
    resolution: int

    def __post_init__(self) -> None:
        if self.resolution < 2 or not self.hi > self.lo:
            raise MalformedInputError(f"bad grid [{self.lo}, {self.hi}] x {self.resolution}")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.resolution - 1)

    @cached_property
    def points(self) -> tuple:
        return tuple(self.lo + i * self.step for i in range(self.resolution))

    def __len__(self) -> int:
        return self.resolution

    def __iter__(self):
        return iter(self.points)

    def index_of(self, x: Any) -> int:
        if not _is_real(x):
            raise DomainError(f"{x!r} is not a grid point")
        i = round((x - self.lo) / self.step)
        if 0 <= i < self.resolution and abs(self.points[i] - x) <= 1e-9 * self.step:
            return i
        raise DomainError(f"{x!r} is not a point of the grid [{self.lo}, {self.hi}]")

    def contains(self, x: Any) -> bool:
        try:
            self.index_of(x)
        except DomainError:
            return False
        return True

    def snap(self, x: float) -> float:
        """Nearest grid point to ``x`` (clamped to the grid)."""
        i = min(self.resolution - 1, max(0, round((x - self.lo) / self.step)))
        return self.points[i]


@dataclass(frozen=True)
class MetricSpace:
    name: str
    distance: Callable[[Any, Any], float] = field(compare=False)
    member: Callable[[Any], bool] = field(compare=False)
    scale: float = DEFAULT_SCALE
    grid: Grid | None = None

    hausdorff = True

    def contains(self, x: Any) -> bool:
        return self.member(x)

    def with_scale(self, scale: float) -> "MetricSpace":
        return MetricSpace(self.name, self.distance, self.member, scale, self.grid)

    def to_json(self) -> dict:
        return {"metric": self.name, "scale": self.scale}


def _abs_distance(a: float, b: float) -> float:
    return abs(a - b)


def _max_distance(a: Sequence[float], b: Sequence[float]) -> float:
    return max((abs(x - y) for x, y in zip(a, b)), default=0.0)


def _coordinates(v: Any) -> Sequence:
    return v.values if hasattr(v, "values") and not isinstance(v, dict) else v


def sup_space(base: MetricSpace) -> MetricSpace:
    """Uniform (sup) metric on equally indexed nets or grid functions over ``base``."""

    def distance(u: Any, v: Any) -> float:
        cu, cv = _coordinates(u), _coordinates(v)
        if len(cu) != len(cv):
            raise DomainError("sup distance needs equally indexed arguments")
        return max((base.distance(a, b) for a, b in zip(cu, cv)), default=0.0)

    def member(u: Any) -> bool:
        return all(base.contains(a) for a in _coordinates(u))

    return MetricSpace(f"sup({base.name})", distance, member, base.scale)


def metric_space(name: str, scale: float = DEFAULT_SCALE) -> MetricSpace:
    """Registry lookup: ``line``, ``r^n:<dim>`` or ``grid:[a,b]:<resolution>``."""
    if name == "line":
        return MetricSpace("line", _abs_distance, _is_real, scale)
    if name.startswith("r^n:"):
        try:
            dim = int(name[4:])
        except ValueError:
            raise MalformedInputError(f"bad dimension in {name!r}") from None
        if dim < 1:
            raise MalformedInputError(f"bad dimension in {name!r}")

        def member(x: Any) -> bool:
            return isinstance(x, tuple) and len(x) == dim and all(map(_is_real, x))

        return MetricSpace(name, _max_distance, member, scale)
    if name.startswith("grid:"):
        try:
            _, interval, res = name.split(":")
            lo, hi = (float(t) for t in interval.strip("[]").split(","))
            grid = Grid(lo, hi, int(res))
        except ValueError:
            raise MalformedInputError(f"bad grid description {name!r}") from None
        return MetricSpace(name, _abs_distance, grid.contains, scale, grid)
    raise MalformedInputError(f"unknown metric space {name!r}")


def grid_space(grid: Grid, scale: float = DEFAULT_SCALE) -> MetricSpace:
    return metric_space(f"grid:[{grid.lo!r},{grid.hi!r}]:{grid.resolution}", scale)


def check_metric_axioms(space: MetricSpace, samples: Sequence, tol: float = 1e-12) -> list[str]:
    """Spot-check the metric axioms on ``samples``; returns the violations."""
    problems = []
    d = space.distance
    for a in samples:
        if d(a, a) > tol:
            problems.append(f"d({a!r},{a!r}) = {d(a, a)} is not zero")
    for a, b in itertools.permutations(samples, 2):
        if a != b and d(a, b) <= 0:
            problems.append(f"d({a!r},{b!r}) is not positive")
        if abs(d(a, b) - d(b, a)) > tol:
            problems.append(f"d is not symmetric on ({a!r},{b!r})")
    for a, b, c in itertools.permutations(samples, 3):
        if d(a, c) > d(a, b) + d(b, c) + tol:
            problems.append(f"triangle inequality fails on ({a!r},{b!r},{c!r})")
    return problems


# -- operations --------------------------------------------------------------


def _require_point(space: Any, x: Any) -> None:
    if not space.contains(x):
        raise DomainError(f"{x!r} is not a point of the space")


def neighborhood_base(space: Any, x: Any, level: int) -> Neighborhood:
    """The level-``level`` basic neighbourhood of ``x``; decreasing in level."""
    _require_point(space, x)
    if isinstance(space, FiniteTopology):
        u = space.minimal_open(x)
        return Neighborhood(u.__contains__, f"minimal open set {sorted(map(repr, u))}", members=u)
    r = space.scale * 2.0 ** (-level)
    return Neighborhood(
        lambda y: space.contains(y) and space.distance(x, y) <= r,
        f"closed ball of radius {r:g} around {x!r}",
        radius=r,
    )


@dataclass(frozen=True)
class HausdorffReport:
    hausdorff: bool
    witness: Any

    def __bool__(self) -> bool:
        return self.hausdorff


def is_hausdorff(space: Any) -> HausdorffReport:
    """Exhaustive for finite spaces: a violating pair, or every separating pair."""
    if isinstance(space, MetricSpace):
        return HausdorffReport(True, "metric")
    separations = []
    for a, b in itertools.combinations(space.points, 2):
        ua, ub = space.minimal_open(a), space.minimal_open(b)
        if ua & ub:
            return HausdorffReport(False, (a, b))
        separations.append(((a, b), (ua, ub)))
    return HausdorffReport(True, tuple(separations))


def converges_to(space: FiniteTopology, S: Net, x: Any) -> bool:
    """The convergence relation of a finite space (meaningful without Hausdorff)."""
    u = space.minimal_open(x)
    return any(all(v in u for v in S.tail_values(d0)) for d0 in S.index.carrier)


def _check_values(space: Any, S: Net) -> None:
    for d, v in S.items():
        if not space.contains(v):
            raise DomainError(f"value {v!r} at index {d!r} is not a point of the space")


def limit(space: Any, S: Net, budget: int = DEFAULT_BUDGET, candidate: Any = None) -> LimitOutcome:
    """The limit oracle: exact on finite spaces, tolerance-scheduled on metric ones.

    ``candidate`` selects which top element of the index seeds the metric
    candidate; by default the first top in canonical order.
    """
    _check_values(space, S)
    if isinstance(space, FiniteTopology):
        return _finite_limit(space, S)
    return _metric_limit(space, S, budget, candidate)


def _finite_limit(space: FiniteTopology, S: Net) -> LimitOutcome:
    report = is_hausdorff(space)
    if not report.hausdorff:
        raise SeparationError(
            f"limits are not unique in a non-Hausdorff space (points {report.witness!r} "
            "cannot be separated)"
        )
    found = [x for x in space.points if converges_to(space, S, x)]
    if len(found) > 1:
        raise AssertionError(f"distinct limits {found!r} in a Hausdorff space")
    if not found:
        return LimitOutcome.miss("net is not eventually constant", {"top_values": [
            _jsonable(S(t)) for t in S.index.tops]})
    return LimitOutcome.hit(found[0], 0.0)


def _metric_limit(space: MetricSpace, S: Net, budget: int, candidate: Any) -> LimitOutcome:
    index = S.index
    tops = index.tops
    if not tops:
        raise PreconditionError(f"{index!r} has no greatest element")
    if candidate is None:
        candidate = tops[0]
    elif candidate not in tops:
        raise PreconditionError(f"candidate seed {candidate!r} is not a top element")
    x = S(candidate)
    residual = 0.0
    for level in range(1, budget + 1):
        radius = space.scale * 2.0 ** (-level)
        anchor = index.anchor(level)
        dist = max(space.distance(v, x) for v in S.tail_values(anchor))
        if dist > radius:
            return LimitOutcome.miss(
                f"tail from {anchor!r} stays {dist:.6g} away from the candidate at level "
                f"{level} (radius {radius:.6g})",
                {"level": level, "anchor": _jsonable(anchor), "tail_distance": dist,
                 "radius": radius},
            )
        residual = dist
    return LimitOutcome.hit(x, residual)


def tail_diameter(space: Any, S: Net, level: int = 1) -> float:
    """Diameter of the level tail of ``S`` (the Cauchy spread)."""
    values = S.tail_values(S.index.anchor(level))
    return max((space.distance(a, b) for a, b in itertools.combinations(values, 2)), default=0.0)


# -- JSON --------------------------------------------------------------------


def space_from_json(obj: dict) -> Any:
    if not isinstance(obj, dict):
        raise MalformedInputError("space description must be a JSON object")
    if "metric" in obj:
        return metric_space(obj["metric"], obj.get("scale", DEFAULT_SCALE))
    try:
        points = tuple(_tupled(p) for p in obj["points"])
        opens = frozenset(frozenset(_tupled(p) for p in u) for u in obj["opens"])
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"bad finite topology description: {exc}") from exc
    return FiniteTopology(points, opens)
