"""Directed sets: the index objects of nets.

Three shapes are supported: explicit finite preorders, truncated naturals
``{0, ..., depth-1}`` and binary products of those.  All of them are
immutable and enumerate their carrier in a fixed canonical order, which is
what makes upper bounds, tops and tail anchors deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator

from netcalc.errors import DirectednessError, MalformedInputError

# Exhaustive O(n^3) scans above this size are skipped for structured sets.
EXHAUSTIVE_LIMIT = 64


class DirectedSet:
    """Common interface; subclasses supply ``carrier`` and ``leq``."""

    carrier: tuple

    def leq(self, a: Hashable, b: Hashable) -> bool:
        raise NotImplementedError

    def __len__(self) -> int:
        return len(self.carrier)

    def __iter__(self) -> Iterator:
        return iter(self.carrier)

    def __contains__(self, item: object) -> bool:
        return item in self._positions

    @cached_property
    def _positions(self) -> dict:
        return {e: i for i, e in enumerate(self.carrier)}

    def position(self, element: Hashable) -> int:
        try:
            return self._positions[element]
        except KeyError:
            raise KeyError(f"{element!r} is not in the carrier") from None

    def tail(self, start: Hashable) -> tuple:
        """Elements ``e`` with ``start <= e``, in canonical order."""
        return tuple(e for e in self.carrier if self.leq(start, e))

    @cached_property
    def tops(self) -> tuple:
        """Elements lying above the whole carrier (empty if not directed)."""
        return tuple(
            t for t in self.carrier if all(self.leq(e, t) for e in self.carrier)
        )

    @property
    def top(self) -> Hashable:
        if not self.tops:
            raise DirectednessError("directed set has no greatest element")
        return self.tops[0]

    def anchor(self, level: int) -> Hashable:
        """Start of the level-``level`` tail used by metric limit detection.

        Level 0 is the bottom of the order; each further level discards
        roughly half of what is left, so tails are nested and shrink
        geometrically.  The top is reached after ``log2(len)`` levels.
        """
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def _level_cut(n: int, level: int) -> int:
    return min(n - 1, math.floor(n * (1.0 - 2.0 ** (-level))))


@dataclass(frozen=True, eq=True)
class TruncatedNaturals(DirectedSet):
    depth: int

    def __post_init__(self) -> None:
        if not isinstance(self.depth, int) or self.depth < 1:
            raise MalformedInputError(f"depth must be a positive integer, got {self.depth!r}")

    @cached_property
    def carrier(self) -> tuple:
        return tuple(range(self.depth))

    def leq(self, a: int, b: int) -> bool:
        return a <= b

    def __contains__(self, item: object) -> bool:
        return isinstance(item, int) and 0 <= item < self.depth

    def position(self, element: int) -> int:
        if element not in self:
            raise KeyError(f"{element!r} is not in the carrier")
        return element

    def tail(self, start: int) -> tuple:
        return tuple(range(start, self.depth))

    @property
    def tops(self) -> tuple:
        return (self.depth - 1,)

    def anchor(self, level: int) -> int:
        return _level_cut(self.depth, level)

    def to_json(self) -> dict:
        return {"nat_trunc": self.depth}

    def __repr__(self) -> str:
        return f"TruncatedNaturals({self.depth})"


@dataclass(frozen=True, eq=True)
class FiniteDirectedSet(DirectedSet):
    """An explicit finite carrier with the relation listed as pairs.

    The pairs are taken literally; reflexive pairs must be present for the
    set to validate.
    """

    carrier: tuple
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        if len(set(self.carrier)) != len(self.carrier):
            raise MalformedInputError("carrier has repeated elements")
        members = set(self.carrier)
        for a, b in self.pairs:
            if a not in members or b not in members:
                raise MalformedInputError(f"pair ({a!r}, {b!r}) leaves the carrier")

    @classmethod
    def from_relation(cls, carrier: Iterable, leq) -> "FiniteDirectedSet":
        carrier = tuple(carrier)
        return cls(carrier, frozenset((a, b) for a in carrier for b in carrier if leq(a, b)))

    @classmethod
    def chain(cls, carrier: Iterable) -> "FiniteDirectedSet":
        carrier = tuple(carrier)
        return cls.from_relation(carrier, lambda a, b: carrier.index(a) <= carrier.index(b))

    def leq(self, a, b) -> bool:
        return (a, b) in self.pairs

    @cached_property
    def _ranks(self) -> dict:
        return {e: sum(1 for x in self.carrier if self.leq(x, e)) for e in self.carrier}

    def anchor(self, level: int):
        # rank = size of the down-set; each level searches inside the previous
        # tail so that tails stay nested even when the order is not a chain
        n = len(self.carrier)
        candidates = self.carrier
        chosen = self.carrier[0]
        for k in range(1, level + 1):
            threshold = _level_cut(n, k) + 1
            chosen = next((e for e in candidates if self._ranks[e] >= threshold), self.top)
            candidates = self.tail(chosen)
        return chosen

    def to_json(self) -> dict:
        return {
            "carrier": [_jsonable(e) for e in self.carrier],
            "pairs": sorted(
                ([_jsonable(a), _jsonable(b)] for a, b in self.pairs),
                key=lambda p: (self.position(_tupled(p[0])), self.position(_tupled(p[1]))),
            ),
        }

    def __repr__(self) -> str:
        return f"FiniteDirectedSet({self.carrier!r}, {len(self.pairs)} pairs)"


@dataclass(frozen=True, eq=True)
class ProductDirectedSet(DirectedSet):
    """Componentwise order on ``left x right``; elements are pairs."""

    left: DirectedSet
    right: DirectedSet

    @cached_property
    def carrier(self) -> tuple:
        return tuple(itertools.product(self.left.carrier, self.right.carrier))

    def leq(self, a: tuple, b: tuple) -> bool:
        return self.left.leq(a[0], b[0]) and self.right.leq(a[1], b[1])

    def __contains__(self, item: object) -> bool:
        return (
            isinstance(item, tuple)
            and len(item) == 2
            and item[0] in self.left
            and item[1] in self.right
        )

    def position(self, element: tuple) -> int:
        if element not in self:
            raise KeyError(f"{element!r} is not in the carrier")
        return self.left.position(element[0]) * len(self.right) + self.right.position(element[1])

    def tail(self, start: tuple) -> tuple:
        return tuple(itertools.product(self.left.tail(start[0]), self.right.tail(start[1])))

    @cached_property
    def tops(self) -> tuple:
        return tuple(itertools.product(self.left.tops, self.right.tops))

    def anchor(self, level: int) -> tuple:
        return (self.left.anchor(level), self.right.anchor(level))

    def to_json(self) -> dict:
        return {"product": [self.left.to_json(), self.right.to_json()]}

    def __repr__(self) -> str:
        return f"ProductDirectedSet({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Violation:
    axiom: str  # "reflexivity" | "transitivity" | "upper-bound"
    witness: tuple

    def __str__(self) -> str:
        if self.axiom == "upper-bound":
            return f"no upper bound for {self.witness!r}"
        return f"{self.axiom} fails at {self.witness!r}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_directed(ds: DirectedSet, exhaustive: bool | None = None) -> ValidationReport:
    """Check the preorder and directedness axioms.

    Explicit finite sets are always scanned exhaustively.  Truncated naturals
    and products are valid by construction once their factors are; they are
    scanned only when small or when ``exhaustive`` is forced.
    """
    if len(ds) == 0:
        raise MalformedInputError("directed set has an empty carrier")
    if exhaustive is None:
        exhaustive = isinstance(ds, FiniteDirectedSet) or len(ds) <= EXHAUSTIVE_LIMIT
    if not exhaustive:
        if isinstance(ds, ProductDirectedSet):
            sub = validate_directed(ds.left).violations + validate_directed(ds.right).violations
            return ValidationReport(sub)
        return ValidationReport()

    carrier = ds.carrier
    violations = []
    for a in carrier:
        if not ds.leq(a, a):
            violations.append(Violation("reflexivity", (a,)))
    for a, b in itertools.product(carrier, repeat=2):
        if not ds.leq(a, b):
            continue
        for c in carrier:
            if ds.leq(b, c) and not ds.leq(a, c):
                violations.append(Violation("transitivity", (a, b, c)))
    for i, a in enumerate(carrier):
        for b in carrier[i + 1:]:
            if not any(ds.leq(a, e) and ds.leq(b, e) for e in carrier):
                violations.append(Violation("upper-bound", (a, b)))
    return ValidationReport(tuple(violations))


def _require_valid(ds: DirectedSet) -> None:
    report = validate_directed(ds)
    if not report.ok:
        raise DirectednessError(
            f"{ds!r} is not directed: " + "; ".join(str(v) for v in report.violations[:5])
        )


def product(ds1: DirectedSet, ds2: DirectedSet) -> ProductDirectedSet:
    _require_valid(ds1)
    _require_valid(ds2)
    return ProductDirectedSet(ds1, ds2)


def upper_bound(ds: DirectedSet, a: Hashable, b: Hashable) -> Hashable:
    """A common upper bound of ``a`` and ``b``.

    If one argument already bounds the other it is returned, otherwise the
    first bound in canonical carrier order.
    """
    for x in (a, b):
        if x not in ds:
            raise KeyError(f"{x!r} is not in the carrier")
    if ds.leq(b, a) and ds.leq(a, a):
        return a
    if ds.leq(a, b) and ds.leq(b, b):
        return b
    if isinstance(ds, ProductDirectedSet):
        return (upper_bound(ds.left, a[0], b[0]), upper_bound(ds.right, a[1], b[1]))
    for e in ds.carrier:
        if ds.leq(a, e) and ds.leq(b, e):
            return e
    raise DirectednessError(f"no upper bound for ({a!r}, {b!r})")


def all_directed_sets(size: int) -> Iterator[FiniteDirectedSet]:
    """Every directed preorder on ``range(size)``, one per isomorphism class."""
    carrier = tuple(range(size))
    off_diagonal = [(a, b) for a in carrier for b in carrier if a != b]
    seen = set()
    for mask in range(1 << len(off_diagonal)):
        rel = {(a, a) for a in carrier}
        rel.update(p for i, p in enumerate(off_diagonal) if mask >> i & 1)
        if not _transitive(rel, carrier):
            continue
        if not all(any((a, e) in rel and (b, e) in rel for e in carrier)
                   for a in carrier for b in carrier):
            continue
        canon = min(
            tuple(sorted((perm[a], perm[b]) for a, b in rel))
            for perm in itertools.permutations(carrier)
        )
        if canon in seen:
            continue
        seen.add(canon)
        yield FiniteDirectedSet(carrier, frozenset(canon))


def _transitive(rel: set, carrier: tuple) -> bool:
    return all(
        (a, c) in rel
        for a, b in rel
        for c in carrier
        if (b, c) in rel
    )


def _jsonable(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def _tupled(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_tupled(v) for v in x)
    return x


def directed_to_json(ds: DirectedSet) -> dict:
    return ds.to_json()


def directed_from_json(obj: dict) -> DirectedSet:
    if not isinstance(obj, dict):
        raise MalformedInputError(f"directed set must be a JSON object, got {type(obj).__name__}")
    if "nat_trunc" in obj:
        return TruncatedNaturals(obj["nat_trunc"])
    if "product" in obj:
        left, right = obj["product"]
        return ProductDirectedSet(directed_from_json(left), directed_from_json(right))
    if "carrier" in obj:
        carrier = tuple(_tupled(e) for e in obj["carrier"])
        pairs = frozenset((_tupled(a), _tupled(b)) for a, b in obj.get("pairs", ()))
        return FiniteDirectedSet(carrier, pairs)
    raise MalformedInputError(f"unrecognised directed set description: {sorted(obj)}")
