"""Nets, nets of nets in matrix form, and the arrow map of the net functor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterator

from netcalc.directed import (
    DirectedSet,
    _jsonable,
    _tupled,
    directed_from_json,
)
from netcalc.errors import DomainError, MalformedInputError, NotMatrixFormError

# Exceptions a point map may raise to signal it is undefined at an argument.
_UNDEFINED = (ArithmeticError, KeyError, LookupError, TypeError, ValueError)


@dataclass(frozen=True)
class Net:
    """A total valuation ``index -> points``, stored as a table.

    ``values[i]`` is the value at ``index.carrier[i]``.
    """

    index: DirectedSet
    values: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.index):
            raise MalformedInputError(
                f"valuation has {len(self.values)} entries for a carrier of {len(self.index)}"
            )

    @classmethod
    def from_function(cls, index: DirectedSet, fn: Callable[[Hashable], Any]) -> "Net":
        return cls(index, tuple(fn(d) for d in index.carrier))

    @classmethod
    def constant(cls, index: DirectedSet, value: Any) -> "Net":
        return cls(index, (value,) * len(index))

    def __call__(self, d: Hashable) -> Any:
        return self.values[self.index.position(d)]

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple]:
        return zip(self.index.carrier, self.values)

    def tail_values(self, start: Hashable) -> list:
        return [self(d) for d in self.index.tail(start)]

    def restrict(self, index: DirectedSet) -> "Net":
        """The same valuation read on a sub-index (e.g. a prefix)."""
        return Net(index, tuple(self(d) for d in index.carrier))

    def to_json(self) -> dict:
        return {"index": self.index.to_json(), "values": [_jsonable(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "Net":
        try:
            index = directed_from_json(obj["index"])
            values = tuple(_tupled(v) for v in obj["values"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad net description: {exc}") from exc
        return cls(index, values)


def map_net(f: Callable[[Any], Any], S: Net) -> Net:
    """Apply ``f`` entrywise; the index is kept as is."""
    out = []
    for d, x in zip(S.index.carrier, S.values):
        try:
            out.append(f(x))
        except _UNDEFINED as exc:
            raise DomainError(f"map undefined at index {d!r} (value {x!r}): {exc}") from exc
    return Net(S.index, tuple(out))


@dataclass(frozen=True)
class NetMatrix:
    """Entries ``x[d, delta]`` over ``row_index x col_index``.

    Column ``delta`` is the inner net ``S_delta`` over the row index, row
    ``d`` is the transposed net over the column index.  ``entries[i][j]``
    is the entry at ``(row_index.carrier[i], col_index.carrier[j])``.
    """

    row_index: DirectedSet
    col_index: DirectedSet
    entries: tuple

    def __post_init__(self) -> None:
        entries = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != len(self.row_index) or any(
            len(r) != len(self.col_index) for r in entries
        ):
            raise MalformedInputError("matrix entries are not total on the product carrier")

    @classmethod
    def from_function(cls, row_index: DirectedSet, col_index: DirectedSet,
                      fn: Callable[[Hashable, Hashable], Any]) -> "NetMatrix":
        return cls(
            row_index,
            col_index,
            tuple(tuple(fn(d, e) for e in col_index.carrier) for d in row_index.carrier),
        )

    def entry(self, d: Hashable, delta: Hashable) -> Any:
        return self.entries[self.row_index.position(d)][self.col_index.position(delta)]

    def column(self, delta: Hashable) -> Net:
        j = self.col_index.position(delta)
        return Net(self.row_index, tuple(r[j] for r in self.entries))

    def row(self, d: Hashable) -> Net:
        return Net(self.col_index, self.entries[self.row_index.position(d)])

    def columns(self) -> Net:
        """The matrix read as a net (over the column index) of column nets."""
        return Net(self.col_index, tuple(self.column(e) for e in self.col_index.carrier))

    def rows(self) -> Net:
        return Net(self.row_index, tuple(self.row(d) for d in self.row_index.carrier))

    def to_json(self) -> dict:
        return {
            "rows": self.row_index.to_json(),
            "cols": self.col_index.to_json(),
            "entries": [[_jsonable(v) for v in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NetMatrix":
        try:
            rows = directed_from_json(obj["rows"])
            cols = directed_from_json(obj["cols"])
            entries = tuple(tuple(_tupled(v) for v in r) for r in obj["entries"])
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad matrix description: {exc}") from exc
        return cls(rows, cols, entries)


def transpose(M: NetMatrix) -> NetMatrix:
    return NetMatrix(M.col_index, M.row_index, tuple(zip(*M.entries)))


def map_matrix(f: Callable[[Any], Any], M: NetMatrix) -> NetMatrix:
    """The double arrow map: ``f`` applied to every entry."""
    return NetMatrix(
        M.row_index, M.col_index, tuple(tuple(f(x) for x in r) for r in M.entries)
    )


def lift_net_of_nets(S: Net) -> NetMatrix:
    """Matrix form of a net whose values are nets over one common index."""
    inner = [v for v in S.values]
    if not inner or not all(isinstance(v, Net) for v in inner):
        raise NotMatrixFormError("values of the outer net must all be nets")
    row_index = inner[0].index
    for delta, v in S.items():
        if v.index != row_index:
            raise NotMatrixFormError(
                f"inner net at {delta!r} is indexed by {v.index!r}, expected {row_index!r}"
            )
    return NetMatrix(row_index, S.index, tuple(zip(*(v.values for v in inner))))
