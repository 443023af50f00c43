"""Named sample families: function nets, matrix nets, grid batteries, point maps."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

from netcalc.directed import TruncatedNaturals
from netcalc.errors import ConfigError
from netcalc.funcspace import SampledFunction
from netcalc.net import Net, NetMatrix
from netcalc.space import Grid


@dataclass(frozen=True)
class Family:
    """``term(n, x)`` is the ``n``-th member evaluated at ``x``.

    ``limit`` is the closed form of the untruncated limit when there is
    one.  ``kinks`` lists points where members are not differentiable.
    """

    name: str
    term: Callable[[int, float], float] = field(compare=False)
    limit: Callable[[float], float] | None = field(default=None, compare=False)
    kinks: tuple = ()
    description: str = ""


def _poly(coeffs: tuple) -> Callable[[float], float]:
    def p(x: float) -> float:
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc
    return p


def _parse_coeffs(text: str) -> tuple:
    try:
        coeffs = tuple(float(c) for c in text.split(","))
    except ValueError:
        raise ConfigError(f"bad polynomial coefficients {text!r}") from None
    if not coeffs:
        raise ConfigError("polynomial needs at least one coefficient")
    return coeffs


def function_family(name: str) -> Family:
    """Registry lookup.

    ``poly:c0,c1,...`` is the constant net at that polynomial and
    ``offset:c0,c1,...`` adds ``1/(n+1)`` to it.
    """
    if name == "xn":
        return Family(name, lambda n, x: x ** n,
                      lambda x: 1.0 if x == 1 else 0.0, description="x^n")
    if name == "x2_plus_x_over_n":
        return Family(name, lambda n, x: x * x + x / (n + 1), lambda x: x * x,
                      description="x^2 + x/(n+1)")
    if name == "sin_n2x_over_n":
        return Family(name, lambda n, x: math.sin((n + 1) ** 2 * x) / (n + 1), lambda x: 0.0,
                      description="sin((n+1)^2 x)/(n+1)")
    if name == "abs_kink":
        return Family(name, lambda n, x: abs(x - 0.5) + 1 / (n + 1), lambda x: abs(x - 0.5),
                      kinks=(0.5,), description="|x - 1/2| + 1/(n+1)")
    if name.startswith("poly:"):
        p = _poly(_parse_coeffs(name[5:]))
        return Family(name, lambda n, x: p(x), p, description=name)
    if name.startswith("offset:"):
        p = _poly(_parse_coeffs(name[7:]))
        return Family(name, lambda n, x: p(x) + 1 / (n + 1), p, description=name)
    raise ConfigError(f"unknown function family {name!r}")


FUNCTION_FAMILIES = ("xn", "x2_plus_x_over_n", "sin_n2x_over_n", "abs_kink", "poly:...",
                     "offset:...")


def function_net(family: Family | str, grid: Grid, depth: int) -> Net:
    fam = function_family(family) if isinstance(family, str) else family
    index = TruncatedNaturals(depth)
    return Net.from_function(
        index,
        lambda n: SampledFunction.sample(grid, lambda x: fam.term(n, x), f"{fam.name}[{n}]"),
    )


def matrix_family(name: str, depth: int) -> NetMatrix:
    """``inv_sum``: 1/(d+1) + 1/(e+1); ``power_ratio``: (d/(d+1))^e; ``const:c``."""
    index = TruncatedNaturals(depth)
    if name == "inv_sum":
        fn = lambda d, e: 1 / (d + 1) + 1 / (e + 1)  # noqa: E731
    elif name == "power_ratio":
        fn = lambda d, e: (d / (d + 1)) ** e  # noqa: E731
    elif name.startswith("const:"):
        try:
            c = float(name[6:])
        except ValueError:
            raise ConfigError(f"bad constant in {name!r}") from None
        fn = lambda d, e: c  # noqa: E731
    else:
        raise ConfigError(f"unknown matrix family {name!r}")
    return NetMatrix.from_function(index, index, fn)


MATRIX_FAMILIES = ("inv_sum", "power_ratio", "const:...")


def battery(grid: Grid, depth: int, seed: int = 0) -> list[tuple[str, Net]]:
    """Eight converging nets on the grid, values snapped to grid points.

    Only ``jitter`` depends on the seed.
    """
    lo, hi = grid.lo, grid.hi
    w, mid = hi - lo, (lo + hi) / 2
    rng = random.Random(seed)
    noise = [rng.uniform(-1.0, 1.0) for _ in range(depth)]
    shapes = [
        ("to-lo", lambda r: lo + w / (r + 1)),
        ("to-hi", lambda r: hi - w / (r + 1)),
        ("alternating-mid", lambda r: mid + (-1) ** r * w * 2 ** (-r / 4) / 2),
        ("constant", lambda r: lo + w / 4),
        ("geometric-quarter", lambda r: lo + w / 4 + w * 2 ** (-r / 2) / 4),
        ("below-three-quarters", lambda r: lo + 0.75 * w - 0.25 * w / (r + 1)),
        ("sqrt-rate", lambda r: lo + w / math.sqrt(r + 1)),
        ("jitter", lambda r: mid + w * noise[r] / (2 * (r + 1) ** 2)),
    ]
    index = TruncatedNaturals(depth)
    return [(name, Net.from_function(index, lambda r, fn=fn: grid.snap(fn(r))))
            for name, fn in shapes]


POINT_MAPS: dict[str, Callable[[float], float]] = {
    "square": lambda x: x * x,
    "affine": lambda x: 2 * x + 1,
    "sign": lambda x: (x > 0) - (x < 0),
    "step": lambda x: 1.0 if x >= 0 else 0.0,
}


def point_map(name: str) -> Callable[[float], float]:
    try:
        return POINT_MAPS[name]
    except KeyError:
        raise ConfigError(f"unknown point map {name!r}") from None
