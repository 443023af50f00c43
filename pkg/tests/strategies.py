"""Hypothesis strategies for small directed sets and nets."""

from hypothesis import strategies as st

from netcalc.directed import FiniteDirectedSet, TruncatedNaturals, all_directed_sets
from netcalc.net import Net

SMALL_DIRECTED = [ds for n in (1, 2, 3) for ds in all_directed_sets(n)]


@st.composite
def directed_sets(draw, max_depth=6):
    kind = draw(st.sampled_from(["finite", "nat"]))
    if kind == "finite":
        return draw(st.sampled_from(SMALL_DIRECTED))
    return TruncatedNaturals(draw(st.integers(1, max_depth)))


@st.composite
def nets(draw, points=st.integers(-3, 3), index=None):
    ds = draw(directed_sets()) if index is None else index
    values = draw(st.lists(points, min_size=len(ds), max_size=len(ds)))
    return Net(ds, tuple(values))


def point_maps(domain=st.integers(-3, 3), codomain=st.integers(-3, 3)):
    """Finite lookup tables, so maps compare by value and never raise."""
    return st.dictionaries(domain, codomain, min_size=7).map(lambda d: d.__getitem__)


@st.composite
def chains(draw, max_size=5):
    n = draw(st.integers(1, max_size))
    return FiniteDirectedSet.chain(range(n))
