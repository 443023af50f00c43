import itertools
import json

import pytest
from hypothesis import given, strategies as st

from netcalc.directed import (
    FiniteDirectedSet,
    ProductDirectedSet,
    TruncatedNaturals,
    all_directed_sets,
    directed_from_json,
    product,
    upper_bound,
    validate_directed,
)
from netcalc.errors import DirectednessError, MalformedInputError
from tests.strategies import SMALL_DIRECTED, directed_sets


def antichain():
    return FiniteDirectedSet(("a", "b"), {("a", "a"), ("b", "b")})


def test_linear_order_is_directed():
    assert validate_directed(FiniteDirectedSet.chain(range(4))).ok


def test_antichain_reports_missing_bound():
    report = validate_directed(antichain())
    assert not report.ok
    assert [str(v) for v in report.violations] == ["no upper bound for ('a', 'b')"]


def test_divisibility_order():
    ds = FiniteDirectedSet.from_relation((1, 2, 3, 6), lambda a, b: b % a == 0)
    assert validate_directed(ds).ok
    assert ds.tops == (6,)


def test_missing_reflexive_pair_is_reported():
    ds = FiniteDirectedSet((0, 1), {(0, 1), (1, 1)})
    axioms = {v.axiom for v in validate_directed(ds).violations}
    assert axioms == {"reflexivity"}


def test_intransitive_relation_is_reported():
    pairs = {(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)}
    ds = FiniteDirectedSet((0, 1, 2), pairs)
    # 0 <= 1 <= 2 without 0 <= 2; 0 and 2 then also lack a common bound
    assert {v.axiom for v in validate_directed(ds).violations} == {"transitivity", "upper-bound"}


def test_preorders_are_accepted():
    # 0 and 1 are equivalent, neither is "the" top
    ds = FiniteDirectedSet.from_relation((0, 1), lambda a, b: True)
    assert validate_directed(ds).ok
    assert ds.tops == (0, 1)


def test_empty_carrier_is_malformed():
    with pytest.raises(MalformedInputError):
        validate_directed(FiniteDirectedSet((), frozenset()))


def test_pairs_outside_carrier_are_malformed():
    with pytest.raises(MalformedInputError):
        FiniteDirectedSet((0,), {(0, 1)})


def test_truncated_naturals_order():
    ds = TruncatedNaturals(5)
    assert ds.carrier == (0, 1, 2, 3, 4)
    assert ds.leq(1, 3) and not ds.leq(3, 1)
    assert ds.top == 4
    assert validate_directed(ds, exhaustive=True).ok
    with pytest.raises(MalformedInputError):
        TruncatedNaturals(0)


def test_product_of_two_chains():
    two = FiniteDirectedSet.chain((0, 1))
    p = product(two, two)
    assert len(p) == 4
    assert p.leq((0, 1), (1, 1)) and not p.leq((1, 0), (0, 1))
    assert all(p.leq(e, (1, 1)) for e in p)


def test_product_of_truncated_naturals_is_a_grid():
    p = product(TruncatedNaturals(3), TruncatedNaturals(3))
    assert len(p) == 9
    assert validate_directed(p, exhaustive=True).ok


def test_product_with_singleton_copies_the_factor():
    one = FiniteDirectedSet.chain(("*",))
    ds = FiniteDirectedSet.from_relation((1, 2, 3, 6), lambda a, b: b % a == 0)
    p = product(ds, one)
    for a, b in itertools.product(ds, repeat=2):
        assert p.leq((a, "*"), (b, "*")) == ds.leq(a, b)


def test_product_rejects_invalid_factor():
    with pytest.raises(DirectednessError, match="no upper bound"):
        product(antichain(), TruncatedNaturals(2))


def test_upper_bound_examples():
    assert upper_bound(FiniteDirectedSet.chain(range(3)), 0, 2) == 2
    grid = product(FiniteDirectedSet.chain((0, 1)), FiniteDirectedSet.chain((0, 1)))
    assert upper_bound(grid, (1, 0), (0, 1)) == (1, 1)
    with pytest.raises(DirectednessError):
        upper_bound(antichain(), "a", "b")


def test_directed_set_counts_up_to_isomorphism():
    # 1, 2 and 5 directed preorders on 1, 2, 3 points (up to relabelling)
    assert [len(list(all_directed_sets(n))) for n in (1, 2, 3)] == [1, 2, 5]
    assert all(validate_directed(ds).ok for ds in SMALL_DIRECTED)


@given(directed_sets(), directed_sets())
def test_products_of_valid_sets_are_valid(a, b):
    assert validate_directed(product(a, b), exhaustive=True).ok


@given(directed_sets(), st.data())
def test_upper_bound_bounds_both(ds, data):
    a = data.draw(st.sampled_from(ds.carrier))
    b = data.draw(st.sampled_from(ds.carrier))
    e = upper_bound(ds, a, b)
    assert ds.leq(a, e) and ds.leq(b, e)
    assert upper_bound(ds, a, a) == a or not ds.leq(a, a)


@given(directed_sets(), directed_sets(), directed_sets())
def test_product_associative_up_to_repairing(a, b, c):
    left = product(product(a, b), c)
    right = product(a, product(b, c))
    repair = {((x, y), z): (x, (y, z)) for (x, y), z in left}
    assert sorted(map(repr, repair.values())) == sorted(map(repr, right))
    for u, v in itertools.product(left, repeat=2):
        assert left.leq(u, v) == right.leq(repair[u], repair[v])


@given(directed_sets())
def test_anchors_are_nested_and_reach_a_top(ds):
    previous = set(ds.carrier)
    for level in range(1, 10):
        tail = set(ds.tail(ds.anchor(level)))
        assert tail <= previous
        previous = tail
    assert ds.anchor(12) in ds.tops


def test_truncated_anchor_halves_the_tail():
    ds = TruncatedNaturals(64)
    assert [ds.anchor(k) for k in range(0, 8)] == [0, 32, 48, 56, 60, 62, 63, 63]


@given(directed_sets(), directed_sets())
def test_json_round_trip(a, b):
    for ds in (a, product(a, b)):
        back = directed_from_json(json.loads(json.dumps(ds.to_json())))
        assert back.carrier == ds.carrier
        assert all(back.leq(u, v) == ds.leq(u, v) for u in ds for v in ds)
    assert isinstance(directed_from_json({"product": [a.to_json(), b.to_json()]}),
                      ProductDirectedSet)


def test_bad_json_is_malformed():
    with pytest.raises(MalformedInputError):
        directed_from_json([1, 2])
