import json
import random

import pytest
from hypothesis import given, strategies as st

from netcalc.directed import FiniteDirectedSet, TruncatedNaturals
from netcalc.errors import DomainError, MalformedInputError, NotMatrixFormError
from netcalc.net import Net, NetMatrix, lift_net_of_nets, map_matrix, map_net, transpose
from tests.strategies import nets, point_maps


def test_net_must_be_total():
    with pytest.raises(MalformedInputError):
        Net(TruncatedNaturals(3), (1, 2))


def test_square_of_small_net():
    S = Net(FiniteDirectedSet.chain(range(3)), (1, 2, 3))
    assert map_net(lambda x: x * x, S).values == (1, 4, 9)


def test_composition_on_random_net():
    rng = random.Random(7)
    S = Net(TruncatedNaturals(5), tuple(rng.uniform(-2, 2) for _ in range(5)))
    f, g = (lambda x: 3 * x - 1), (lambda x: x * x)
    assert map_net(lambda x: g(f(x)), S) == map_net(g, map_net(f, S))


def test_partial_map_names_the_index():
    S = Net(TruncatedNaturals(3), (1.0, 0.0, 2.0))
    with pytest.raises(DomainError, match="index 1"):
        map_net(lambda x: 1 / x, S)


@given(nets())
def test_identity_law(S):
    assert map_net(lambda x: x, S) == S


@given(nets(), point_maps(), point_maps())
def test_composition_law(S, f, g):
    assert map_net(lambda x: g(f(x)), S) == map_net(g, map_net(f, S))


@given(nets(), point_maps())
def test_map_keeps_the_index(S, f):
    assert map_net(f, S).index is S.index


def test_tail_values_follow_the_order():
    S = Net(TruncatedNaturals(4), ("a", "b", "c", "d"))
    assert S.tail_values(2) == ["c", "d"]
    assert S(3) == "d"


def square(n):
    return NetMatrix.from_function(TruncatedNaturals(n), TruncatedNaturals(n),
                                   lambda d, e: 10 * d + e)


def test_transpose_is_an_involution():
    M = square(3)
    assert transpose(transpose(M)) == M


def test_transpose_swaps_entries():
    rng = random.Random(3)
    idx = TruncatedNaturals(4)
    M = NetMatrix(idx, idx, tuple(tuple(rng.random() for _ in range(4)) for _ in range(4)))
    assert transpose(M).entry(2, 1) == M.entry(1, 2)


def test_one_by_n_keeps_its_values():
    M = NetMatrix(TruncatedNaturals(1), TruncatedNaturals(4), ((1, 2, 3, 4),))
    T = transpose(M)
    assert (len(T.row_index), len(T.col_index)) == (4, 1)
    assert [r[0] for r in T.entries] == [1, 2, 3, 4]


def test_columns_and_rows_are_the_inner_and_transposed_nets():
    M = square(3)
    assert M.column(2).values == (2, 12, 22)
    assert M.row(1).values == (10, 11, 12)
    assert transpose(M).column(1) == M.row(1)


def test_lift_unfolds_inner_nets():
    idx = FiniteDirectedSet.chain((0, 1))
    S = Net(idx, (Net(idx, (1, 2)), Net(idx, (3, 4))))
    M = lift_net_of_nets(S)
    assert M.entries == ((1, 3), (2, 4))
    assert M.column(1) == S(1)


def test_lift_of_constant_net_has_equal_columns():
    inner = Net(TruncatedNaturals(3), (5, 6, 7))
    M = lift_net_of_nets(Net.constant(TruncatedNaturals(4), inner))
    assert all(M.column(e) == inner for e in M.col_index)


def test_lift_rejects_mixed_inner_indices():
    S = Net(TruncatedNaturals(2), (Net(TruncatedNaturals(2), (1, 2)),
                                   Net(TruncatedNaturals(3), (1, 2, 3))))
    with pytest.raises(NotMatrixFormError):
        lift_net_of_nets(S)


def test_lift_transpose_recovers_rows():
    idx = TruncatedNaturals(3)
    S = Net(idx, tuple(Net(idx, tuple(d * 10 + e for d in idx)) for e in idx))
    M = lift_net_of_nets(S)
    for d in idx:
        assert transpose(M).column(d).values == tuple(S(e)(d) for e in idx)


def test_map_matrix_is_entrywise():
    assert map_matrix(lambda x: -x, square(2)).entries == ((0, -1), (-10, -11))


@given(nets(points=st.tuples(st.integers(0, 3), st.integers(0, 3))))
def test_json_round_trip(S):
    assert Net.from_json(json.loads(json.dumps(S.to_json()))) == S


def test_matrix_json_round_trip():
    M = square(3)
    assert NetMatrix.from_json(json.loads(json.dumps(M.to_json()))) == M
