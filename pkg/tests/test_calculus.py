import pytest
from hypothesis import given, strategies as st

from netcalc.algebra import POINTWISE, UNIFORM
from netcalc.calculus import (
    QuotientNet,
    check_diff_theorem,
    difference_quotient,
    differentiate,
    increment_net,
    numeric_derivative,
    quotient_matrix,
)
from netcalc.directed import TruncatedNaturals
from netcalc.errors import DomainError, PreconditionError
from netcalc.families import function_net
from netcalc.funcspace import SampledFunction
from netcalc.net import Net
from netcalc.report import HYPOTHESIS_NOT_MET, PASS
from netcalc.space import Grid

DEPTH = 64
ANCHORS = (0.1015625, 0.30078125, 0.5, 0.69921875, 0.8984375)


@pytest.fixture(scope="module")
def grid():
    return Grid(0.0, 1.0, 257)


def test_square_quotient_example():
    f = SampledFunction.sample(Grid(0.0, 1.0, 5), lambda x: x * x)
    assert difference_quotient(f, 0.5, 0.25) == 1.25


def test_zero_increment_is_refused(grid):
    f = SampledFunction.sample(grid, lambda x: x)
    with pytest.raises(DomainError):
        difference_quotient(f, 0.5, 0.0)


def test_increments_must_stay_on_the_grid(grid):
    f = SampledFunction.sample(grid, lambda x: x)
    with pytest.raises(DomainError):
        QuotientNet(f, 0.5, Net(TruncatedNaturals(1), (0.75,)))


@given(st.integers(-8, 8), st.integers(-8, 8), st.integers(0, 255))
def test_linear_quotients_are_exact(a, b, i):
    grid = Grid(0.0, 1.0, 257)
    f = SampledFunction.sample(grid, lambda x: a * x + b)
    p = grid.points[i]
    Q = QuotientNet(f, p, increment_net(grid, p)).values
    assert set(Q.values) == {a}
    out = differentiate(f, p)
    assert out.converged and out.point == a


def test_increment_net_shape(grid):
    N = increment_net(grid, 0.5)
    assert N.values[0] == 64 * grid.step and N.values[-1] == grid.step
    assert increment_net(grid, 1.0).values[-1] == -grid.step
    two = increment_net(grid, 0.5, two_sided=True)
    assert two.values[:4] == (0.25, -0.25, 0.125, -0.125)


def test_kink_has_no_two_sided_derivative(grid):
    f = SampledFunction.sample(grid, lambda x: abs(x - 0.5))
    assert not differentiate(f, 0.5, increment_net(grid, 0.5, two_sided=True)).converged
    # one side alone sees a clean slope
    assert differentiate(f, 0.5).point == 1.0


@given(st.integers(0, 255), st.integers(1, 6))
def test_polynomial_quotient_error_is_first_order(i, e):
    # Taylor: |q - f'(p)| <= sup|f''| / 2 * |x| with sup|f''| = 6 on [0, 1]
    grid = Grid(0.0, 1.0, 257)
    f = SampledFunction.sample(grid, lambda x: x ** 3 - x)
    p = grid.points[i]
    x = grid.step * 2 ** min(e, 0 if i == 255 else int((255 - i).bit_length() - 1))
    q = difference_quotient(f, p, x)
    assert abs(q - (3 * p * p - 1)) <= 3 * abs(x) + 1e-12


@given(st.integers(1, 64))
def test_even_function_quotients_are_odd_at_zero(k):
    grid = Grid(-1.0, 1.0, 257)
    f = SampledFunction.sample(grid, lambda x: x * x)
    x = k * grid.step
    assert difference_quotient(f, 0.0, -x) == -difference_quotient(f, 0.0, x)
    # the truncated limit is the last quotient, one step to the left
    out = differentiate(f, 0.0, increment_net(grid, 0.0, two_sided=True))
    assert out.converged and abs(out.point) <= grid.step


def test_numeric_derivative_of_square(grid):
    d = numeric_derivative(SampledFunction.sample(grid, lambda x: x * x))
    assert d(0.5) == pytest.approx(1 + grid.step)
    assert d(1.0) == pytest.approx(2 - grid.step)


def test_quotient_matrix_layout(grid):
    S = function_net("x2_plus_x_over_n", grid, 4)
    N = increment_net(grid, 0.5)
    M = quotient_matrix(S, 0.5, N)
    assert M.entry(2, 3) == difference_quotient(S(3), 0.5, N(2))


@pytest.mark.parametrize("mode", [UNIFORM, POINTWISE])
def test_offset_square_derivatives_agree(grid, mode):
    S = function_net("x2_plus_x_over_n", grid, DEPTH)
    rep = check_diff_theorem(S, mode, ANCHORS)
    assert rep.passed
    for p, rec in zip(ANCHORS, rep):
        # derivative of the truncated limit x^2 + x/64, one grid step forward
        assert rec.lhs == pytest.approx(2 * p + grid.step + 1 / DEPTH)
        assert rec.residual <= 1e-6
    assert rep.records[2].lhs == 1.01953125


@pytest.mark.parametrize("mode", [UNIFORM, POINTWISE])
def test_oscillating_family_has_divergent_derivatives(grid, mode):
    S = function_net("sin_n2x_over_n", grid, DEPTH)
    rep = check_diff_theorem(S, mode, ANCHORS)
    for rec in rep:
        assert rec.verdict == HYPOTHESIS_NOT_MET
        assert rec.witness["stage"] == "derivative-net"
        assert rec.witness["derivative_tail_diameter"] > 1


def test_kink_anchor_is_a_precondition_error(grid):
    S = function_net("abs_kink", grid, 8)
    with pytest.raises(PreconditionError):
        check_diff_theorem(S, UNIFORM, (0.5,), kinks=(0.5,))
    assert check_diff_theorem(S, UNIFORM, (0.25,), kinks=(0.5,)).records[0].verdict == PASS
