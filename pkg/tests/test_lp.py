from fractions import Fraction
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from sagecircuits.lp import LPResult, LPStatus, feasible_combination, maximize_free, simplex
import pytest


def test_simplex_basic():
    # max x + y, x + 2y = 4, x, y >= 0
    res = simplex([[1, 2]], [4], [1, 1])
    assert res.status is LPStatus.OPTIMAL and res.value == 4 and res.maximizer == (4, 0)


def test_simplex_infeasible_and_unbounded():
    assert simplex([[1, 1]], [-1], [0, 0]).status is LPStatus.INFEASIBLE
    assert simplex([[1, -1]], [0], [1, 0]).status is LPStatus.UNBOUNDED


def test_simplex_redundant_rows():
    res = simplex([[1, 1], [2, 2]], [1, 2], [1, 0])
    assert res.value == 1


def test_maximize_free_no_rows():
    assert maximize_free([], [], [0, 0], 2).value == 0
    assert maximize_free([], [], [1, 0], 2).status is LPStatus.UNBOUNDED


def test_result_invariant():
    with pytest.raises(ValueError):
        LPResult(LPStatus.OPTIMAL)
    with pytest.raises(ValueError):
        LPResult(LPStatus.INFEASIBLE, Fraction(0), ())


def test_feasible_combination():
    assert feasible_combination([(1, 0), (0, 1)], (2, 3)) == (2, 3)
    assert feasible_combination([(1, 0), (0, 1)], (-1, 0)) is None
    assert feasible_combination([], (0, 0)) == ()


coef = st.integers(-4, 4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coef, coef), min_size=1, max_size=3), coef, coef)
def test_box_lp_matches_vertex_enumeration(cuts, c1, c2):
    # the box [-2, 2]^2 plus a few extra cuts through the origin side
    A = [(1, 0), (-1, 0), (0, 1), (0, -1)] + [tuple(r) for r in cuts]
    b = [2, 2, 2, 2] + [4] * len(cuts)
    res = maximize_free(A, b, (c1, c2), 2)
    grid = [Fraction(i, 2) for i in range(-4, 5)]
    feasible = [(x, y) for x, y in product(grid, grid)
                if all(a0 * x + a1 * y <= bi for (a0, a1), bi in zip(A, b))]
    assert res.status is LPStatus.OPTIMAL
    # the optimum dominates every feasible grid point and is itself feasible
    assert all(res.value >= c1 * x + c2 * y for x, y in feasible)
    x, y = res.maximizer
    assert all(a0 * x + a1 * y <= bi for (a0, a1), bi in zip(A, b))
