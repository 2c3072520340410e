from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sagecircuits.lp import LPStatus
from sagecircuits.polyhedra import (HPolyhedron, NotAConeError, VPolyhedron, dd_convert,
                                    lp_maximize, minkowski_sum, polar_cone, recession_cone,
                                    same_set, support_function)


def test_lp_half_line():
    res = lp_maximize(HPolyhedron([[-1]], [0]), [-1])
    assert res.status is LPStatus.OPTIMAL and res.value == 0 and res.maximizer == (0,)


def test_lp_zero_objective():
    assert lp_maximize(HPolyhedron([[1, 1]], [3]), [0, 0]).value == 0


def test_lp_shifted_orthant():
    X = HPolyhedron([[-1, 0], [0, -1]], [-1, -1])
    res = lp_maximize(X, [-1, -1])
    assert res.value == -2 and res.maximizer == (1, 1)


def test_lp_dimension_mismatch():
    with pytest.raises(ValueError):
        lp_maximize(HPolyhedron([[1, 0]], [1]), [1])


def test_support_function_unbounded():
    assert support_function(HPolyhedron([[-1]], [0]), [1]) == float("inf")


def test_orthant_to_v():
    V = dd_convert(HPolyhedron([[-1, 0], [0, -1]], [0, 0]))
    assert V.vertices == ((0, 0),)
    assert set(V.rays) == {(1, 0), (0, 1)}
    assert V.lineality == ()


def test_polar_of_n_beta_generators():
    V = VPolyhedron([(0, 0, 0)], [(-1, 0, 0), (0, 0, -1)], [(1, 1, 1)])
    H = dd_convert(V)
    # beta is index 1: {p0 <= p1, p2 <= p1}
    expected = HPolyhedron([[1, -1, 0], [0, -1, 1]], [0, 0])
    assert same_set(H, expected)
    assert len(H.A) == 2


def test_square_round_trip():
    sq = HPolyhedron([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0])
    V = dd_convert(sq)
    assert len(V.vertices) == 4
    H = dd_convert(V)
    assert len(H.A) == 4
    assert same_set(H, sq)


def test_empty_h_gives_empty_v():
    V = dd_convert(HPolyhedron.empty(2))
    assert V.is_empty()
    assert HPolyhedron.empty(2).is_empty()


def test_minkowski_examples():
    pt = VPolyhedron([(1, 2)], dim=2)
    cone = VPolyhedron([(0, 0)], [(1, 0)], dim=2)
    s = minkowski_sum(pt, cone)
    assert s.vertices == ((1, 2),) and s.rays == ((1, 0),)
    sq = minkowski_sum(VPolyhedron([(0, 0), (1, 0)]), VPolyhedron([(0, 0), (0, 1)]))
    assert len(sq.vertices) == 4
    assert len(dd_convert(dd_convert(sq)).vertices) == 4
    with pytest.raises(ValueError):
        minkowski_sum(pt, VPolyhedron([(0,)]))


def test_polar_cone_examples():
    H = polar_cone(VPolyhedron([(0, 0)], [(1, 0), (0, 1)]))
    assert same_set(H, HPolyhedron([[1, 0], [0, 1]], [0, 0]))
    H = polar_cone(VPolyhedron([(0, 0)], [(1, 1)]))
    assert same_set(H, HPolyhedron([[1, 1]], [0]))
    with pytest.raises(NotAConeError):
        polar_cone(VPolyhedron([(1, 0)]))


def test_polar_of_n_beta():
    # N_beta for beta = 0 in R^3: generators e1 - e0, e2 - e0
    H = polar_cone(VPolyhedron([(0, 0, 0)], [(-1, 1, 0), (-1, 0, 1)]))
    # inside the sum-zero hyperplane the polar is {p1 <= p0, p2 <= p0}
    assert H.contains((1, 0, 0)) and H.contains((5, 5, 5))
    assert not H.contains((0, 1, 0))


def test_recession_cone():
    R = recession_cone(HPolyhedron([[-1, 0], [0, -1]], [-1, -1]))
    assert same_set(R, HPolyhedron([[-1, 0], [0, -1]], [0, 0]))


def test_lineality_in_h_to_v():
    V = dd_convert(HPolyhedron([[1, -1]], [0]))
    assert len(V.lineality) == 1 and len(V.rays) == 1


pts = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=6)


@settings(max_examples=30, deadline=None)
@given(pts, st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(lambda r: r != (0, 0)),
                     max_size=2))
def test_round_trip_preserves_set(vertices, rays):
    V = VPolyhedron(vertices, rays, dim=2)
    H = dd_convert(V)
    assert same_set(V, H)
    V2 = dd_convert(H)
    assert same_set(V2, V)
    # canonical output is stable
    assert dd_convert(dd_convert(V2)) == V2


@settings(max_examples=30, deadline=None)
@given(pts, st.integers(-3, 3), st.integers(-3, 3), st.fractions(min_value=Fraction(1, 4), max_value=4,
                                                                 max_denominator=4))
def test_support_function_homogeneous_and_sublinear(vertices, y0, y1, t):
    H = dd_convert(VPolyhedron(vertices, dim=2))
    y, z = (y0, y1), (y1, -y0)
    sy = lp_maximize(H, y).value
    assert lp_maximize(H, (t * y0, t * y1)).value == t * sy
    sz = lp_maximize(H, z).value
    assert lp_maximize(H, (y0 + y1, y1 - y0)).value <= sy + sz
    assert sy == max(y0 * v[0] + y1 * v[1] for v in vertices)
