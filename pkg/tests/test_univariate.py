import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from sagecircuits.certify import Signomial, Status, grid_min, sage_membership
from sagecircuits.circuits import enumerate_circuits
from sagecircuits.reduced import reduce
from sagecircuits.univariate import (HALF_LINE, ExtremeRatioError, ExtremeType, SortedAlphas,
                                     classify_extreme, extreme_generator, minimizer,
                                     rational_power, univariate_circuits, univariate_reduced)


def test_sorted_alphas_validation():
    assert SortedAlphas([0, "1/2", 2]).m == 3
    with pytest.raises(ValueError):
        SortedAlphas([0, 0, 1])
    with pytest.raises(ValueError):
        SortedAlphas([])


def test_circuit_counts():
    for m in range(1, 7):
        a = SortedAlphas(range(m))
        assert len(univariate_circuits(a)) == math.comb(m, 2) + math.comb(m, 3)
        assert len(univariate_reduced(a)) == max(m - 1, 0)


def test_closed_forms_match_enumeration():
    a = SortedAlphas([0, F(1, 3), 1, F(5, 2)])
    assert univariate_circuits(a) == sorted(enumerate_circuits(a.support(), HALF_LINE),
                                            key=lambda c: (c.beta, c.lam))
    assert univariate_reduced(a) == sorted(reduce(enumerate_circuits(a.support(), HALF_LINE)).circuits,
                                           key=lambda c: (c.beta, c.lam))


@pytest.mark.parametrize("x,e,want", [(F(4), F(1, 2), F(2)), (F(27, 8), F(2, 3), F(9, 4)),
                                      (F(2), F(1, 2), None), (F(1, 9), F(3, 2), F(1, 27))])
def test_rational_power(x, e, want):
    assert rational_power(x, e) == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**12), st.integers(2, 9))
def test_rational_power_of_perfect_powers(base, k):
    assert rational_power(F(base ** k), F(1, k)) == base


def test_extreme_generator_exact_values():
    f = extreme_generator(SortedAlphas([0, 1, 2]), 1, 1, 1)
    assert f.coeffs == (1, -2, 1)
    g = extreme_generator(SortedAlphas([0, 1, 3]), 1, 2, 1)
    assert g.coeffs == (2, -3, 1)
    h = extreme_generator(SortedAlphas([0, 1, 2]), 1, 2, 1)
    assert not h.exact  # -2*sqrt(2) has no rational form
    assert h.coeffs[1] == pytest.approx(-2 * math.sqrt(2))


def test_extreme_generator_vanishes_at_minimizer():
    a = SortedAlphas([0, F(1, 2), 1, 3])
    f = extreme_generator(a, 2, 0.9, 0.2)
    x = minimizer(a, 2, 0.9, 0.2)
    assert x >= 0
    assert f([x]) == pytest.approx(0, abs=1e-12)


def test_extreme_generator_rejects():
    a = SortedAlphas([0, 1, 2])
    with pytest.raises(ExtremeRatioError):
        extreme_generator(a, 1, 1, 2)
    with pytest.raises(IndexError):
        extreme_generator(a, 0, 1, 1)
    with pytest.raises(ValueError):
        extreme_generator(a, 1, -1, 1)


def test_classification_examples():
    a = SortedAlphas([0, 1, 2])
    s = a.support()
    assert classify_extreme(Signomial(s, [3, 0, 0]), a) is ExtremeType.TYPE1
    assert classify_extreme(Signomial(s, [-1, 1, 0]), a) is ExtremeType.TYPE2
    assert classify_extreme(Signomial(s, [1, -2, 1]), a) is ExtremeType.TYPE3
    assert classify_extreme(Signomial(s, [1, -1, 1]), a) is ExtremeType.NOT_EXTREME
    assert classify_extreme(Signomial(s, [0, 0, 1]), a) is ExtremeType.NOT_EXTREME
    assert classify_extreme(Signomial(s, [1, -3, 1]), a) is ExtremeType.NOT_MEMBER
    assert classify_extreme(Signomial(s, [0, -1, 1]), a) is ExtremeType.NOT_EXTREME


def test_classification_float_generator():
    a = SortedAlphas([0, 1, 2, 4])
    f = extreme_generator(a, 2, 1.3, 0.4)
    assert classify_extreme(f, a) is ExtremeType.TYPE3


def test_classification_support_mismatch():
    with pytest.raises(ValueError):
        classify_extreme(Signomial(SortedAlphas([0, 1]).support(), [1, 0]), SortedAlphas([0, 2]))


def test_generator_is_boundary_member():
    a = SortedAlphas([0, 1, F(5, 2), 4])
    f = extreme_generator(a, 1, F(3), F(1, 2))
    res = sage_membership(f, univariate_reduced(a))
    assert res.status is Status.MEMBER and abs(res.slack) < 1e-6
    assert grid_min(f, [(0, 20)], 20_001)[0] >= -1e-9
