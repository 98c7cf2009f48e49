from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from seqcalc import summation as sm
from seqcalc.combinatorics import fubini
from seqcalc.errors import NoConvergenceCertificate, OutsideBorelRegion
from seqcalc.scalar import Scalar

HALF = Fraction(1, 2)


@pytest.mark.parametrize("n", range(0, 13))
def test_tail_bracket_brackets_twice_fubini(n):
    stream = sm.poly_geometric_stream([0] * n + [1], HALF)
    res = sm.tail_bracketed_sum(stream, 1)
    assert res.bound <= sm.DEFAULT_EPS
    assert res.brackets(2 * fubini(n))


def test_tail_bracket_matches_closed_form():
    stream = sm.poly_geometric_stream([1, 1], HALF)
    res = sm.tail_bracketed_sum(stream, 1, Fraction(1, 2 ** 30))
    assert res.brackets(4)
    assert sm.poly_geometric_closed([1, 1], HALF) == 4


def test_exact_finite():
    res = sm.tail_bracketed_sum(sm.geometric_stream(0), 1)
    assert res.method == "exact_finite" and res.value == 1 and res.bound == 0


def test_declared_growth_holds():
    for stream in (sm.geometric_stream(-1), sm.poly_geometric_stream([1, 2, 3], Fraction(-1, 3)),
                   sm.binomial_stream(5, -1), sm.binomial_stream(0, 2)):
        assert stream.spot_check() == []


def test_abel_grandi_and_alternating():
    grandi = sm.abel_limit_check(sm.geometric_stream(-1), HALF, lambda m: Fraction(1, 2 ** (m + 1)))
    alt = sm.abel_limit_check(sm.poly_geometric_stream([1, 1], -1), Fraction(1, 4),
                              lambda m: Fraction(1, 2 ** (m + 1)))
    assert grandi.passed and alt.passed
    assert len(grandi.rows) == 20


def test_abel_refuses_outside_the_disc():
    with pytest.raises(NoConvergenceCertificate):
        sm.abel_evaluate(sm.geometric_stream(-2), Fraction(3, 4))
    rep = sm.abel_limit_check(sm.geometric_stream(-2), Fraction(1, 3), lambda m: Fraction(1, 2 ** m))
    assert not rep.passed and rep.witness.m == 1


def test_borel():
    assert sm.borel_sum(sm.geometric_stream(-2)).value == Fraction(1, 3)
    assert sm.borel_sum(sm.poly_geometric_stream([1, 1], -1)).value == Fraction(1, 4)
    with pytest.raises(OutsideBorelRegion):
        sm.borel_sum(sm.geometric_stream(2))


@pytest.mark.parametrize("n", range(1, 9))
def test_binomial_stream_abel(n):
    target = Fraction(1, 2 ** n)
    rep = sm.abel_limit_check(sm.binomial_stream(n, -1), target, lambda m: Fraction(n, 2 ** m))
    assert rep.passed


coeffs = st.lists(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4)), min_size=1, max_size=6)


@given(coeffs, coeffs)
def test_fps_product_is_cauchy(a, b):
    order = 5
    fa, fb = sm.FormalPowerSeries(a, order), sm.FormalPowerSeries(b, order)
    prod = fa * fb
    for n in range(order + 1):
        want = sum(fa[k] * fb[n - k] for k in range(n + 1))
        assert prod[n] == want


@given(coeffs)
def test_fps_reciprocal(a):
    if a[0] == 0:
        a = [Fraction(1)] + a[1:]
    f = sm.FormalPowerSeries(a, 6)
    assert f * f.reciprocal() == sm.FormalPowerSeries.constant(1, 6)


def test_fps_exp_laws():
    t = sm.FormalPowerSeries.variable(8)
    e = (t + t * t).exp()
    assert e * (-(t + t * t)).exp() == sm.FormalPowerSeries.constant(1, 8)
    assert sm.exp_series(6).egf_terms() == [1] * 7


def test_egf_numbers():
    assert sm.bell_egf(8).egf_terms() == [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    assert sm.bell_dual_egf(9).egf_terms() == [1, 2, 7, 34, 209, 1546, 13327, 130922, 1441729, 17572114]


def test_modulus_helpers():
    z = Scalar(3, 4)
    assert sm.modulus_squared(z) == 25
    assert sm.modulus_le(z, 5) and not sm.modulus_le(z, Fraction(49, 10))
