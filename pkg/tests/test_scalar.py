from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from seqcalc.errors import NotReal, ScalarParseError, UnsupportedRadical
from seqcalc.scalar import (
    I,
    NEG_INF,
    ONE,
    POS_INF,
    SQRT2,
    ZERO,
    Scalar,
    ext_div,
    format_scalar,
    parse_ext_scalar,
    parse_scalar,
    sqrt_in_field,
)

fractions = st.builds(Fraction, st.integers(-999, 999), st.integers(1, 50))
scalars = st.builds(Scalar, fractions, fractions, fractions, fractions)
reals = st.builds(lambda a, b: Scalar(a, 0, b), fractions, fractions)


@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x * ONE == x


@given(scalars)
def test_inverse(x):
    assume(not x.is_zero())
    assert x * x.inverse() == ONE
    assert (1 / x) * x == ONE


@given(scalars)
def test_approx_is_a_ring_homomorphism(x):
    # float images must agree with the exact value, to rounding
    a, b, c, d = x.parts
    want = complex(a, b) + math.sqrt(2) * complex(c, d)
    assert cmath.isclose(x.approx(), want, rel_tol=1e-9, abs_tol=1e-9)


@given(reals)
def test_sign_matches_float(x):
    v = x.approx().real
    if abs(v) > 1e-9:
        assert x.sign() == (1 if v > 0 else -1)
    if x.is_zero():
        assert x.sign() == 0


def test_sign_needs_real():
    with pytest.raises(NotReal):
        I.sign()


@given(scalars)
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize("text, value", [
    ("5/4", Scalar(Fraction(5, 4))),
    ("-1/64", Scalar(Fraction(-1, 64))),
    ("1/sqrt2", Scalar(0, 0, Fraction(1, 2))),
    ("1+i", Scalar(1, 1)),
    ("(1-i)^-1", None),
])
def test_parse_examples(text, value):
    if value is None:
        with pytest.raises(ScalarParseError):
            parse_scalar(text)
    else:
        assert parse_scalar(text) == value


def test_formats():
    assert format_scalar(1 / SQRT2) == "1/sqrt2"
    assert format_scalar(-1 / SQRT2) == "-1/sqrt2"
    assert format_scalar(Scalar(Fraction(5, 4))) == "5/4"
    assert format_scalar(POS_INF) == "inf"
    assert format_scalar(NEG_INF) == "-inf"
    assert parse_ext_scalar("-inf") == NEG_INF


def test_euler_powers():
    assert (1 + I) ** 4 == -4
    assert (1 - I) ** -4 == Scalar(Fraction(-1, 4))


def test_ext_div():
    assert ext_div(1, 0) == POS_INF
    assert ext_div(-2, 0) == NEG_INF
    assert ext_div(3, 6) == Scalar(Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        ext_div(0, 0)


@given(fractions, st.booleans())
def test_sqrt_in_field_of_a_square(q, times_sqrt2):
    # radicands of the form s^2 or 2 s^2 are supported
    x = Scalar(0, 0, q) if times_sqrt2 else Scalar(q)
    r = sqrt_in_field(x * x)
    assert r * r == x * x
    assert r.sign() >= 0


def test_sqrt_in_field_unsupported():
    assert sqrt_in_field(Scalar(Fraction(1, 2))) == 1 / SQRT2
    with pytest.raises(UnsupportedRadical):
        sqrt_in_field(3)
