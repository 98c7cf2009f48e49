from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from seqcalc import combinatorics as comb
from seqcalc.catalog import (
    bell_dual,
    bell_dual_binomial,
    bell_dual_stirling,
    build_sequence,
    exp_seq,
    factorial_dual,
    kbonacci,
    parse_key,
    pq_fibonacci,
    trig_seq,
    xk_over_kfact,
    xk_over_kfact_operator,
)
from seqcalc.errors import DegenerateParameter, UnknownKey
from seqcalc.scalar import I, Scalar
from seqcalc.sequence import equal_prefix

KEYS = [
    "const:a=3", "x", "power:k=2", "xk:left:k=3", "xk:right:k=3", "exp:right:alpha=1/2",
    "exp:left:alpha=-1", "exp:natural_neg", "hyp:cosh:standard", "hyp:sinh:natural",
    "trig:cos:right", "trig:sin:left", "trig:tan:left", "trig:cos:periodic", "fib", "fib:nega",
    "fib:pq:P=2,Q=1", "fib:pell", "fib:jacobsthal", "kbonacci:k=3", "dual:factorial", "dual:bell",
    "comb:bell", "comb:fubini",
]


@pytest.mark.parametrize("text", KEYS)
def test_key_roundtrip(text):
    key = parse_key(text)
    again = parse_key(str(key))
    assert again == key
    assert build_sequence(key).prefix(10) == build_sequence(again).prefix(10)


def test_keys_are_canonicalised():
    assert str(parse_key("exp:right:alpha=2/4")) == "exp:right:alpha=1/2"
    assert str(parse_key(" power : k=02 ")) == "power:k=2"


@pytest.mark.parametrize("text", ["", "nope", "exp:up:alpha=1", "power", "power:k=x",
                                  "const:b=1", "trig:tan:periodic"])
def test_bad_keys(text):
    with pytest.raises(UnknownKey):
        parse_key(text)


def test_left_exponential_degenerate():
    with pytest.raises(DegenerateParameter):
        exp_seq("left", 1)


@given(st.integers(0, 8), st.sampled_from(["left", "right"]))
def test_xk_closed_form_matches_iterated_integrals(k, variant):
    assert equal_prefix(xk_over_kfact(k, variant), xk_over_kfact_operator(k, variant), 24)


def test_xk_right_example():
    assert build_sequence("xk:right:k=3").prefix(5) == [0, 1, 4, 10, 20]
    assert build_sequence("xk:left:k=3").prefix(8) == [0, 0, 0, 1, 4, 10, 20, 35]


def _kbonacci_oracle(k, count):
    a = [0] * (k - 1) + [1]
    while len(a) < count:
        a.append(sum(a[-k:]))
    return a[:count]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_kbonacci_against_plain_recurrence(k):
    assert [int(t) for t in kbonacci(k).prefix(40)] == _kbonacci_oracle(k, 40)


def test_pq_fibonacci_instances():
    assert pq_fibonacci(2, 1).prefix(8) == [0, 1, 2, 5, 12, 29, 70, 169]
    assert pq_fibonacci(1, 2).prefix(8) == [0, 1, 1, 3, 5, 11, 21, 43]


def test_trig_right_is_complex_exponential():
    c, s = trig_seq("cos", "right"), trig_seq("sin", "right")
    for n in range(20):
        assert c.term(n) + I * s.term(n) == (1 + I) ** n


def test_trig_left_pre_terms():
    assert trig_seq("cos", "left").term(-1) == 1
    assert trig_seq("sin", "left").term(-1) == -1


def test_factorial_dual_is_twice_fubini():
    assert [int(t) for t in factorial_dual().prefix(60)] == [2 * comb.fubini(n) for n in range(60)]


def test_bell_dual_constructions():
    for n in range(40):
        assert bell_dual_stirling(n) == bell_dual_binomial(n) == int(bell_dual().term(n))


def test_const_zero():
    assert build_sequence("const:a=0").prefix(3) == [0, 0, 0]
    assert build_sequence("const:a=1/2").term(-1) == Scalar(Fraction(1, 2))
