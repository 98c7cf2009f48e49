from __future__ import annotations

import threading
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from seqcalc.errors import BadSupportBound, DivisionByZero, MissingPreTerm
from seqcalc.scalar import Scalar
from seqcalc.sequence import (
    Sequence,
    diff_left,
    diff_right,
    div,
    equal_prefix,
    first_mismatch,
    first_mismatch_mod,
    insert,
    insert_pow,
    int_left,
    int_right,
    series_sum,
    shift,
    stride,
)

ints = st.lists(st.integers(-50, 50), min_size=12, max_size=12)
alphas = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))


def seq_of(values, pre=None):
    return Sequence.from_terms(values, pre_term=pre)


def test_prefix_memo_is_computed_once():
    calls = []

    def rule(n):
        calls.append(n)
        return n * n

    s = Sequence(rule)
    assert s.prefix(5) == [0, 1, 4, 9, 16]
    s.prefix(5)
    assert sorted(calls) == [0, 1, 2, 3, 4]


def test_concurrent_readers_agree():
    s = Sequence(lambda n: n ** 3)
    out = []
    threads = [threading.Thread(target=lambda: out.append(s.prefix(200))) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(o == out[0] for o in out)


def test_pre_term_required_for_left_difference():
    with pytest.raises(MissingPreTerm):
        diff_left(Sequence(lambda n: n)).term(0)


def test_division_by_zero_index():
    with pytest.raises(DivisionByZero) as exc:
        div(Sequence(lambda n: 1), Sequence(lambda n: n - 2)).prefix(4)
    assert exc.value.index == 2


@given(ints, alphas)
def test_left_difference_undoes_right_integral(values, alpha):
    s = seq_of(values)
    assert equal_prefix(diff_left(int_right(s, alpha)), s, 12)
    assert equal_prefix(diff_right(int_left(s, alpha)), s, 12)


@given(ints, st.integers(-5, 5), alphas)
def test_integral_of_difference(values, pre, alpha):
    s = seq_of(values, pre)
    a0 = s.term(0)
    assert equal_prefix(int_left(diff_right(s), alpha), s - a0 + alpha, 12)
    assert equal_prefix(int_right(diff_left(s), alpha), s - s.term(-1) + alpha, 12)


@given(ints, alphas)
def test_shift_and_insert(values, alpha):
    s = seq_of(values)
    assert equal_prefix(shift(insert(s, alpha), 1), s, 11)
    assert insert(s, alpha).term(0) == Scalar.coerce(alpha)
    assert equal_prefix(shift(insert_pow(s, 0, 3), 3), s, 9)


@given(ints)
def test_right_difference_is_shifted_left_difference(values):
    s = seq_of(values, 0)
    assert equal_prefix(diff_right(s), shift(diff_left(s), 1), 11)


def test_shift_keeps_a_lazy_pre_term():
    s = Sequence(lambda n: 10 + n, pre_term=7)
    t = shift(s, 2)
    assert t.term(-1) == 11
    assert shift(s, 1).term(-1) == 10


def test_stride():
    assert stride(Sequence(lambda n: n), 3).prefix(4) == [0, 3, 6, 9]


def test_series_sum_checks_its_support():
    family = lambda k: Sequence(lambda n: 1 if n >= k else 0)
    good = series_sum(family, lambda n: n)
    assert good.prefix(5) == [1, 2, 3, 4, 5]
    bad = series_sum(family, lambda n: n - 1)
    with pytest.raises(BadSupportBound):
        bad.term(3)


def test_first_mismatch_reports_values():
    mm = first_mismatch(Sequence(lambda n: n), Sequence(lambda n: n if n < 4 else 0), 10)
    assert (mm.index, mm.left, mm.right) == (4, 4, 0)
    assert first_mismatch_mod(Sequence(lambda n: n), Sequence(lambda n: n + 7), 20, 7) is None
