"""Lazy exact sequences and the operator calculus on them.

A :class:`Sequence` maps ``n >= 0`` to a :class:`~seqcalc.scalar.Scalar`
through a deterministic rule, caching the computed prefix.  It may carry a
designated pre-term ``a(-1)``; the left differential needs it at ``n = 0`` and
raises :class:`~seqcalc.errors.MissingPreTerm` when it is absent.

Pre-terms propagate exactly one step: operators that can compute the result's
``a(-1)`` from their inputs' pre-terms attach it, all others leave it unset.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .errors import BadSupportBound, DivisionByZero, MissingPreTerm, NotIntegral
from .scalar import ZERO, ExtScalar, Infinity, Scalar, ext_div

Rule = Callable[[int], object]

DEFAULT_PREFIX = 64


def _coerce(value) -> ExtScalar:
    if isinstance(value, (Scalar, Infinity)):
        return value
    return Scalar.coerce(value)


class Sequence:
    """Memoized sequence ``a(0), a(1), ...`` with an optional pre-term.

    ``rule(n)`` is only ever called with ``n`` equal to the current cache
    length, so a rule may read earlier terms of its own sequence (see
    :meth:`recursive`).
    """

    def __init__(self, rule: Rule, pre_term=None, name: str | None = None,
                 pre_rule: Callable[[], object] | None = None):
        self._rule = rule
        self._memo: list[ExtScalar] = []
        self._lock = threading.RLock()
        self._pre = None if pre_term is None else _coerce(pre_term)
        self._pre_rule = pre_rule if pre_term is None else None
        self.name = name

    @property
    def has_pre_term(self) -> bool:
        return self._pre is not None or self._pre_rule is not None

    @property
    def pre_term(self) -> ExtScalar | None:
        """The value at index -1, computed on first access when lazy."""
        if self._pre is None and self._pre_rule is not None:
            with self._lock:
                if self._pre is None:
                    self._pre = _coerce(self._pre_rule())
        return self._pre

    @classmethod
    def recursive(cls, step: Callable[[Sequence, int], object], pre_term=None,
                  name: str | None = None) -> Sequence:
        """Sequence whose rule sees the sequence itself: ``step(seq, n)``."""
        seq = cls(lambda n: step(seq, n), pre_term=pre_term, name=name)
        return seq

    @classmethod
    def from_terms(cls, terms: Iterable, tail=None, pre_term=None,
                   name: str | None = None) -> Sequence:
        """Finite list of leading terms followed by ``tail`` (default zero)."""
        head = [_coerce(t) for t in terms]
        fill = ZERO if tail is None else _coerce(tail)
        return cls(lambda n: head[n] if n < len(head) else fill, pre_term=pre_term, name=name)

    def term(self, n: int) -> ExtScalar:
        if n < 0:
            if n == -1 and self.has_pre_term:
                return self.pre_term
            if n == -1:
                raise MissingPreTerm(self.name)
            raise IndexError(f"index {n} is out of range")
        memo = self._memo
        if n < len(memo):
            return memo[n]
        with self._lock:
            while len(memo) <= n:
                memo.append(_coerce(self._rule(len(memo))))
        return memo[n]

    __getitem__ = term

    def prefix(self, count: int) -> list[ExtScalar]:
        if count <= 0:
            return []
        self.term(count - 1)
        return list(self._memo[:count])

    def __iter__(self) -> Iterator[ExtScalar]:
        n = 0
        while True:
            yield self.term(n)
            n += 1

    def with_pre_term(self, value) -> Sequence:
        return Sequence(self.term, pre_term=value, name=self.name)

    def named(self, name: str) -> Sequence:
        self.name = name
        return self

    def __repr__(self) -> str:
        shown = ", ".join(str(t) for t in self.prefix(6))
        label = f"{self.name}: " if self.name else ""
        return f"<Sequence {label}{shown}, ...>"

    # -- operator sugar; the functions below are the primary API --------------

    def __add__(self, other):
        if isinstance(other, Sequence):
            return add(self, other)
        return scalar_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Sequence):
            return sub(self, other)
        return scalar_add(self, -Scalar.coerce(other))

    def __rsub__(self, other):
        return scalar_add(negate(self), other)

    def __mul__(self, other):
        if isinstance(other, Sequence):
            return mul(self, other)
        return scalar_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Sequence):
            return div(self, other)
        return scalar_mul(self, 1 / Scalar.coerce(other))

    def __neg__(self):
        return negate(self)

    def __pow__(self, m: int):
        return pow_int(self, m)


ExtSequence = Sequence  # terms may be signed infinities; same machinery


def _pre(*seqs: Sequence, combine: Callable[..., object]) -> Callable[[], object] | None:
    """Lazy pre-term of a derived sequence, present iff all inputs have one."""
    if all(s.has_pre_term for s in seqs):
        return lambda: combine(*(s.pre_term for s in seqs))
    return None


# -- shift and insertion -----------------------------------------------------------


def shift(s: Sequence, k: int = 1) -> Sequence:
    """``n -> s(n + k)``; for ``k >= 1`` the pre-term is ``s(k - 1)``."""
    if k < 0:
        raise ValueError("shift distance must be nonnegative")
    if k == 0:
        return s
    return Sequence(lambda n: s.term(n + k), pre_rule=lambda: s.term(k - 1))


def insert(s: Sequence, alpha=0) -> Sequence:
    """``alpha, s(0), s(1), ...``"""
    a = Scalar.coerce(alpha)
    return Sequence(lambda n: a if n == 0 else s.term(n - 1))


def insert_pow(s: Sequence, alpha=0, m: int = 1) -> Sequence:
    """``insert`` applied ``m`` times."""
    if m < 0:
        raise ValueError("insertion count must be nonnegative")
    a = Scalar.coerce(alpha)
    if m == 0:
        return s
    return Sequence(lambda n: a if n < m else s.term(n - m))


def stride(s: Sequence, step: int) -> Sequence:
    """``n -> s(step * n)``, e.g. ``{a(2n)}``."""
    return Sequence(lambda n: s.term(step * n))


# -- termwise algebra --------------------------------------------------------------


def add(s: Sequence, t: Sequence) -> Sequence:
    return Sequence(lambda n: s.term(n) + t.term(n),
                    pre_rule=_pre(s, t, combine=lambda a, b: a + b))


def sub(s: Sequence, t: Sequence) -> Sequence:
    return Sequence(lambda n: s.term(n) - t.term(n),
                    pre_rule=_pre(s, t, combine=lambda a, b: a - b))


def mul(s: Sequence, t: Sequence) -> Sequence:
    return Sequence(lambda n: s.term(n) * t.term(n),
                    pre_rule=_pre(s, t, combine=lambda a, b: a * b))


def _checked_div(num: Scalar, den: Scalar, n: int) -> Scalar:
    if den.is_zero():
        raise DivisionByZero(n)
    return num / den


def div(s: Sequence, t: Sequence) -> Sequence:
    return Sequence(lambda n: _checked_div(s.term(n), t.term(n), n),
                    pre_rule=_pre(s, t, combine=lambda a, b: _checked_div(a, b, -1)))


def ext_divide(s: Sequence, t: Sequence) -> ExtSequence:
    """Termwise quotient where ``x/0`` becomes a signed infinity."""
    return Sequence(lambda n: ext_div(s.term(n), t.term(n)))


def scalar_add(s: Sequence, alpha) -> Sequence:
    a = Scalar.coerce(alpha)
    return Sequence(lambda n: s.term(n) + a, pre_rule=_pre(s, combine=lambda p: p + a))


def scalar_mul(s: Sequence, alpha) -> Sequence:
    a = Scalar.coerce(alpha)
    return Sequence(lambda n: s.term(n) * a, pre_rule=_pre(s, combine=lambda p: p * a))


def negate(s: Sequence) -> Sequence:
    return scalar_mul(s, -1)


def inverse(s: Sequence) -> Sequence:
    one = Scalar(1)
    return Sequence(lambda n: _checked_div(one, s.term(n), n),
                    pre_rule=_pre(s, combine=lambda p: _checked_div(one, p, -1)))


def pow_int(s: Sequence, m: int) -> Sequence:
    """Termwise ``m``-th power, ``m >= 0`` (``0**0 == 1``)."""
    if m < 0:
        raise ValueError("use inverse() for negative powers")
    return Sequence(lambda n: s.term(n) ** m, pre_rule=_pre(s, combine=lambda p: p ** m))


def elementwise(s: Sequence, t: Sequence, op: str) -> Sequence:
    ops = {"add": add, "sub": sub, "mul": mul, "div": div}
    try:
        return ops[op](s, t)
    except KeyError:
        raise ValueError(f"unknown elementwise operation {op!r}") from None


# -- differentials and integrals -----------------------------------------------------


def diff_right(s: Sequence) -> Sequence:
    """``n -> s(n+1) - s(n)``"""
    return Sequence(lambda n: s.term(n + 1) - s.term(n),
                    pre_rule=_pre(s, combine=lambda p: s.term(0) - p))


def diff_left(s: Sequence) -> Sequence:
    """``n -> s(n) - s(n-1)``; needs the pre-term of ``s``."""
    if not s.has_pre_term:
        raise MissingPreTerm(s.name)
    return Sequence(lambda n: s.term(n) - s.term(n - 1))


def int_right(s: Sequence, alpha=0) -> Sequence:
    """``n -> alpha + s(0) + ... + s(n)``, pre-term ``alpha``."""
    a = Scalar.coerce(alpha)

    def step(acc: Sequence, n: int):
        return (a if n == 0 else acc.term(n - 1)) + s.term(n)

    return Sequence.recursive(step, pre_term=a)


def int_left(s: Sequence, alpha=0) -> Sequence:
    """``n -> alpha + s(0) + ... + s(n-1)``, pre-term ``alpha``."""
    a = Scalar.coerce(alpha)

    def step(acc: Sequence, n: int):
        return a if n == 0 else acc.term(n - 1) + s.term(n - 1)

    return Sequence.recursive(step, pre_term=a)


def iterate(op: Callable[[Sequence], Sequence], s: Sequence, times: int) -> Sequence:
    for _ in range(times):
        s = op(s)
    return s


# -- per-index series --------------------------------------------------------------


def series_sum(family: Callable[[int], Sequence], support_bound: Callable[[int], int]) -> Sequence:
    """``n -> sum_{k <= support_bound(n)} family(k)(n)``.

    The bound is not trusted: ``family(bound + 1)(n)`` must vanish, otherwise
    :class:`BadSupportBound` is raised.
    """
    members: dict[int, Sequence] = {}
    lock = threading.Lock()

    def member(k: int) -> Sequence:
        with lock:
            seq = members.get(k)
            if seq is None:
                seq = members[k] = family(k)
        return seq

    def rule(n: int):
        bound = support_bound(n)
        total = ZERO
        for k in range(bound + 1):
            total = total + member(k).term(n)
        if not member(bound + 1).term(n).is_zero():
            raise BadSupportBound(n, bound + 1)
        return total

    return Sequence(rule)


# -- comparison --------------------------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    index: int
    left: ExtScalar
    right: ExtScalar

    def __str__(self) -> str:
        return f"index {self.index}: {self.left} != {self.right}"


def first_mismatch(s: Sequence, t: Sequence, count: int = DEFAULT_PREFIX) -> Mismatch | None:
    for n in range(count):
        a, b = s.term(n), t.term(n)
        if a != b:
            return Mismatch(n, a, b)
    return None


def equal_prefix(s: Sequence, t: Sequence, count: int = DEFAULT_PREFIX) -> bool:
    return first_mismatch(s, t, count) is None


def _as_int(value: ExtScalar, n: int) -> int:
    if isinstance(value, Scalar) and value.is_integer():
        return int(value)
    raise NotIntegral(n, value)


def first_mismatch_mod(s: Sequence, t: Sequence, count: int, modulus: int) -> Mismatch | None:
    """Like :func:`first_mismatch` but compares integer terms modulo ``modulus``."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    for n in range(count):
        a, b = _as_int(s.term(n), n), _as_int(t.term(n), n)
        if (a - b) % modulus:
            return Mismatch(n, s.term(n), t.term(n))
    return None


def equal_prefix_mod(s: Sequence, t: Sequence, count: int, modulus: int) -> bool:
    return first_mismatch_mod(s, t, count, modulus) is None


def const(value) -> Sequence:
    v = Scalar.coerce(value)
    return Sequence(lambda n: v, pre_term=v, name=str(v))


def from_function(f: Callable[[int], object], pre_term=None, name: str | None = None) -> Sequence:
    return Sequence(f, pre_term=pre_term, name=name)


def as_fractions(values: Iterable[ExtScalar]) -> list[Fraction]:
    return [v.as_fraction() for v in values]
