"""Exact combinatorial numbers: binomials, Eulerian, Stirling, Bell, Fubini.

Each triangle is grown row by row with its standard recurrence and cached.
Rows are appended whole, so concurrent readers only ever see complete rows.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

from .errors import InconsistentConstruction


class TriangleCache:
    """Append-only triangular table; ``row(n)`` has ``n + 1`` entries."""

    def __init__(self, first_row: list[int], next_row: Callable[[int, list[int]], list[int]]):
        self._rows: list[tuple[int, ...]] = [tuple(first_row)]
        self._next = next_row
        self._lock = threading.Lock()

    def row(self, n: int) -> tuple[int, ...]:
        rows = self._rows
        if n < len(rows):
            return rows[n]
        with self._lock:
            while len(rows) <= n:
                m = len(rows)
                new = tuple(self._next(m, list(rows[m - 1])))
                assert len(new) == m + 1
                rows.append(new)
        return rows[n]

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        return self.row(n)[k]


def _pascal_row(n: int, prev: list[int]) -> list[int]:
    return [1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1]


def _eulerian_row(n: int, prev: list[int]) -> list[int]:
    # A(n, k) = (k + 1) A(n-1, k) + (n - k) A(n-1, k-1); row n carries k = 0..n
    def a(k):
        return prev[k] if 0 <= k < len(prev) else 0
    if n == 1:
        return [1, 0]
    return [(k + 1) * a(k) + (n - k) * a(k - 1) for k in range(n + 1)]


def _stirling2_row(n: int, prev: list[int]) -> list[int]:
    def s(k):
        return prev[k] if 0 <= k < len(prev) else 0
    return [k * s(k) + s(k - 1) for k in range(n + 1)]


def _stirling1_row(n: int, prev: list[int]) -> list[int]:
    def s(k):
        return prev[k] if 0 <= k < len(prev) else 0
    return [(n - 1) * s(k) + s(k - 1) for k in range(n + 1)]


PASCAL = TriangleCache([1], _pascal_row)
EULERIAN = TriangleCache([1], _eulerian_row)
STIRLING2 = TriangleCache([1], _stirling2_row)
STIRLING1 = TriangleCache([1], _stirling1_row)


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, zero outside ``0 <= k <= n``.

    Delegates to :func:`math.comb`; :data:`PASCAL` is kept as an independent
    oracle for small rows.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def eulerian_explicit(n: int, k: int) -> int:
    """Alternating-sum closed form ``sum_l (-1)^l C(n+1, l) (k+1-l)^n``."""
    return sum((-1) ** l * binomial(n + 1, l) * (k + 1 - l) ** n for l in range(k + 2))


def eulerian(n: int, k: int) -> int:
    """Permutations of ``n`` elements with exactly ``k`` rises.

    The recurrence value is cross-checked against :func:`eulerian_explicit`.
    """
    if n < 1:
        raise ValueError("Eulerian numbers are defined here for n >= 1")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    value = EULERIAN(n, k)
    if value != eulerian_explicit(n, k):
        raise InconsistentConstruction(f"A({n},{k}): recurrence and explicit formula disagree")
    return value


def stirling2(n: int, k: int) -> int:
    """Set partitions of ``n`` elements into ``k`` blocks (``S(0,0) = 1``)."""
    return STIRLING2(n, k)


def stirling1_unsigned(n: int, k: int) -> int:
    """Permutations of ``n`` elements with ``k`` cycles."""
    return STIRLING1(n, k)


_factorials = [1]
_bells = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative number")
    with _fact_lock:
        while len(_factorials) <= n:
            _factorials.append(_factorials[-1] * len(_factorials))
    value = _factorials[n]
    if value != sum(STIRLING1.row(n)):
        raise InconsistentConstruction(f"{n}! differs from the first-kind Stirling row sum")
    return value


def bell(n: int) -> int:
    """``B(n)`` from ``B(m+1) = sum_k C(m, k) B(k)``, checked against ``sum_k S(n, k)``."""
    if n < 0:
        raise ValueError("Bell number of a negative index")
    with _fact_lock:
        while len(_bells) <= n:
            m = len(_bells) - 1
            _bells.append(sum(binomial(m, k) * _bells[k] for k in range(m + 1)))
    value = _bells[n]
    if value != sum(STIRLING2.row(n)):
        raise InconsistentConstruction(f"B({n}) differs from the second-kind Stirling row sum")
    return value


def fubini(n: int) -> int:
    """Ordered Bell number ``sum_k S(n, k) k!``."""
    return sum(stirling2(n, k) * factorial(k) for k in range(n + 1))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_upto(limit: int) -> list[int]:
    return [p for p in range(2, limit + 1) if is_prime(p)]


# -- classical modular oracles -----------------------------------------------------


@dataclass
class CheckReport:
    """Outcome of a scan: ``failures`` lists the offending parameter tuples."""

    name: str
    scanned: int = 0
    failures: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def classical_wilson_check(p_limit: int) -> CheckReport:
    """``(p-1)! = -1 (mod p)`` exactly when ``p`` is prime, for ``2 <= p <= p_limit``."""
    if p_limit < 2:
        raise ValueError("p_limit must be >= 2")
    report = CheckReport("wilson-classical")
    for p in range(2, p_limit + 1):
        holds = (factorial(p - 1) + 1) % p == 0
        report.scanned += 1
        if holds != is_prime(p):
            report.failures.append((p, factorial(p - 1) % p))
    return report


def classical_bell_congruence_check(p_limit: int, n_limit: int) -> CheckReport:
    """``B(n+p) = B(n) + B(n+1) (mod p)`` for primes ``p <= p_limit``, ``n <= n_limit``."""
    if p_limit < 2 or n_limit < 0:
        raise ValueError("need p_limit >= 2 and n_limit >= 0")
    report = CheckReport("bell-congruence-classical")
    for p in primes_upto(p_limit):
        for n in range(n_limit + 1):
            report.scanned += 1
            if (bell(n + p) - bell(n) - bell(n + 1)) % p:
                report.failures.append((p, n))
    return report
