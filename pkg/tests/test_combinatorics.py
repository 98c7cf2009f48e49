"""Triangles against brute-force enumeration for n <= 6."""

from __future__ import annotations

import itertools
import math

import pytest

from seqcalc import combinatorics as comb


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def cycle_count(perm):
    seen, cycles = set(), 0
    for start in range(len(perm)):
        if start not in seen:
            cycles += 1
            j = start
            while j not in seen:
                seen.add(j)
                j = perm[j]
    return cycles


N = range(1, 7)


@pytest.mark.parametrize("n", N)
def test_eulerian_counts_rises(n):
    counts = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        counts[sum(perm[i] < perm[i + 1] for i in range(n - 1))] += 1
    assert [comb.eulerian(n, k) for k in range(n + 1)] == counts


@pytest.mark.parametrize("n", range(0, 7))
def test_stirling2_and_bell_count_partitions(n):
    blocks = [len(p) for p in set_partitions(list(range(n)))]
    assert [comb.stirling2(n, k) for k in range(n + 1)] == [blocks.count(k) for k in range(n + 1)]
    assert comb.bell(n) == len(blocks)
    # ordered set partitions
    assert comb.fubini(n) == sum(math.factorial(b) for b in blocks)


@pytest.mark.parametrize("n", range(0, 7))
def test_stirling1_counts_cycles(n):
    cycles = [cycle_count(p) for p in itertools.permutations(range(n))]
    assert [comb.stirling1_unsigned(n, k) for k in range(n + 1)] == [cycles.count(k) for k in range(n + 1)]


def test_binomial_matches_pascal():
    for n in range(30):
        assert [comb.binomial(n, k) for k in range(n + 1)] == list(comb.PASCAL.row(n))
    assert comb.binomial(4, 7) == 0
    assert comb.binomial(-1, 0) == 0


def test_small_values():
    assert comb.binomial(4, 2) == 6
    assert comb.eulerian(3, 1) == 4
    assert comb.eulerian(3, 2) == 1
    assert comb.stirling2(3, 2) == 3
    assert comb.stirling1_unsigned(3, 2) == 3
    assert comb.bell(3) == 5
    assert comb.fubini(5) == 541


def test_primes():
    assert comb.primes_upto(31) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    assert not comb.is_prime(1) and not comb.is_prime(25)


def test_classical_oracles():
    assert comb.classical_wilson_check(31).passed
    assert comb.classical_bell_congruence_check(13, 20).passed


def test_eulerian_domain():
    with pytest.raises(ValueError):
        comb.eulerian(0, 0)
    with pytest.raises(ValueError):
        comb.eulerian(3, 4)
