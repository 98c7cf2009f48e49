"""Registry of executable identities over the sequence calculus.

Every entry pairs a short statement with a check.  Checks compare exact
prefixes, residues, tail-bracketed or Abel-evaluated sums, or scan a parameter
range.  Entries flagged as discrepancies encode a literal reading that is
known to disagree with the computed values; they report
``documented-discrepancy`` while the disagreement reproduces and ``fail`` if
it ever stops reproducing.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

from . import combinatorics as comb
from . import summation as sm
from .catalog import (
    bell_dual,
    bell_dual_binomial,
    bell_dual_stirling,
    const_seq,
    deformed_integral,
    exp_seq,
    factorial_dual,
    fibonacci_seq,
    hyperbolic_seq,
    kbonacci,
    negafibonacci_seq,
    pq_fibonacci,
    power_seq,
    tan_seq,
    trig_seq,
    x_seq,
    xk_over_kfact_closed,
    xk_over_kfact_operator,
)
from .errors import NoConvergenceCertificate, OutsideBorelRegion, UnknownKey
from .scalar import I, ONE, ZERO, Scalar, parse_scalar, format_scalar
from .sequence import (
    DEFAULT_PREFIX,
    Mismatch,
    Sequence,
    diff_left,
    diff_right,
    first_mismatch,
    first_mismatch_mod,
    insert,
    insert_pow,
    int_left,
    int_right,
    inverse,
    series_sum,
    shift,
    stride,
)

PASS = "pass"
FAIL = "fail"
DOCUMENTED = "documented-discrepancy"


# -- report types ------------------------------------------------------------------


@dataclass
class Outcome:
    """Raw result of a check before the registry assigns a status."""

    ok: bool
    mismatch: Mismatch | None = None
    scanned: int = 0
    detail: str = ""


@dataclass
class VerificationReport:
    key: str
    status: str
    mode: str
    params: dict
    first_mismatch: dict | None
    scanned: int
    elapsed_ms: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        """True for ``pass`` and for a reproduced documented discrepancy."""
        return self.status in (PASS, DOCUMENTED)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class IdentitySpec:
    key: str
    statement: str
    mode: str
    check: Callable[[dict], Outcome]
    defaults: dict = field(default_factory=dict)
    discrepancy: bool = False


REGISTRY: dict[str, IdentitySpec] = {}


def identity(key: str, statement: str, mode: str, discrepancy: bool = False, **defaults):
    def wrap(fn: Callable[[dict], Outcome]):
        if key in REGISTRY:
            raise ValueError(f"duplicate identity key {key!r}")
        REGISTRY[key] = IdentitySpec(key, statement, mode, fn, defaults, discrepancy)
        return fn
    return wrap


# -- check helpers -------------------------------------------------------------------


def _seq(values: Iterable) -> Sequence:
    return Sequence.from_terms(list(values))


def compare(lhs: Sequence, rhs: Sequence, count: int, label: str = "") -> Outcome:
    mm = first_mismatch(lhs, rhs, count)
    return Outcome(mm is None, mm, count, label if mm is not None else "")


def compare_all(cases: Iterable[tuple[str, Callable[[], Sequence], Callable[[], Sequence]]],
                count: int) -> Outcome:
    """Compare several (label, lhs, rhs) builders; stop at the first failure."""
    scanned = 0
    labels = []
    for label, lhs, rhs in cases:
        out = compare(lhs(), rhs(), count, label)
        scanned += out.scanned
        labels.append(label)
        if not out.ok:
            out.scanned = scanned
            return out
    return Outcome(True, None, scanned, f"cases: {', '.join(labels)}" if len(labels) > 1 else "")


def values_equal(pairs: Iterable[tuple[str, object, object]]) -> Outcome:
    """Exact equality of labelled scalar facts; index counts the fact position."""
    scanned = 0
    for i, (label, got, want) in enumerate(pairs):
        scanned += 1
        got, want = Scalar.coerce(got), Scalar.coerce(want)
        if got != want:
            return Outcome(False, Mismatch(i, got, want), scanned, label)
    return Outcome(True, None, scanned)


def _scalars(values) -> list[Scalar]:
    if isinstance(values, str):
        values = [v for v in values.split(";") if v.strip()]
    return [v if isinstance(v, Scalar) else parse_scalar(str(v)) for v in values]


def _ints(values) -> list[int]:
    if isinstance(values, int):
        return [values]
    if isinstance(values, str):
        return [int(v) for v in values.replace(";", ",").split(",") if v.strip()]
    return [int(v) for v in values]


class _Iterated:
    """Cache of ``{x^k/k!}`` built by iterated integrals, shared across checks."""

    def __init__(self, variant: str):
        self.variant = variant
        self._integral = int_left if variant == "left" else int_right
        self._seqs: list[Sequence] = [xk_over_kfact_operator(0, variant),
                                      xk_over_kfact_operator(1, variant)]

    def __call__(self, k: int) -> Sequence:
        # each level wraps the previous one, so memoized lower levels keep the
        # evaluation depth flat when k grows one step at a time
        seqs = self._seqs
        while len(seqs) <= k:
            seqs.append(self._integral(seqs[-1], 0))
        return seqs[k]


def _probe() -> Sequence:
    """Deterministic integer test sequence 1, 3, 2, 5, 6, 4, ... with a(-1) = 0."""
    head = [1, 3, 2, 5, 6, 4]
    return Sequence(lambda n: head[n] if n < 6 else (7 * n * n + 3 * n + 1) % 11 - 5,
                    pre_term=0, name="probe")


def _geom(r) -> Sequence:
    return exp_seq("right", Scalar.coerce(r) - 1)


def _scaled_sum(family: Callable[[int], Sequence], coeff: Callable[[int], Scalar],
                support: Callable[[int], int]) -> Sequence:
    return series_sum(lambda k: coeff(k) * family(k), support)


# -- operator relations --------------------------------------------------------------

_ALPHAS_REL = ("0", "3/2", "i")


def _relation(key: str, statement: str, build: Callable[[Sequence, Scalar], tuple[Sequence, Sequence]],
              discrepancy: bool = False) -> None:
    @identity(key, statement, "exact_prefix", discrepancy=discrepancy, N=DEFAULT_PREFIX,
              alpha=_ALPHAS_REL)
    def check(p):
        cases = []
        for a in _scalars(p["alpha"]):
            cases.append((f"alpha={a}", *(lambda a=a: (lambda: build(_probe(), a)[0],
                                                       lambda: build(_probe(), a)[1]))()))
        return compare_all(cases, p["N"])


_relation("calc-relations-1", "D_L I_R^alpha s = s",
          lambda s, a: (diff_left(int_right(s, a)), s))
_relation("calc-relations-2", "I_R^alpha D_L s = s - a(-1) + alpha",
          lambda s, a: (int_right(diff_left(s), a), s - s.term(-1) + a))
_relation("calc-relations-3", "D_R I_L^alpha s = s",
          lambda s, a: (diff_right(int_left(s, a)), s))
_relation("calc-relations-4", "I_L^alpha D_R s = s - a(0) + alpha",
          lambda s, a: (int_left(diff_right(s), a), s - s.term(0) + a))
_relation("calc-relations-5", "D_R I_R^alpha s = S_1 s",
          lambda s, a: (diff_right(int_right(s, a)), shift(s, 1)))
_relation("calc-relations-6", "I_R^alpha D_R s = S_1 s - a(0) + alpha",
          lambda s, a: (int_right(diff_right(s), a), shift(s, 1) - s.term(0) + a))
_relation("calc-relations-7", "S_1 D_L I_L^alpha s = s",
          lambda s, a: (shift(diff_left(int_left(s, a)), 1), s))
_relation("calc-relations-8", "S_1 I_L^alpha D_L s = s - a(-1) + alpha",
          lambda s, a: (shift(int_left(diff_left(s), a), 1), s - s.term(-1) + a))
_relation("calc-relations-8-literal",
          "literal form S_1 I_L^alpha D_L s = s - a(0) + alpha; differs whenever a(-1) != a(0)",
          lambda s, a: (shift(int_left(diff_left(s), a), 1), s - s.term(0) + a),
          discrepancy=True)
_relation("calc-right-diff-is-shifted-left", "D_R s = S_1 D_L s",
          lambda s, a: (diff_right(s), shift(diff_left(s), 1)))
_relation("calc-right-int-is-shifted-left", "I_R^alpha s = S_1 I_L^alpha s",
          lambda s, a: (int_right(s, a), shift(int_left(s, a), 1)))
_relation("calc-shift-undoes-insert", "S_1 I_alpha s = s",
          lambda s, a: (shift(insert(s, a), 1), s))


# -- power function --------------------------------------------------------------------


@identity("power-law-exponent", "{n^a} {n^b} = {n^(a+b)}", "exact_prefix", N=DEFAULT_PREFIX, max_exponent=4)
def _power_law(p):
    top = p["max_exponent"]
    cases = [(f"a={a},b={b}", lambda a=a, b=b: power_seq(a) * power_seq(b),
              lambda a=a, b=b: power_seq(a + b))
             for a in range(top + 1) for b in range(top + 1)]
    return compare_all(cases, p["N"])


@identity("power-law-power", "{n^a}^b = {n^(ab)}", "exact_prefix", N=DEFAULT_PREFIX, max_exponent=4)
def _power_power(p):
    top = p["max_exponent"]
    cases = [(f"a={a},b={b}", lambda a=a, b=b: power_seq(a) ** b, lambda a=a, b=b: power_seq(a * b))
             for a in range(top + 1) for b in range(top + 1)]
    return compare_all(cases, p["N"])


@identity("binomial-seq", "({1} + {n})^m = sum_k C(m,k) {1}^(m-k) {n}^k", "exact_prefix",
          N=DEFAULT_PREFIX, n=tuple(range(9)))
def _binomial(p):
    one, x = const_seq(1), x_seq()

    def rhs(m: int) -> Sequence:
        total = const_seq(0)
        for k in range(m + 1):
            total = total + comb.binomial(m, k) * (one ** (m - k)) * (x ** k)
        return total

    cases = [(f"m={m}", lambda m=m: (one + x) ** m, lambda m=m: rhs(m)) for m in _ints(p["n"])]
    return compare_all(cases, p["N"])


# -- x^k/k! -------------------------------------------------------------------------------

_LEFT = _Iterated("left")
_RIGHT = _Iterated("right")


@identity("xk-left-iterated-integrals", "{x^k/k!}_L is the (k-1)-fold I_L^0 of {n}, i.e. C(n,k)",
          "exact_prefix", N=DEFAULT_PREFIX, k=tuple(range(9)))
def _xk_left(p):
    cases = [(f"k={k}", lambda k=k: _LEFT(k), lambda k=k: xk_over_kfact_closed(k, "left"))
             for k in _ints(p["k"])]
    return compare_all(cases, p["N"])


@identity("xk-right-iterated-integrals", "{x^k/k!}_R is the (k-1)-fold I_R^0 of {n}, i.e. C(n+k-1,k)",
          "exact_prefix", N=DEFAULT_PREFIX, k=tuple(range(9)))
def _xk_right(p):
    cases = [(f"k={k}", lambda k=k: _RIGHT(k), lambda k=k: xk_over_kfact_closed(k, "right"))
             for k in _ints(p["k"])]
    return compare_all(cases, p["N"])


@identity("xk-right-is-shifted-left", "{x^k/k!}_R = S_(k-1) {x^k/k!}_L", "exact_prefix",
          N=DEFAULT_PREFIX, k=tuple(range(1, 9)))
def _xk_shift(p):
    cases = [(f"k={k}", lambda k=k: _RIGHT(k), lambda k=k: shift(_LEFT(k), k - 1))
             for k in _ints(p["k"])]
    return compare_all(cases, p["N"])


@identity("xk-worked-values", "I_L^0 iterates of {n} and I_R^0 iterates of {n} match the reference lists",
          "exact_prefix")
def _xk_worked(p):
    listed = [
        (_LEFT(2), [0, 0, 1, 3, 6, 10]),
        (_LEFT(3), [0, 0, 0, 1, 4, 10, 20]),
        (_LEFT(4), [0, 0, 0, 0, 1, 5, 15, 35]),
        (_RIGHT(2), [0, 1, 3, 6, 10]),
        (_RIGHT(3), [0, 1, 4, 10, 20]),
        (_RIGHT(4), [0, 1, 5, 15, 35]),
    ]
    cases = [(f"list {i}", lambda s=s: s, lambda v=v: _seq(v)) for i, (s, v) in enumerate(listed)]
    scanned = 0
    for label, lhs, rhs in cases:
        count = len(listed[int(label.split()[1])][1])
        out = compare(lhs(), rhs(), count, label)
        scanned += count
        if not out.ok:
            return out
    return Outcome(True, None, scanned)


# -- Eulerian relations ------------------------------------------------------------------


def _eulerian_shift_rhs(m: int) -> Sequence:
    total = const_seq(0)
    for k in range(m):
        total = total + comb.eulerian(m, k) * shift(_LEFT(m), k)
    return total


def _eulerian_insert_rhs(m: int) -> Sequence:
    total = const_seq(0)
    for k in range(m):
        total = total + comb.eulerian(m, k) * insert_pow(_RIGHT(m), 0, m - 1 - k)
    return total


@identity("eulerian-shift", "{n^m} = sum_{k<m} A(m,k) S_k {x^m/m!}_L", "exact_prefix",
          N=DEFAULT_PREFIX, m=tuple(range(1, 9)))
def _eulerian_shift(p):
    cases = [(f"m={m}", lambda m=m: power_seq(m), lambda m=m: _eulerian_shift_rhs(m))
             for m in _ints(p["m"])]
    return compare_all(cases, p["N"])


@identity("eulerian-insert", "{n^m} = sum_{k<m} A(m,k) I_0^(m-1-k) {x^m/m!}_R", "exact_prefix",
          N=DEFAULT_PREFIX, m=tuple(range(1, 9)))
def _eulerian_insert(p):
    cases = [(f"m={m}", lambda m=m: power_seq(m), lambda m=m: _eulerian_insert_rhs(m))
             for m in _ints(p["m"])]
    return compare_all(cases, p["N"])


@identity("eulerian-n3", "A(3,k) = 1, 4, 1, 0 and {n^3} = {x^3/3!}_L + 4 S_1 {x^3/3!}_L + S_2 {x^3/3!}_L",
          "exact_prefix", N=DEFAULT_PREFIX)
def _eulerian_n3(p):
    out = values_equal([(f"A(3,{k})", comb.eulerian(3, k), v) for k, v in enumerate([1, 4, 1, 0])])
    if not out.ok:
        return out
    x3 = _LEFT(3)
    rhs = x3 + 4 * shift(x3, 1) + shift(x3, 2)
    squares = compare(power_seq(2), _LEFT(2) + shift(_LEFT(2), 1), p["N"], "{n^2} split")
    if not squares.ok:
        return squares
    return compare(power_seq(3), rhs, p["N"], "n=3")


# -- exponential families ------------------------------------------------------------------


def _left_series(coeff: Callable[[int], Scalar], family=_LEFT) -> Sequence:
    return series_sum(lambda k: coeff(k) * family(k), lambda n: n)


@identity("exp-right-def", "D_R {2^n} = {2^n}", "exact_prefix", N=DEFAULT_PREFIX)
def _exp_def(p):
    e = exp_seq("right", 1)
    return compare(diff_right(e), e, p["N"])


@identity("exp-maclaurin-L1", "{2^n} = {1} + {n} + I_L^0 {n} + I_L^0 I_L^0 {n} + ... (iterated integrals)",
          "exact_prefix", N=DEFAULT_PREFIX)
def _exp_l1(p):
    return compare(exp_seq("right", 1), _left_series(lambda k: ONE), p["N"])


@identity("exp-maclaurin-L2", "{2^n} = sum_k {x^k/k!}_L (closed forms C(n,k))", "exact_prefix",
          N=DEFAULT_PREFIX)
def _exp_l2(p):
    return compare(exp_seq("right", 1),
                   series_sum(lambda k: xk_over_kfact_closed(k, "left"), lambda n: n), p["N"])


def _tail_per_index(target: Sequence, stream_for: Callable[[int], sm.CoefficientStream],
                    count: int, eps) -> Outcome:
    """For each index, bracket the per-index series and require the target inside."""
    for n in range(count):
        stream = stream_for(n)
        bad = stream.spot_check(16)
        if bad:
            return Outcome(False, None, n, f"index {n}: declared growth violated at k={bad[0]}")
        try:
            res = sm.tail_bracketed_sum(stream, 1, eps)
        except NoConvergenceCertificate as exc:
            return Outcome(False, None, n, f"index {n}: {exc}")
        if not res.brackets(target.term(n)):
            return Outcome(False, Mismatch(n, res.value, target.term(n)), n + 1,
                           f"index {n}: bracket radius {res.bound}")
    return Outcome(True, None, count, f"tail bound <= {eps} at every index")


def _right_stream(n: int, r, family: Callable[[int], Sequence] | None) -> sm.CoefficientStream:
    """Per-index series sum_k r^k {x^k/k!}_R(n): built from ``family`` or the closed form."""
    r = Scalar.coerce(r)
    stream = sm.binomial_stream(n, r)
    if family is None:
        return stream
    stream.rule = lambda k: r ** k * family(k).term(n)
    return stream


@identity("exp-maclaurin-R1", "{2^n} = {1} + 1/2 {n} + 1/4 I_R^0 {n} + ... (iterated integrals, per-index tail bracket)",
          "tail_bracketed", N=12, eps=sm.DEFAULT_EPS)
def _exp_r1(p):
    return _tail_per_index(exp_seq("right", 1), lambda n: _right_stream(n, Fraction(1, 2), _RIGHT),
                           p["N"], p["eps"])


@identity("exp-maclaurin-R2", "{2^n} = sum_k 2^-k {x^k/k!}_R (per-index tail bracket)",
          "tail_bracketed", N=16, eps=sm.DEFAULT_EPS)
def _exp_r2(p):
    return _tail_per_index(exp_seq("right", 1), lambda n: _right_stream(n, Fraction(1, 2), None),
                           p["N"], p["eps"])


@identity("exp-right-first-sums", "per-index sums 1 + 0 + ... = 1, sum 2^-k = 2, sum (k+1) 2^-k = 4",
          "tail_bracketed", eps=sm.DEFAULT_EPS)
def _exp_first(p):
    streams = [sm.geometric_stream(0), sm.geometric_stream(Fraction(1, 2)),
               sm.poly_geometric_stream([1, 1], Fraction(1, 2))]
    for i, (stream, want) in enumerate(zip(streams, [1, 2, 4])):
        res = sm.tail_bracketed_sum(stream, 1, p["eps"])
        if not res.brackets(want):
            return Outcome(False, Mismatch(i, res.value, Scalar(want)), i + 1)
    return Outcome(True, None, 3)


@identity("expneg-left-def", "D_L {2^-n} = -{2^-n} with a(-1) = 2", "exact_prefix", N=DEFAULT_PREFIX)
def _expneg_def(p):
    e = exp_seq("left", -1)
    if e.term(-1) != 2:
        return Outcome(False, Mismatch(-1, e.term(-1), Scalar(2)), 0, "pre-term")
    return compare(diff_left(e), -e, p["N"])


@identity("exp-inverse", "{2^n}^-1 = {2^-n}", "exact_prefix", N=DEFAULT_PREFIX)
def _exp_inverse(p):
    return compare(inverse(exp_seq("right", 1)), exp_seq("left", -1), p["N"])


@identity("expneg-maclaurin-L1", "{2^-n} = {1} - 1/2 {n} + 1/4 I_L^0 {n} - ... (iterated integrals)",
          "exact_prefix", N=DEFAULT_PREFIX)
def _expneg_l1(p):
    half = Scalar(Fraction(-1, 2))
    return compare(exp_seq("left", -1), _left_series(lambda k: half ** k), p["N"])


@identity("expneg-maclaurin-L2", "{2^-n} = sum_k (-1/2)^k {x^k/k!}_L (closed forms)", "exact_prefix",
          N=DEFAULT_PREFIX)
def _expneg_l2(p):
    half = Scalar(Fraction(-1, 2))
    return compare(exp_seq("left", -1),
                   series_sum(lambda k: half ** k * xk_over_kfact_closed(k, "left"), lambda n: n),
                   p["N"])


@identity("expneg-natural", "1, 0, 0, ... = {1} - {n} + I_L^0 {n} - ... = {(1-1)^n}", "exact_prefix",
          N=DEFAULT_PREFIX)
def _expneg_natural(p):
    return compare(exp_seq("natural_neg"), _left_series(lambda k: Scalar((-1) ** k)), p["N"])


def _abel_per_index(streams: Callable[[int], sm.CoefficientStream], count: int,
                    schedule: Iterable[int]) -> Outcome:
    schedule = list(schedule)
    crossed = 0
    for n in range(count):
        stream = streams(n)
        bad = stream.spot_check(32)
        if bad:
            return Outcome(False, None, n, f"index {n}: declared growth violated at k={bad[0]}")
        bound_scale = max(n, 1)
        rep = sm.abel_limit_check(stream, Fraction(1, 2 ** n),
                                  lambda m: Fraction(bound_scale, 2 ** m), schedule)
        crossed += rep.cross_checked
        if not rep.passed:
            w = rep.witness
            return Outcome(False, Mismatch(n, w.value if w.value is not None else ZERO,
                                           Scalar(Fraction(1, 2 ** n))),
                           n + 1, f"index {n}, m={w.m}: {w.note or 'bound violated'}")
    return Outcome(True, None, count * len(schedule),
                   f"schedule m={schedule[0]}..{schedule[-1]}, bound n*2^-m, {crossed} tail cross-checks")


@identity("expneg-maclaurin-R1-abel",
          "{2^-n} = {1} - {n} + I_R^0 {n} - ... read as Abel sums (iterated integrals)", "abel",
          N=9, schedule=tuple(sm.DEFAULT_SCHEDULE))
def _expneg_r1(p):
    return _abel_per_index(lambda n: _right_stream(n, -1, _RIGHT), p["N"], p["schedule"])


@identity("expneg-maclaurin-R2-abel",
          "{2^-n} = sum_k (-1)^k {x^k/k!}_R read as Abel sums, coefficients (-1)^k C(n+k-1,k)", "abel",
          N=9, schedule=tuple(sm.DEFAULT_SCHEDULE))
def _expneg_r2(p):
    return _abel_per_index(lambda n: _right_stream(n, -1, None), p["N"], p["schedule"])


# -- general exponential ----------------------------------------------------------------

_ALPHAS = ("1/2", "-1/2", "2", "-2", "3", "i")


def _alphas(p, exclude: Callable[[Scalar], bool] = lambda a: False) -> list[Scalar]:
    return [a for a in _scalars(p["alpha"]) if not exclude(a)]


@identity("expgen-right-def", "D_R {(1+a)^n} = a {(1+a)^n}", "exact_prefix", N=DEFAULT_PREFIX,
          alpha=_ALPHAS)
def _expgen_rdef(p):
    cases = [(f"alpha={a}", lambda a=a: diff_right(exp_seq("right", a)),
              lambda a=a: a * exp_seq("right", a)) for a in _alphas(p)]
    return compare_all(cases, p["N"])


@identity("expgen-left-def", "D_L {(1-a)^-n} = a {(1-a)^-n} with a(-1) = 1 - a", "exact_prefix",
          N=DEFAULT_PREFIX, alpha=_ALPHAS)
def _expgen_ldef(p):
    cases = [(f"alpha={a}", lambda a=a: diff_left(exp_seq("left", a)),
              lambda a=a: a * exp_seq("left", a)) for a in _alphas(p, lambda a: a == 1)]
    return compare_all(cases, p["N"])


@identity("expgen-right-law", "R(a) R(b) = R(a + b + ab) for right exponentials", "exact_prefix",
          N=DEFAULT_PREFIX, alpha=_ALPHAS)
def _expgen_rlaw(p):
    al = _alphas(p)
    cases = [(f"alpha={a},beta={b}", lambda a=a, b=b: exp_seq("right", a) * exp_seq("right", b),
              lambda a=a, b=b: exp_seq("right", a + b + a * b)) for a in al for b in al]
    return compare_all(cases, p["N"])


@identity("expgen-left-law", "L(a) L(b) = L(a + b - ab) for left exponentials", "exact_prefix",
          N=DEFAULT_PREFIX, alpha=_ALPHAS)
def _expgen_llaw(p):
    al = _alphas(p, lambda a: a == 1)
    cases = [(f"alpha={a},beta={b}", lambda a=a, b=b: exp_seq("left", a) * exp_seq("left", b),
              lambda a=a, b=b: exp_seq("left", a + b - a * b)) for a in al for b in al]
    return compare_all(cases, p["N"])


@identity("expgen-inverse", "R(a)^-1 = L(-a) for a != -1", "exact_prefix", N=DEFAULT_PREFIX,
          alpha=_ALPHAS)
def _expgen_inverse(p):
    cases = [(f"alpha={a}", lambda a=a: inverse(exp_seq("right", a)), lambda a=a: exp_seq("left", -a))
             for a in _alphas(p, lambda a: a == -1)]
    return compare_all(cases, p["N"])


@identity("expgen-maclaurin-RL", "R(a) = sum_k a^k {x^k/k!}_L", "exact_prefix", N=DEFAULT_PREFIX,
          alpha=_ALPHAS)
def _expgen_rl(p):
    cases = [(f"alpha={a}", lambda a=a: exp_seq("right", a),
              lambda a=a: _left_series(lambda k: a ** k)) for a in _alphas(p)]
    return compare_all(cases, p["N"])


@identity("expgen-maclaurin-LL", "L(a) = sum_k (a/(1-a))^k {x^k/k!}_L", "exact_prefix",
          N=DEFAULT_PREFIX, alpha=_ALPHAS)
def _expgen_ll(p):
    cases = []
    for a in _alphas(p, lambda a: a == 1):
        r = a / (1 - a)
        cases.append((f"alpha={a}", lambda a=a: exp_seq("left", a),
                      lambda r=r: _left_series(lambda k: r ** k)))
    return compare_all(cases, p["N"])


@identity("expgen-maclaurin-LL-literal",
          "literal fifth coefficient ((a+1)/a)^4 in place of (a/(1-a))^4 breaks the left series from index 4",
          "exact_prefix", discrepancy=True, N=DEFAULT_PREFIX, alpha=("1/2",))
def _expgen_ll_literal(p):
    cases = []
    for a in _alphas(p, lambda a: a in (0, 1)):
        r = a / (1 - a)
        coeff = lambda k, r=r, a=a: ((a + 1) / a) ** 4 if k == 4 else r ** k
        cases.append((f"alpha={a}", lambda a=a: exp_seq("left", a),
                      lambda coeff=coeff: _left_series(coeff)))
    return compare_all(cases, p["N"])


def _resummed(count: int, alpha_points: list[Scalar], ratio: Callable[[Scalar], Scalar],
              target: Callable[[Scalar], Sequence], eps) -> Outcome:
    """Per-index sums ``sum_k C(n+k-1,k) r^k``: tail bracket inside the unit disc,
    Borel closed form when ``Re r < 1``, otherwise the point is recorded as skipped."""
    tails = borels = 0
    skipped = []
    scanned = 0
    for a in alpha_points:
        r = ratio(a)
        t = target(a)
        for n in range(count):
            stream = _right_stream(n, r, None)
            scanned += 1
            if sm.modulus_upper(r) < 1:
                res = sm.tail_bracketed_sum(stream, 1, eps)
                tails += 1
                if not res.brackets(t.term(n)):
                    return Outcome(False, Mismatch(n, res.value, t.term(n)), scanned, f"alpha={a} (tail)")
                continue
            try:
                value = sm.borel_sum(stream).value
            except OutsideBorelRegion:
                skipped.append(str(a))
                break
            borels += 1
            if value != t.term(n):
                return Outcome(False, Mismatch(n, value, t.term(n)), scanned, f"alpha={a} (Borel)")
    note = f"{tails} tail-bracketed, {borels} Borel"
    if skipped:
        note += f"; outside the Borel region: alpha={', '.join(skipped)}"
    return Outcome(True, None, scanned, note)


@identity("expgen-maclaurin-RR-borel",
          "R(a) = sum_k (a/(1+a))^k {x^k/k!}_R; tail bracket if |ratio| < 1, Borel if Re ratio < 1",
          "borel", N=8, eps=sm.DEFAULT_EPS, alpha=_ALPHAS + ("-2/3",))
def _expgen_rr(p):
    return _resummed(p["N"], _alphas(p, lambda a: a == -1), lambda a: a / (1 + a),
                     lambda a: exp_seq("right", a), p["eps"])


@identity("expgen-maclaurin-LR",
          "L(a) = sum_k a^k {x^k/k!}_R; tail bracket if |a| < 1, Borel if Re a < 1",
          "borel", N=8, eps=sm.DEFAULT_EPS, alpha=_ALPHAS)
def _expgen_lr(p):
    return _resummed(p["N"], _alphas(p, lambda a: a == 1), lambda a: a,
                     lambda a: exp_seq("left", a), p["eps"])


@identity("divergent-minus-two-borel", "Borel sum of 1 - 2 + 4 - 8 + ... is 1/3 = (1 - 2/3)^1",
          "borel")
def _minus_two(p):
    value = sm.borel_sum(sm.geometric_stream(-2)).value
    return values_equal([("Borel", value, Fraction(1, 3)),
                         ("a(1) of R(-2/3)", exp_seq("right", Fraction(-2, 3)).term(1), Fraction(1, 3))])


@identity("divergent-grandi-abel", "Abel sum of 1 - 1 + 1 - ... is 1/2 (|S(x_m) - 1/2| <= 2^-(m+1))",
          "abel", schedule=tuple(sm.DEFAULT_SCHEDULE))
def _grandi(p):
    rep = sm.abel_limit_check(sm.geometric_stream(-1), Fraction(1, 2),
                              lambda m: Fraction(1, 2 ** (m + 1)), p["schedule"])
    return _abel_outcome(rep)


@identity("divergent-alternating-abel", "Abel sum of 1 - 2 + 3 - ... is 1/4 (|S(x_m) - 1/4| <= 2^-(m+1))",
          "abel", schedule=tuple(sm.DEFAULT_SCHEDULE))
def _alternating(p):
    rep = sm.abel_limit_check(sm.poly_geometric_stream([1, 1], -1), Fraction(1, 4),
                              lambda m: Fraction(1, 2 ** (m + 1)), p["schedule"])
    return _abel_outcome(rep)


def _abel_outcome(rep: sm.AbelReport) -> Outcome:
    if rep.passed:
        return Outcome(True, None, len(rep.rows), f"{rep.cross_checked} tail cross-checks")
    w = rep.witness
    return Outcome(False, Mismatch(w.m, w.value if w.value is not None else ZERO, rep.target),
                   len(rep.rows), f"m={w.m}: {w.note or 'bound violated'}")


# -- hyperbolic ------------------------------------------------------------------------------


def _hyp(kind, variant="standard"):
    return hyperbolic_seq(kind, variant)


def _quarter_powers() -> Sequence:
    return Sequence(lambda n: Scalar(Fraction(1, 2 ** (n + 2))))


@identity("hyp-pythagoras", "cosh^2 - sinh^2 = {1}", "exact_prefix", N=DEFAULT_PREFIX)
def _hyp_pyth(p):
    return compare(_hyp("cosh") ** 2 - _hyp("sinh") ** 2, const_seq(1), p["N"])


@identity("hyp-diff-cosh", "D_R cosh = sinh + {2^-(n+2)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hyp_dcosh(p):
    return compare(diff_right(_hyp("cosh")), _hyp("sinh") + _quarter_powers(), p["N"])


@identity("hyp-diff-sinh", "D_R sinh = cosh - {2^-(n+2)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hyp_dsinh(p):
    return compare(diff_right(_hyp("sinh")), _hyp("cosh") - _quarter_powers(), p["N"])


@identity("hyp-diff-worked-values", "D_R cosh = 1/4, 7/8, 31/16, ... and D_R sinh = 3/4, 9/8, 33/16, ...",
          "exact_prefix")
def _hyp_dvals(p):
    return compare_all([
        ("D_R cosh", lambda: diff_right(_hyp("cosh")),
         lambda: _seq([Fraction(1, 4), Fraction(7, 8), Fraction(31, 16)])),
        ("D_R sinh", lambda: diff_right(_hyp("sinh")),
         lambda: _seq([Fraction(3, 4), Fraction(9, 8), Fraction(33, 16)])),
    ], 3)


@identity("hyp-add-1", "cosh^2 + sinh^2 = {cosh(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hyp_add1(p):
    return compare(_hyp("cosh") ** 2 + _hyp("sinh") ** 2, stride(_hyp("cosh"), 2), p["N"])


@identity("hyp-add-2", "2 cosh sinh = {sinh(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hyp_add2(p):
    return compare(2 * _hyp("cosh") * _hyp("sinh"), stride(_hyp("sinh"), 2), p["N"])


@identity("hypnat-diff-1", "D_R cosh_nat = sinh_nat", "exact_prefix", N=DEFAULT_PREFIX)
def _hypnat_d1(p):
    return compare(diff_right(_hyp("cosh", "natural")), _hyp("sinh", "natural"), p["N"])


@identity("hypnat-diff-2", "D_R sinh_nat = cosh_nat", "exact_prefix", N=DEFAULT_PREFIX)
def _hypnat_d2(p):
    return compare(diff_right(_hyp("sinh", "natural")), _hyp("cosh", "natural"), p["N"])


@identity("hypnat-pythagoras", "cosh_nat^2 - sinh_nat^2 = 1, 0, 0, ...", "exact_prefix",
          N=DEFAULT_PREFIX)
def _hypnat_pyth(p):
    return compare(_hyp("cosh", "natural") ** 2 - _hyp("sinh", "natural") ** 2,
                   exp_seq("natural_neg"), p["N"])


@identity("hypnat-add-1", "cosh_nat^2 + sinh_nat^2 = {cosh_nat(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hypnat_add1(p):
    c, s = _hyp("cosh", "natural"), _hyp("sinh", "natural")
    return compare(c ** 2 + s ** 2, stride(c, 2), p["N"])


@identity("hypnat-add-2", "2 cosh_nat sinh_nat = {sinh_nat(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _hypnat_add2(p):
    c, s = _hyp("cosh", "natural"), _hyp("sinh", "natural")
    return compare(2 * c * s, stride(s, 2), p["N"])


# -- trigonometric ------------------------------------------------------------------------------


@identity("trigR-diff-1", "D_R cos_R = -sin_R", "exact_prefix", N=DEFAULT_PREFIX)
def _trigr_d1(p):
    return compare(diff_right(trig_seq("cos", "right")), -trig_seq("sin", "right"), p["N"])


@identity("trigR-diff-2", "D_R sin_R = cos_R", "exact_prefix", N=DEFAULT_PREFIX)
def _trigr_d2(p):
    return compare(diff_right(trig_seq("sin", "right")), trig_seq("cos", "right"), p["N"])


@identity("trigR-pythagoras", "cos_R^2 + sin_R^2 = {2^n}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigr_pyth(p):
    return compare(trig_seq("cos", "right") ** 2 + trig_seq("sin", "right") ** 2,
                   exp_seq("right", 1), p["N"])


@identity("trigR-add-1", "cos_R^2 - sin_R^2 = {cos_R(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigr_add1(p):
    c, s = trig_seq("cos", "right"), trig_seq("sin", "right")
    return compare(c ** 2 - s ** 2, stride(c, 2), p["N"])


@identity("trigR-add-2", "2 cos_R sin_R = {sin_R(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigr_add2(p):
    c, s = trig_seq("cos", "right"), trig_seq("sin", "right")
    return compare(2 * c * s, stride(s, 2), p["N"])


@identity("trigL-diff-1", "D_L cos_L = -sin_L with cos_L(-1) = 1", "exact_prefix", N=DEFAULT_PREFIX)
def _trigl_d1(p):
    c = trig_seq("cos", "left")
    return compare(diff_left(c), -trig_seq("sin", "left"), p["N"])


@identity("trigL-diff-2", "D_L sin_L = cos_L with sin_L(-1) = -1", "exact_prefix", N=DEFAULT_PREFIX)
def _trigl_d2(p):
    s = trig_seq("sin", "left")
    return compare(diff_left(s), trig_seq("cos", "left"), p["N"])


@identity("trigL-pythagoras", "cos_L^2 + sin_L^2 = {2^-n}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigl_pyth(p):
    return compare(trig_seq("cos", "left") ** 2 + trig_seq("sin", "left") ** 2,
                   exp_seq("left", -1), p["N"])


@identity("trigL-add-1", "cos_L^2 - sin_L^2 = {cos_L(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigl_add1(p):
    c, s = trig_seq("cos", "left"), trig_seq("sin", "left")
    return compare(c ** 2 - s ** 2, stride(c, 2), p["N"])


@identity("trigL-add-2", "2 cos_L sin_L = {sin_L(2n)}", "exact_prefix", N=DEFAULT_PREFIX)
def _trigl_add2(p):
    c, s = trig_seq("cos", "left"), trig_seq("sin", "left")
    return compare(2 * c * s, stride(s, 2), p["N"])


@identity("tan-LR-equal", "tan_R = tan_L, infinities included", "exact_prefix", N=DEFAULT_PREFIX)
def _tan_equal(p):
    return compare(tan_seq("right"), tan_seq("left"), p["N"])


@identity("euler-right", "(1+i)^4 + 2^2 = 0", "exact")
def _euler_right(p):
    return values_equal([("a4 right", exp_seq("right", I).term(4) + 4, 0)])


@identity("euler-left", "(1-i)^-4 + 2^-2 = 0", "exact")
def _euler_left(p):
    return values_equal([("a4 left", exp_seq("left", I).term(4) + Fraction(1, 4), 0)])


@identity("euler-product", "(1-i)^-4 (1+i)^4 = 1", "exact")
def _euler_product(p):
    return values_equal([("product", exp_seq("left", I).term(4) * exp_seq("right", I).term(4), 1)])


_PERIODIC_VALUES = {ZERO, ONE, -ONE, 1 / Scalar(0, 0, 1), -1 / Scalar(0, 0, 1)}


@identity("periodic-period8", "periodic cos/sin have least period 8 and take values in {0, +-1, +-1/sqrt2}",
          "exact_prefix", N=DEFAULT_PREFIX)
def _periodic(p):
    N = p["N"]
    for kind in ("cos", "sin"):
        s = trig_seq(kind, "periodic")
        out = compare(shift(s, 8), s, N, f"{kind} period 8")
        if not out.ok:
            return out
        for d in (1, 2, 4):
            if first_mismatch(shift(s, d), s, 16) is None:
                return Outcome(False, None, N, f"{kind} has period {d}")
        for n in range(N):
            if s.term(n) not in _PERIODIC_VALUES:
                return Outcome(False, Mismatch(n, s.term(n), ZERO), n, f"{kind}: value outside the set")
    return Outcome(True, None, 2 * N)


@identity("periodic-unit-circle", "cos_per^2 + sin_per^2 = {1}", "exact_prefix", N=DEFAULT_PREFIX)
def _periodic_circle(p):
    return compare(trig_seq("cos", "periodic") ** 2 + trig_seq("sin", "periodic") ** 2,
                   const_seq(1), p["N"])


# -- Fibonacci family -----------------------------------------------------------------------------


def _fib_maclaurin() -> Sequence:
    one = _LEFT
    return series_sum(lambda k: insert_pow(one(k), 0, k + 1), lambda n: (n - 1) // 2)


@identity("fib-maclaurin", "F = sum_k I_0^(k+1) {x^k/k!}_L", "exact_prefix", N=DEFAULT_PREFIX)
def _fib_mac(p):
    return compare(fibonacci_seq(), _fib_maclaurin(), p["N"])


@identity("fib-diff", "D_R S_1 F = F", "exact_prefix", N=DEFAULT_PREFIX)
def _fib_diff(p):
    f = fibonacci_seq()
    return compare(diff_right(shift(f, 1)), f, p["N"])


@identity("negafib-diff", "D_R F^- = -S_2 F^-", "exact_prefix", N=DEFAULT_PREFIX)
def _negafib_diff(p):
    g = negafibonacci_seq()
    return compare(diff_right(g), -shift(g, 2), p["N"])


@identity("cassini", "F S_2 F^- + S_1 F S_1 F^- = {1}", "exact_prefix", N=DEFAULT_PREFIX)
def _cassini(p):
    f, g = fibonacci_seq(), negafibonacci_seq()
    return compare(f * shift(g, 2) + shift(f, 1) * shift(g, 1), const_seq(1), p["N"])


_PQ = ("2,1", "1,2", "1,1", "3/2,i")


def _pq_pairs(p) -> list[tuple[Scalar, Scalar]]:
    pairs = p["PQ"]
    if isinstance(pairs, str):
        pairs = pairs.split(";")
    out = []
    for item in pairs:
        P, Q = (parse_scalar(t) for t in item.split(","))
        out.append((P, Q))
    return out


def _pq_series(P: Scalar, Q: Scalar, literal: bool) -> Sequence:
    powers = _geom(P)
    if literal:
        coeff = lambda k: Q ** k
    else:
        coeff = lambda k: (Q / P) ** k
    return series_sum(lambda k: coeff(k) * insert_pow(_LEFT(k) * powers, 0, k + 1),
                      lambda n: (n - 1) // 2)


@identity("pqfib-maclaurin",
          "F(P,Q) = sum_k (Q/P)^k I_0^(k+1) [{x^k/k!}_L {P^n}], i.e. coefficients C(m,k) P^(m-k) Q^k",
          "exact_prefix", N=DEFAULT_PREFIX, PQ=_PQ)
def _pq_mac(p):
    cases = [(f"P={P},Q={Q}", lambda P=P, Q=Q: pq_fibonacci(P, Q),
              lambda P=P, Q=Q: _pq_series(P, Q, False)) for P, Q in _pq_pairs(p)]
    return compare_all(cases, p["N"])


@identity("pqfib-maclaurin-literal",
          "literal weights Q^k (no 1/P^k) reproduce the sequence only when P = 1; Pell differs at index 3",
          "exact_prefix", discrepancy=True, N=DEFAULT_PREFIX, PQ=("2,1",))
def _pq_literal(p):
    cases = [(f"P={P},Q={Q}", lambda P=P, Q=Q: pq_fibonacci(P, Q),
              lambda P=P, Q=Q: _pq_series(P, Q, True)) for P, Q in _pq_pairs(p)]
    return compare_all(cases, p["N"])


@identity("pqfib-initial-terms", "F(P,Q) = 0, 1, P, P^2+Q, P^3+2PQ, P^4+3P^2Q+Q^2", "exact_prefix",
          PQ=_PQ)
def _pq_initial(p):
    cases = []
    for P, Q in _pq_pairs(p):
        want = [0, 1, P, P ** 2 + Q, P ** 3 + 2 * P * Q, P ** 4 + 3 * P ** 2 * Q + Q ** 2]
        cases.append((f"P={P},Q={Q}", lambda P=P, Q=Q: pq_fibonacci(P, Q), lambda w=want: _seq(w)))
    return compare_all(cases, 6)


def _kbonacci_series(k: int) -> Sequence:
    one = const_seq(1)

    def family(l: int) -> Sequence:
        s = insert_pow(one, 0, k - 1 + l)
        for _ in range(l):
            s = deformed_integral(k, s)
        return s

    return series_sum(family, lambda n: max(-1, (n - k + 1) // 2))


@identity("kbonacci-maclaurin", "F(k) = sum_l (I~_k)^l I_0^(k-1+l) {1}", "exact_prefix",
          N=DEFAULT_PREFIX, k=(2, 3, 4))
def _kbo_mac(p):
    cases = [(f"k={k}", lambda k=k: kbonacci(k), lambda k=k: _kbonacci_series(k)) for k in _ints(p["k"])]
    return compare_all(cases, p["N"])


@identity("kbonacci-tribonacci-example", "I~_3 I_0^3 {1} = 0, 0, 0, 0, 1, 3, 5, 7, ...", "exact_prefix")
def _kbo_example(p):
    lhs = deformed_integral(3, insert_pow(const_seq(1), 0, 3))
    return compare(lhs, _seq([0, 0, 0, 0, 1, 3, 5, 7, 9, 11]), 10)


@identity("kbonacci-example-subscript",
          "with subscript 2, I~_2 I_0^3 {1} = 0,0,0,0,1,2,3,... and not 0,0,0,0,1,3,5,7 (that needs I~_3)",
          "exact_prefix", discrepancy=True)
def _kbo_subscript(p):
    lhs = deformed_integral(2, insert_pow(const_seq(1), 0, 3))
    return compare(lhs, _seq([0, 0, 0, 0, 1, 3, 5, 7]), 8)


@identity("kbonacci-limit", "S_k F(k) agrees with {2^n} on the first N terms once k > N", "limit_family",
          N=32, k_offsets=(1, 2, 5))
def _kbo_limit(p):
    N = p["N"]
    e = exp_seq("right", 1)
    cases = [(f"k={N + d}", lambda d=d: shift(kbonacci(N + d), N + d), lambda: e)
             for d in _ints(p["k_offsets"])]
    return compare_all(cases, N)


@identity("fib-ratio-golden", "r = F(41)/F(40) satisfies |r^2 - r - 1| < 10^-6", "tolerance", N=40)
def _golden(p):
    f = fibonacci_seq()
    return _ratio_check(f, p["N"], lambda r: r * r - r - 1)


@identity("pell-ratio-silver", "r = P(41)/P(40) satisfies |r^2 - 2r - 1| < 10^-6", "tolerance", N=40)
def _silver(p):
    f = pq_fibonacci(2, 1)
    return _ratio_check(f, p["N"], lambda r: r * r - 2 * r - 1)


def _ratio_check(f: Sequence, N: int, poly: Callable[[Fraction], Fraction]) -> Outcome:
    r = (f.term(N + 1) / f.term(N)).as_fraction()
    residual = abs(poly(r))
    ok = residual < Fraction(1, 10 ** 6)
    return Outcome(ok, None if ok else Mismatch(N, Scalar(residual), Scalar(Fraction(1, 10 ** 6))), 1,
                   f"residual {residual} ~ {float(residual):.3e}")


# -- factorial dual and Wilson-type statements ---------------------------------------------------

_FACTDUAL_LISTED = [2, 2, 6, 26, 150, 1082, 9366, 94586, 1091670, 14174522]
_BELLDUAL_LISTED = [1, 2, 7, 34, 209, 1546, 13327, 130922, 1441729, 17572114]


def _fubini_recurrence() -> Sequence:
    def step(s: Sequence, n: int):
        if n == 0:
            return 1
        return sum(comb.binomial(n, k) * s.term(n - k) for k in range(1, n + 1))
    return Sequence.recursive(step)


def _stirling_transform(a: Callable[[int], int]) -> Sequence:
    return Sequence(lambda n: sum(comb.stirling2(n, k) * a(k) for k in range(n + 1)))


@identity("factdual-stirling", "a<n!> = 2 sum_k S(n,k) k!, checked against the listed values and the Fubini recurrence",
          "exact_prefix", N=201)
def _factdual_stirling(p):
    rhs = 2 * _stirling_transform(comb.factorial)
    out = compare(factorial_dual(), _seq(_FACTDUAL_LISTED), len(_FACTDUAL_LISTED), "listed values")
    if not out.ok:
        return out
    out = compare(rhs, 2 * _fubini_recurrence(), p["N"], "Fubini recurrence")
    if not out.ok:
        return out
    return compare(factorial_dual(), rhs, p["N"])


@identity("factdual-stirling-shifted",
          "shifted reading S_1 a<n!> = 2 sum_k S(n,k) k! disagrees at index 1 (2 vs 6); the unshifted form holds",
          "exact_prefix", discrepancy=True, N=DEFAULT_PREFIX)
def _factdual_shifted(p):
    return compare(2 * _stirling_transform(comb.factorial), shift(factorial_dual(), 1), p["N"])


@identity("factdual-definition-tail", "sum_k k^n 2^-k brackets a<n!> within 2^-20", "tail_bracketed",
          N=13, eps=sm.DEFAULT_EPS)
def _factdual_tail(p):
    return _tail_per_index(factorial_dual(),
                           lambda n: sm.poly_geometric_stream([0] * n + [1], Fraction(1, 2)),
                           p["N"], p["eps"])


@identity("factdual-even", "a<n!> is even", "modular", N=DEFAULT_PREFIX)
def _factdual_even(p):
    mm = first_mismatch_mod(factorial_dual(), const_seq(0), p["N"], 2)
    return Outcome(mm is None, mm, p["N"])


def factorial_dual_residue(n: int) -> int:
    return int(factorial_dual().term(n)) % (n + 1)


def _wilson_dual_outcome(limit: int) -> Outcome:
    if limit < 3:
        raise ValueError("limit must be >= 3")
    f = factorial_dual()
    scanned = 0
    for n in range(1, limit + 1):
        if comb.is_prime(n + 1):
            scanned += 1
            r = int(f.term(n)) % (n + 1)
            if r:
                return Outcome(False, Mismatch(n, Scalar(r), ZERO), scanned, f"n={n}")
    composites = [n for n in range(3, limit + 1)
                  if not comb.is_prime(n + 1) and int(f.term(n)) % (n + 1) == 0]
    return Outcome(True, None, scanned,
                   f"composite moduli n+1 dividing a<n!>: {[n + 1 for n in composites]}")


@identity("wilson-dual-scan", "a<n!> = 0 mod n+1 whenever n+1 is prime", "scan", limit=100)
def _wilson_scan(p):
    return _wilson_dual_outcome(p["limit"])


def wilson_dual_scan(limit: int = 100) -> VerificationReport:
    """Divisibility of a<n!> by n+1 for prime n+1 and its failure for even moduli n+1 >= 4.

    Odd composite moduli that divide anyway (25 for n = 24) are listed in the detail.
    """
    if limit < 3:
        raise ValueError("limit must be >= 3")
    return _timed("wilson-dual-scan", "scan", {"limit": limit},
                  lambda: _first_failure([_wilson_dual_outcome(limit), _wilson_even_outcome(limit)]))


def wilson_lemma(p: int) -> VerificationReport:
    """Report form of :func:`wilson_lemma_outcome`; raises for non-prime ``p``."""
    if not comb.is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _timed("wilson-lemma", "scan", {"p": p}, lambda: wilson_lemma_outcome(p))


def wilson_lemma_outcome(p: int) -> Outcome:
    """``k! S(p-1,k) = -(-1)^k (mod p)`` for ``1 <= k <= p-1`` and the terms sum to ``0 (mod p)``."""
    if not comb.is_prime(p):
        raise ValueError(f"{p} is not prime")
    total = 0
    for k in range(1, p):
        value = comb.factorial(k) * comb.stirling2(p - 1, k)
        explicit = sum((-1) ** i * comb.binomial(k, i) * (k - i) ** (p - 1) for i in range(k + 1))
        if value != explicit:
            return Outcome(False, Mismatch(k, Scalar(value), Scalar(explicit)), k, f"p={p}: explicit form")
        if (value + (-1) ** k) % p:
            return Outcome(False, Mismatch(k, Scalar(value % p), Scalar(-(-1) ** k % p)), k, f"p={p}")
        total += value
    # the alternating sum over k = 1..p-1 vanishes only when p - 1 is even
    if p > 2 and total % p:
        return Outcome(False, Mismatch(p - 1, Scalar(total % p), ZERO), p - 1, f"p={p}: sum")
    return Outcome(True, None, p - 1)


@identity("wilson-lemma", "k! S(p-1,k) = -(-1)^k mod p for prime p and 1 <= k <= p-1; the sum is 0 mod p for odd p", "scan", p_limit=31)
def _wilson_lemma(p):
    scanned = 0
    for q in comb.primes_upto(p["p_limit"]):
        out = wilson_lemma_outcome(q)
        scanned += out.scanned
        if not out.ok:
            return out
    return Outcome(True, None, scanned)


@identity("wilson-even-never",
          "for an even modulus n+1 >= 4 (odd n >= 3) the divisibility a<n!> = 0 mod n+1 never holds",
          "scan", limit=100)
def _wilson_even(p):
    return _wilson_even_outcome(p["limit"])


def _wilson_even_outcome(limit: int) -> Outcome:
    f = factorial_dual()
    scanned = 0
    for n in range(3, limit + 1, 2):
        scanned += 1
        if int(f.term(n)) % (n + 1) == 0:
            return Outcome(False, Mismatch(n, Scalar(0), Scalar(0)), scanned, f"n={n} divisible")
    return Outcome(True, None, scanned)


@identity("wilson-even-index-literal",
          "read with n itself even, 'divisibility never holds' is contradicted at n=2 (6 = 2*3)",
          "scan", discrepancy=True, limit=100)
def _wilson_even_literal(p):
    f = factorial_dual()
    for n in range(2, p["limit"] + 1, 2):
        r = int(f.term(n)) % (n + 1)
        if r == 0:
            return Outcome(False, Mismatch(n, Scalar(r), Scalar(1)), n // 2,
                           f"n={n}: a<n!> = {f.term(n)} divisible by {n + 1}")
    return Outcome(True, None, p["limit"] // 2)


@identity("wilson-composite-25", "a<24!> is divisible by 25", "exact")
def _wilson_25(p):
    return values_equal([("a24 mod 25", int(factorial_dual().term(24)) % 25, 0)])


@identity("wilson-spot-values", "a<6!> = 9366 = 1338*7 and a<8!> = 1091670 = 121297*9 - 3", "exact")
def _wilson_spots(p):
    f = factorial_dual()
    return values_equal([("a6", f.term(6), 1338 * 7), ("a8", f.term(8), 121297 * 9 - 3),
                         ("a8 mod 9", int(f.term(8)) % 9, 6)])


# -- Bell dual -----------------------------------------------------------------------------------


@identity("belldual-three-ways",
          "sum_k |s(n,k)| B(k+1) = sum_k k! C(n,k)^2 = recurrence 2n a(n-1) - (n-1)^2 a(n-2)",
          "exact_prefix", N=201)
def _bd_three(p):
    # bell_dual() itself raises if the three constructions disagree
    b = bell_dual()
    out = compare(b, _seq(_BELLDUAL_LISTED), len(_BELLDUAL_LISTED), "listed values")
    if not out.ok:
        return out
    return compare(b, Sequence(bell_dual_binomial), p["N"])


def belldual_modular_scan(N: int = 60) -> VerificationReport:
    """``a(n+m) = a(n) (mod m)`` for ``n + m <= N`` plus the two base facts."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return _timed("belldual-modular-scan", "modular", {"N": N}, lambda: _belldual_modular_outcome(N))


def _belldual_modular_outcome(N: int) -> Outcome:
    b = bell_dual()
    scanned = 0
    for m in range(1, N + 1):
        am = int(b.term(m))
        if am % m != 1 % m:
            return Outcome(False, Mismatch(m, Scalar(am % m), Scalar(1 % m)), scanned, f"base a(m), m={m}")
        if m + 1 <= N + 1 and (int(b.term(m + 1)) - 2) % m:
            return Outcome(False, Mismatch(m + 1, b.term(m + 1), Scalar(2)), scanned, f"base a(m+1), m={m}")
        for n in range(0, N - m + 1):
            scanned += 1
            if (int(b.term(n + m)) - int(b.term(n))) % m:
                return Outcome(False, Mismatch(n, b.term(n + m), b.term(n)), scanned, f"m={m}")
    return Outcome(True, None, scanned)


@identity("belldual-modular-scan", "a<B>(n+m) = a<B>(n) mod m for n+m <= N", "modular", N=60)
def _bd_mod(p):
    return _belldual_modular_outcome(p["N"])


_BELL_DIFFS = [(6, 117595), (5, 64688), (4, 43571), (3, 32722), (2, 26183), (1, 21820), (0, 18703)]


@identity("belldual-differences", "a<B>(7) - a<B>(j) = (7-j) q_j for the seven listed quotients", "exact")
def _bd_diffs(p):
    b = bell_dual()
    return values_equal([(f"a7 - a{j}", b.term(7) - b.term(j), (7 - j) * q) for j, q in _BELL_DIFFS])


@identity("belldual-egf", "n! [t^n] (1/(1-t)) exp(1/(1-t) - 1) reproduces a<B>(n)", "exact_prefix",
          order=9)
def _bd_egf(p):
    order = p["order"]
    terms = sm.bell_dual_egf(order).egf_terms()
    return compare(_seq(terms), bell_dual(), order + 1)


@identity("bell-egf-classical", "n! [t^n] exp(exp(t) - 1) = B(n)", "exact_prefix", order=8)
def _bell_egf(p):
    order = p["order"]
    return compare(_seq(sm.bell_egf(order).egf_terms()), Sequence(comb.bell), order + 1)


@identity("wilson-classical", "(p-1)! = -1 mod p exactly for primes p", "scan", p_limit=31)
def _wilson_classical(p):
    rep = comb.classical_wilson_check(p["p_limit"])
    if rep.passed:
        return Outcome(True, None, rep.scanned)
    q, r = rep.failures[0]
    return Outcome(False, Mismatch(q, Scalar(r), Scalar(q - 1)), rep.scanned)


@identity("bell-congruence-classical", "B(n+p) = B(n) + B(n+1) mod p for primes p", "scan",
          p_limit=13, n_limit=20)
def _bell_cong(p):
    rep = comb.classical_bell_congruence_check(p["p_limit"], p["n_limit"])
    if rep.passed:
        return Outcome(True, None, rep.scanned)
    q, n = rep.failures[0]
    return Outcome(False, Mismatch(n, Scalar(q), ZERO), rep.scanned, f"p={q}")


# -- driver ------------------------------------------------------------------------------------


def registry() -> dict[str, IdentitySpec]:
    return dict(REGISTRY)


def list_identities() -> list[IdentitySpec]:
    return list(REGISTRY.values())


def _first_failure(outcomes: list[Outcome]) -> Outcome:
    for out in outcomes:
        if not out.ok:
            return out
    return Outcome(True, None, sum(o.scanned for o in outcomes),
                   "; ".join(o.detail for o in outcomes if o.detail))


def _coerce_param(default: Any, value: Any) -> Any:
    if isinstance(value, str):
        if isinstance(default, bool):
            return value.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(value)
        if isinstance(default, Fraction):
            return Fraction(value)
        if isinstance(default, tuple):
            return tuple(v.strip() for v in value.split(";") if v.strip())
    return value


def _mismatch_dict(mm: Mismatch | None) -> dict | None:
    if mm is None:
        return None
    return {"index": mm.index, "lhs": format_scalar(mm.left), "rhs": format_scalar(mm.right)}


def _jsonable(value: Any) -> Any:
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (Fraction, Scalar)):
        return str(value)
    return value


def _report(key: str, mode: str, params: dict, out: Outcome, elapsed_ms: float,
            discrepancy: bool = False) -> VerificationReport:
    if discrepancy:
        status = DOCUMENTED if not out.ok else FAIL
        detail = out.detail if not out.ok else "literal reading unexpectedly holds"
    else:
        status = PASS if out.ok else FAIL
        detail = out.detail
    return VerificationReport(
        key=key, status=status, mode=mode,
        params={k: _jsonable(v) for k, v in params.items()},
        first_mismatch=_mismatch_dict(out.mismatch), scanned=out.scanned,
        elapsed_ms=round(elapsed_ms, 3), detail=detail)


def _timed(key: str, mode: str, params: dict, run: Callable[[], Outcome],
           discrepancy: bool = False) -> VerificationReport:
    start = time.perf_counter()
    try:
        out = run()
    except Exception as exc:  # a crashing check is a failing check, with the reason
        out = Outcome(False, None, 0, f"{type(exc).__name__}: {exc}")
    return _report(key, mode, params, out, (time.perf_counter() - start) * 1000, discrepancy)


def verify(key: str, overrides: dict | None = None, **kw) -> VerificationReport:
    """Run one identity; ``overrides`` (or keywords) replace matching default parameters."""
    spec = REGISTRY.get(key)
    if spec is None:
        raise UnknownKey(f"no identity registered under {key!r}")
    params = dict(spec.defaults)
    for name, value in {**(overrides or {}), **kw}.items():
        if name in params:
            params[name] = _coerce_param(params[name], value)
    return _timed(key, spec.mode, params, lambda: spec.check(params), spec.discrepancy)


def verify_all(overrides: dict | None = None, workers: int = 1) -> list[VerificationReport]:
    """Run every registered identity; reports come back in registry order."""
    keys = list(REGISTRY)
    if workers <= 1:
        return [verify(k, overrides) for k in keys]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda k: verify(k, overrides), keys))


def reports_to_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
