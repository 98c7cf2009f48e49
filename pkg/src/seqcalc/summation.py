"""Certified summation: tail-bracketed partial sums, Abel schedules, Borel closed
forms for geometric-type series, and truncated formal power series.

Nothing here uses floating point.  A "converged" value is always a partial sum
together with a rational bound on the omitted tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Sequence as Seq

from . import combinatorics as comb
from .errors import NoConvergenceCertificate, OutsideBorelRegion
from .scalar import ONE, ZERO, Scalar

DEFAULT_EPS = Fraction(1, 2 ** 20)
DEFAULT_K_MAX = 4096
DEFAULT_SCHEDULE = range(1, 21)
GROWTH_SPOT_CHECK = 64

_SQRT2_UPPER = Fraction(3, 2)


# -- exact modulus helpers -------------------------------------------------------


def _sqrt_upper(q: Fraction, bits: int = 40) -> Fraction:
    """A rational upper bound for ``sqrt(q)``, tight to about ``2**-bits`` relative."""
    if q <= 0:
        return Fraction(0)
    p, d = q.numerator, q.denominator
    scale = 1 << bits
    root = isqrt(p * d * scale * scale)
    if root * root < p * d * scale * scale:
        root += 1
    return Fraction(root, d * scale)


def modulus_upper(z) -> Fraction:
    """Rational upper bound for ``|z|``; exact when ``z`` is rational."""
    z = Scalar.coerce(z)
    ar, ai, br, bi = z.parts
    if not (ai or br or bi):
        return abs(ar)
    a = abs(ar) if not ai else _sqrt_upper(ar * ar + ai * ai)
    b = abs(br) if not bi else _sqrt_upper(br * br + bi * bi)
    return a + _SQRT2_UPPER * b


def modulus_squared(z) -> Scalar:
    """``|z|^2`` as an exact real element of Q(sqrt2)."""
    z = Scalar.coerce(z)
    return z * z.conjugate()


def modulus_le(z, bound) -> bool:
    """Exact test ``|z| <= bound`` for a nonnegative rational ``bound``."""
    bound = Fraction(bound)
    return (modulus_squared(z) - Scalar(bound * bound)).sign() <= 0


# -- coefficient streams with declared growth -------------------------------------------


@dataclass(frozen=True)
class Growth:
    """Declared bound kind for ``|c_{k+1} / c_k|``.

    ``geometric``: the ratio is exactly ``r``.
    ``binomial_ratio``: ``c_{k+1}/c_k = r (k + a)/(k + 1)``.
    ``polynomial_times_geometric``: ``c_k = p(k) r^k`` with ``p`` of degree
    ``degree`` and nonnegative coefficients.
    """

    kind: str
    r: Scalar
    a: Fraction = Fraction(0)
    degree: int = 0
    burn_in: int = 0

    @classmethod
    def geometric(cls, r) -> Growth:
        return cls("geometric", Scalar.coerce(r))

    @classmethod
    def binomial_ratio(cls, a, r) -> Growth:
        return cls("binomial_ratio", Scalar.coerce(r), Fraction(a))

    @classmethod
    def polynomial_times_geometric(cls, degree: int, r) -> Growth:
        return cls("polynomial_times_geometric", Scalar.coerce(r), degree=degree,
                   burn_in=1 if degree else 0)

    @property
    def radius_factor(self) -> Fraction:
        """Upper bound for the limiting ratio ``lim |c_{k+1}/c_k|``."""
        return modulus_upper(self.r)

    def ratio_bound(self, k: int) -> Fraction:
        """Rational upper bound for ``sup_{j >= k} |c_{j+1}/c_j|`` (needs ``k >= burn_in``)."""
        if k < self.burn_in:
            raise ValueError(f"ratio bound requested at k={k} before burn-in {self.burn_in}")
        rmod = modulus_upper(self.r)
        if self.kind == "geometric":
            return rmod
        if self.kind == "binomial_ratio":
            return rmod * max(Fraction(1), (k + self.a) / (k + 1))
        if self.kind == "polynomial_times_geometric":
            if self.degree == 0:
                return rmod
            return rmod * (Fraction(k + 1, k) ** self.degree)
        raise ValueError(f"unknown growth kind {self.kind!r}")


@dataclass
class CoefficientStream:
    """Coefficients ``c_k`` with a declared growth and, optionally, the exact
    value of ``sum_k c_k x^k`` inside the disc of convergence."""

    rule: Callable[[int], object]
    growth: Growth
    closed_form: Callable[[Scalar], Scalar] | None = None
    borel: Callable[[], Scalar] | None = None
    label: str = ""
    _cache: list[Scalar] = field(default_factory=list, repr=False)

    def coefficient(self, k: int) -> Scalar:
        cache = self._cache
        while len(cache) <= k:
            cache.append(Scalar.coerce(self.rule(len(cache))))
        return cache[k]

    def spot_check(self, count: int = GROWTH_SPOT_CHECK) -> list[int]:
        """Indices ``k < count`` past burn-in where the declared ratio bound fails."""
        bad = []
        for k in range(self.growth.burn_in, count):
            c, c_next = self.coefficient(k), self.coefficient(k + 1)
            if c.is_zero():
                if not c_next.is_zero():
                    bad.append(k)
                continue
            if not modulus_le(c_next / c, self.growth.ratio_bound(k)):
                bad.append(k)
        return bad


def geometric_stream(r) -> CoefficientStream:
    r = Scalar.coerce(r)
    return CoefficientStream(
        rule=lambda k: r ** k,
        growth=Growth.geometric(r),
        closed_form=lambda x: 1 / (1 - r * x),
        borel=lambda: borel_geometric(r),
        label=f"({r})^k",
    )


def _falling_basis(coeffs: Seq) -> list[Scalar]:
    """Rewrite ``sum_i coeffs[i] k^i`` as ``sum_j d_j k(k-1)...(k-j+1)``."""
    out = [ZERO] * len(coeffs)
    for i, c in enumerate(coeffs):
        c = Scalar.coerce(c)
        if c.is_zero():
            continue
        for j in range(i + 1):
            out[j] = out[j] + c * comb.stirling2(i, j)
    return out


def poly_geometric_closed(coeffs: Seq, y) -> Scalar:
    """``sum_k p(k) y^k = sum_j d_j j! y^j / (1 - y)^(j+1)`` with ``p`` given by ``coeffs``."""
    y = Scalar.coerce(y)
    total = ZERO
    for j, d in enumerate(_falling_basis(coeffs)):
        if not d.is_zero():
            total = total + d * comb.factorial(j) * y ** j / (1 - y) ** (j + 1)
    return total


def poly_geometric_stream(coeffs: Seq, r) -> CoefficientStream:
    """``c_k = p(k) r^k`` where ``p(k) = sum_i coeffs[i] k^i``, coefficients nonnegative."""
    r = Scalar.coerce(r)
    coeffs = [Scalar.coerce(c) for c in coeffs]
    if any(not c.is_rational() or c.as_fraction() < 0 for c in coeffs):
        raise ValueError("polynomial coefficients must be nonnegative rationals")
    degree = max((i for i, c in enumerate(coeffs) if not c.is_zero()), default=0)

    def rule(k: int) -> Scalar:
        p = ZERO
        for c in reversed(coeffs):
            p = p * k + c
        return p * r ** k

    return CoefficientStream(
        rule=rule,
        growth=Growth.polynomial_times_geometric(degree, r),
        closed_form=lambda x: poly_geometric_closed(coeffs, r * x),
        borel=lambda: borel_poly_geometric(coeffs, r),
        label=f"p(k)*({r})^k",
    )


def binomial_stream(n: int, r) -> CoefficientStream:
    """``c_k = C(n+k-1, k) r^k``, whose sum is ``(1 - r x)^-n``."""
    if n < 0:
        raise ValueError("binomial_stream needs n >= 0")
    r = Scalar.coerce(r)
    return CoefficientStream(
        # n = 0 is the series 1 + 0 + 0 + ...
        rule=lambda k: (comb.binomial(n + k - 1, k) if n else int(k == 0)) * r ** k,
        growth=Growth.binomial_ratio(n, r),
        closed_form=lambda x: (1 - r * x) ** (-n),
        borel=lambda: borel_geometric(r) ** n,
        label=f"C({n}+k-1,k)*({r})^k",
    )


# -- results ---------------------------------------------------------------------


@dataclass
class SummationResult:
    value: Scalar
    method: str  # exact_finite | tail_bracketed | closed_form | abel_schedule | borel_closed_form
    bound: Fraction | None = None
    terms_used: int = 0
    transcript: list = field(default_factory=list)

    def brackets(self, target, eps=None) -> bool:
        """Whether ``target`` lies within ``bound`` (or ``eps``) of ``value``."""
        radius = self.bound if eps is None else Fraction(eps)
        if radius is None:
            return Scalar.coerce(target) == self.value
        return modulus_le(Scalar.coerce(target) - self.value, radius)


def _check_x(x) -> Scalar:
    x = Scalar.coerce(x)
    if not x.is_rational() or not 0 < x.as_fraction() <= 1:
        raise ValueError(f"evaluation point must be a rational in (0, 1], got {x}")
    return x


def estimated_terms(c: CoefficientStream, x, eps=DEFAULT_EPS) -> float:
    """Rough count of terms a tail bracket will need; used only to pick a method."""
    q = float(c.growth.radius_factor) * float(Scalar.coerce(x).as_fraction())
    if q == 0:
        return c.growth.burn_in + 1
    if q >= 1:
        return math.inf
    slack = c.growth.degree + float(c.growth.a)
    return (math.log(1 / float(eps)) + 4 * slack * math.log(2 + slack)) / -math.log(q) * 1.5 + 32


def tail_bracketed_sum(c: CoefficientStream, x=1, eps=DEFAULT_EPS,
                       k_max: int = DEFAULT_K_MAX) -> SummationResult:
    """Partial sum ``S_K`` of ``sum c_k x^k`` with a certified tail bound ``<= eps``.

    The tail from ``K`` is bounded by ``|c_K x^K| / (1 - q)`` where ``q`` bounds
    every later term ratio.  Raises :class:`NoConvergenceCertificate` when no
    ``K <= k_max`` achieves the bound.
    """
    x = _check_x(x)
    xf = x.as_fraction()
    eps = Fraction(eps)
    # rational terms are summed as plain Fractions, which is much faster
    total_q = Fraction(0)
    total_s = ZERO
    power = Fraction(1)
    for k in range(k_max + 1):
        coeff = c.coefficient(k)
        if coeff.is_rational():
            term_q, term_s = coeff.as_fraction() * power, None
            size = abs(term_q)
        else:
            term_q, term_s = None, coeff * power
            size = modulus_upper(term_s)
        if k >= c.growth.burn_in:
            q = c.growth.ratio_bound(k) * xf
            if q < 1:
                tail = size / (1 - q)
                if tail <= eps:
                    method = "exact_finite" if tail == 0 else "tail_bracketed"
                    return SummationResult(total_s + total_q, method, tail, k)
        if term_s is None:
            total_q += term_q
        else:
            total_s = total_s + term_s
        power *= xf
    raise NoConvergenceCertificate(
        f"{c.label or 'series'} at x={x}: tail bound above {eps} after {k_max} terms")


def abel_evaluate(c: CoefficientStream, x, eps=DEFAULT_EPS,
                  k_max: int = DEFAULT_K_MAX) -> SummationResult:
    """Value of ``sum c_k x^k`` at a point inside the certified disc of convergence.

    Uses a tail bracket when one is reachable within ``k_max`` terms, otherwise
    the stream's exact closed form.  Either way the point must satisfy
    ``limsup |c_{k+1}/c_k| * x < 1`` by the declared growth.
    """
    x = _check_x(x)
    if not c.growth.radius_factor * x.as_fraction() < 1:
        raise NoConvergenceCertificate(
            f"{c.label or 'series'}: x={x} lies outside the certified disc of convergence")
    if c.closed_form is None or estimated_terms(c, x, eps) <= k_max:
        try:
            return tail_bracketed_sum(c, x, eps, k_max)
        except NoConvergenceCertificate:
            if c.closed_form is None:
                raise
    return SummationResult(c.closed_form(x), "closed_form", Fraction(0))


@dataclass
class AbelRow:
    m: int
    x: Fraction
    value: Scalar | None
    method: str
    error_ok: bool
    bound: Fraction
    note: str = ""


@dataclass
class AbelReport:
    label: str
    target: Scalar
    rows: list[AbelRow] = field(default_factory=list)
    cross_checked: int = 0

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.error_ok for r in self.rows)

    @property
    def witness(self) -> AbelRow | None:
        return next((r for r in self.rows if not r.error_ok), None)


def abel_limit_check(c: CoefficientStream, target, bound: Callable[[int], Fraction],
                     schedule: Iterable[int] = DEFAULT_SCHEDULE,
                     cross_check_eps=Fraction(1, 2 ** 30),
                     cross_check_k_max: int = 512) -> AbelReport:
    """Check ``|S(x_m) - target| <= bound(m)`` for ``x_m = 1 - 2^-m``.

    When the value comes from a closed form it is also compared against an
    independent tail bracket wherever one is cheap enough to build.
    """
    target = Scalar.coerce(target)
    report = AbelReport(c.label, target)
    for m in schedule:
        x = 1 - Fraction(1, 2 ** m)
        b = Fraction(bound(m))
        try:
            res = abel_evaluate(c, x)
        except NoConvergenceCertificate as exc:
            report.rows.append(AbelRow(m, x, None, "none", False, b, str(exc)))
            continue
        if res.method == "tail_bracketed" and c.closed_form is not None:
            report.cross_checked += 1
            if not res.brackets(c.closed_form(Scalar(x))):
                report.rows.append(AbelRow(m, x, res.value, res.method, False, b,
                                           "closed form outside the tail bracket"))
                continue
        elif res.method == "closed_form" and estimated_terms(c, x, cross_check_eps) <= cross_check_k_max:
            try:
                check = tail_bracketed_sum(c, x, cross_check_eps, cross_check_k_max)
            except NoConvergenceCertificate:
                pass
            else:
                report.cross_checked += 1
                if not check.brackets(res.value):
                    report.rows.append(AbelRow(m, x, res.value, res.method, False, b,
                                               "closed form outside the tail bracket"))
                    continue
        slack = res.bound or Fraction(0)
        ok = modulus_le(res.value - target, b - slack) if b >= slack else False
        report.rows.append(AbelRow(m, x, res.value, res.method, ok, b))
    return report


# -- Borel closed forms --------------------------------------------------------------


def _require_borel_region(r: Scalar) -> None:
    if (r.real - 1).sign() >= 0:
        raise OutsideBorelRegion(f"geometric ratio {r} has real part >= 1")


def borel_geometric(r) -> Scalar:
    """Borel sum ``1/(1-r)`` of ``sum r^k``, valid for ``Re r < 1``."""
    r = Scalar.coerce(r)
    _require_borel_region(r)
    return 1 / (1 - r)


def borel_poly_geometric(coeffs: Seq, r) -> Scalar:
    """Borel sum of ``sum p(k) r^k``; the closed form extends to ``Re r < 1``."""
    r = Scalar.coerce(r)
    _require_borel_region(r)
    return poly_geometric_closed(coeffs, r)


def borel_sum(c: CoefficientStream) -> SummationResult:
    if c.borel is None:
        raise OutsideBorelRegion(f"{c.label or 'series'} has no geometric-type Borel form")
    return SummationResult(c.borel(), "borel_closed_form")


# -- formal power series -------------------------------------------------------------


class FormalPowerSeries:
    """Truncated power series ``sum_{n <= order} a_n t^n`` over the rationals."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = [Fraction(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def constant(cls, a, order: int) -> FormalPowerSeries:
        return cls([a], order)

    @classmethod
    def variable(cls, order: int) -> FormalPowerSeries:
        return cls([0, 1], order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n <= self.order else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, FormalPowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"FormalPowerSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def _lift(self, other) -> FormalPowerSeries:
        if isinstance(other, FormalPowerSeries):
            return other
        return FormalPowerSeries.constant(other, self.order)

    def _order_with(self, other: FormalPowerSeries) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        other = self._lift(other)
        n = self._order_with(other)
        return FormalPowerSeries([self[i] + other[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return FormalPowerSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        n = self._order_with(other)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other[j]
        return FormalPowerSeries(out, n)

    __rmul__ = __mul__

    def reciprocal(self) -> FormalPowerSeries:
        if self[0] == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / self[0]
        for n in range(1, self.order + 1):
            out[n] = -sum(self[k] * out[n - k] for k in range(1, n + 1)) / self[0]
        return FormalPowerSeries(out, self.order)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def exp(self) -> FormalPowerSeries:
        """``exp`` of a series with zero constant term, via ``n f_n = sum k g_k f_{n-k}``."""
        if self[0] != 0:
            raise ValueError("exp needs a zero constant term to stay rational")
        f = [Fraction(0)] * (self.order + 1)
        f[0] = Fraction(1)
        for n in range(1, self.order + 1):
            f[n] = sum(k * self[k] * f[n - k] for k in range(1, n + 1)) / n
        return FormalPowerSeries(f, self.order)

    def compose(self, inner: FormalPowerSeries) -> FormalPowerSeries:
        """``self(inner(t))``; ``inner`` must have zero constant term."""
        if inner[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        n = self._order_with(inner)
        result = FormalPowerSeries.constant(0, n)
        power = FormalPowerSeries.constant(1, n)
        for k in range(n + 1):
            if self[k]:
                result = result + power * self[k]
            power = power * inner
        return result

    def egf_terms(self) -> list[Fraction]:
        """``n! a_n`` for every stored coefficient."""
        return [c * comb.factorial(n) for n, c in enumerate(self.coeffs)]


def fps_ops(a: FormalPowerSeries, b: FormalPowerSeries | None, op: str) -> FormalPowerSeries:
    """Dispatch helper: ``add``, ``mul``, ``exp``, ``compose`` or ``reciprocal``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "exp":
        return a.exp()
    if op == "compose":
        return a.compose(b)
    if op == "reciprocal":
        return a.reciprocal()
    raise ValueError(f"unknown series operation {op!r}")


def exp_series(order: int) -> FormalPowerSeries:
    return FormalPowerSeries([Fraction(1, comb.factorial(n)) for n in range(order + 1)], order)


def bell_egf(order: int) -> FormalPowerSeries:
    """``exp(exp(t) - 1)``, whose EGF coefficients are the Bell numbers."""
    return (exp_series(order) - 1).exp()


def bell_dual_egf(order: int) -> FormalPowerSeries:
    """``(1/(1-t)) exp(1/(1-t) - 1)``."""
    geom = (1 - FormalPowerSeries.variable(order)).reciprocal()
    return geom * (geom - 1).exp()
