"""Exact arithmetic in the field Q(i, sqrt2).

A :class:`Scalar` is ``a + b*sqrt2`` where ``a`` and ``b`` are Gaussian
rationals.  Internally that is four :class:`fractions.Fraction` values::

    (Re a, Im a, Re b, Im b)

Every constructor normalises, so structural equality is field equality.
:data:`POS_INF` / :data:`NEG_INF` extend the scalars for quotients with a zero
denominator (the tangent sequences need them).

Textual form (``str`` and :func:`parse_scalar` agree)::

    3          -5/4         1+i        1/2-3/4i
    sqrt2      1/sqrt2      -3/5*sqrt2
    1+(1/2-i)*sqrt2         inf        -inf
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

from .errors import NotReal, ScalarParseError, UnsupportedRadical

Number = Union[int, Fraction, "Scalar"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class Scalar:
    """Immutable element of Q(i, sqrt2)."""

    __slots__ = ("_ar", "_ai", "_br", "_bi", "_hash")

    def __init__(self, re=0, im=0, sqrt2_re=0, sqrt2_im=0):
        object.__setattr__(self, "_ar", _frac(re))
        object.__setattr__(self, "_ai", _frac(im))
        object.__setattr__(self, "_br", _frac(sqrt2_re))
        object.__setattr__(self, "_bi", _frac(sqrt2_im))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    @classmethod
    def gaussian(cls, re=0, im=0) -> Scalar:
        return cls(re, im)

    # -- components ------------------------------------------------------------

    @property
    def parts(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self._ar, self._ai, self._br, self._bi)

    @property
    def real(self) -> Scalar:
        return Scalar(self._ar, 0, self._br, 0)

    @property
    def imag(self) -> Scalar:
        return Scalar(self._ai, 0, self._bi, 0)

    def conjugate(self) -> Scalar:
        """Complex conjugate (sqrt2 is real, so only the i-parts flip)."""
        return Scalar(self._ar, -self._ai, self._br, -self._bi)

    def is_zero(self) -> bool:
        return not (self._ar or self._ai or self._br or self._bi)

    def is_real(self) -> bool:
        return not (self._ai or self._bi)

    def is_gaussian(self) -> bool:
        return not (self._br or self._bi)

    def is_rational(self) -> bool:
        return not (self._ai or self._br or self._bi)

    def is_integer(self) -> bool:
        return self.is_rational() and self._ar.denominator == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._ar

    def __int__(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self._ar.numerator

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self._ar + other, self._ai, self._br, self._bi)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self._ar + other._ar, self._ai + other._ai,
                      self._br + other._br, self._bi + other._bi)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar(-self._ar, -self._ai, -self._br, -self._bi)

    def __pos__(self) -> Scalar:
        return self

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self._ar - other, self._ai, self._br, self._bi)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self._ar - other._ar, self._ai - other._ai,
                      self._br - other._br, self._bi - other._bi)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(other - self._ar, -self._ai, -self._br, -self._bi)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self._ar * other, self._ai * other,
                          self._br * other, self._bi * other)
        if not isinstance(other, Scalar):
            return NotImplemented
        # (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r,  r = sqrt2, a..d Gaussian
        ar, ai, br, bi = self._ar, self._ai, self._br, self._bi
        cr, ci, dr, di = other._ar, other._ai, other._br, other._bi
        if not (br or bi or dr or di):
            if not (ai or ci):
                return Scalar(ar * cr)
            return Scalar(ar * cr - ai * ci, ar * ci + ai * cr)
        ac_r, ac_i = ar * cr - ai * ci, ar * ci + ai * cr
        bd_r, bd_i = br * dr - bi * di, br * di + bi * dr
        ad_r, ad_i = ar * dr - ai * di, ar * di + ai * dr
        bc_r, bc_i = br * cr - bi * ci, br * ci + bi * cr
        return Scalar(ac_r + 2 * bd_r, ac_i + 2 * bd_i, ad_r + bc_r, ad_i + bc_i)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
        ar, ai, br, bi = self._ar, self._ai, self._br, self._bi
        if not (ai or br or bi):
            return Scalar(1 / ar)
        # 1/(a + b r) = (a - b r) / (a^2 - 2 b^2); the denominator is Gaussian
        nr = ar * ar - ai * ai - 2 * (br * br - bi * bi)
        ni = 2 * ar * ai - 4 * br * bi
        m = nr * nr + ni * ni
        inv_r, inv_i = nr / m, -ni / m
        return Scalar(ar * inv_r - ai * inv_i, ar * inv_i + ai * inv_r,
                      -(br * inv_r - bi * inv_i), -(br * inv_i + bi * inv_r))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
            return Scalar(self._ar / other, self._ai / other,
                          self._br / other, self._bi / other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(other) * self.inverse()
        return NotImplemented

    def __pow__(self, k: int) -> Scalar:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_rational():
            return Scalar(self._ar ** k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self._ar == other._ar and self._ai == other._ai
                    and self._br == other._br and self._bi == other._bi)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._ar == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._ar) if self.is_rational() else hash(self.parts)
            object.__setattr__(self, "_hash", h)
        return h

    def sign(self) -> int:
        """Exact sign of a real scalar, no floating point involved."""
        if not self.is_real():
            raise NotReal(f"sign of non-real value {self}")
        a, b = self._ar, self._br
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: |a| vs |b| sqrt2; equality impossible since sqrt2 is irrational
        return sa if a * a > 2 * b * b else sb

    def _cmp_key(self, other) -> int:
        return (self - Scalar.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp_key(other) < 0

    def __le__(self, other):
        return self._cmp_key(other) <= 0

    def __gt__(self, other):
        return self._cmp_key(other) > 0

    def __ge__(self, other):
        return self._cmp_key(other) >= 0

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    def approx(self) -> complex:
        """Floating-point value, for display and diagnostics only."""
        r2 = math.sqrt(2)
        return complex(float(self._ar) + float(self._br) * r2,
                       float(self._ai) + float(self._bi) * r2)

    def abs_squared_gaussian(self) -> Fraction:
        """``|z|^2`` for a Gaussian rational ``z``."""
        if not self.is_gaussian():
            raise ValueError(f"{self} has a sqrt2 component")
        return self._ar * self._ar + self._ai * self._ai

    # -- text ------------------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)


def field_op(x: Number, y: Number, op: str) -> Scalar:
    """Exact ``x op y`` for ``op`` in add/sub/mul/div."""
    x, y = Scalar.coerce(x), Scalar.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


def sign(x: Number) -> int:
    return Scalar.coerce(x).sign()


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def sqrt_in_field(x: Number) -> Scalar:
    """Nonnegative square root of a rational ``s^2`` or ``2 s^2``.

    ``sqrt(s^2) = |s|`` and ``sqrt(2 s^2) = |s| * sqrt2``; anything else raises
    :class:`UnsupportedRadical`.
    """
    x = Scalar.coerce(x)
    if not x.is_rational():
        raise UnsupportedRadical(f"sqrt of {x}: only nonnegative rationals are supported")
    q = x.as_fraction()
    if q < 0:
        raise UnsupportedRadical(f"sqrt of negative value {x}")
    root = _rational_sqrt(q)
    if root is not None:
        return Scalar(root)
    root = _rational_sqrt(q / 2)
    if root is not None:
        return Scalar(0, 0, root)
    raise UnsupportedRadical(f"sqrt of {x} is not of the form s or s*sqrt2")


class Infinity:
    """Signed infinity produced by ``nonzero / 0``."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        object.__setattr__(self, "sign", 1 if sign > 0 else -1)

    def __setattr__(self, name, value):
        raise AttributeError("Infinity is immutable")

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __neg__(self):
        return NEG_INF if self.sign > 0 else POS_INF

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __repr__(self):
        return "POS_INF" if self.sign > 0 else "NEG_INF"


POS_INF = Infinity(1)
NEG_INF = Infinity(-1)
ExtScalar = Union[Scalar, Infinity]


def ext_div(num: Number, den: Number) -> ExtScalar:
    """Division extended with signed infinities for a zero denominator.

    The numerator must then be a nonzero real value; its sign picks the
    infinity.
    """
    num, den = Scalar.coerce(num), Scalar.coerce(den)
    if not den.is_zero():
        return num / den
    if num.is_zero() or not num.is_real():
        raise ZeroDivisionError(f"{num}/0 has no signed-infinity value")
    return POS_INF if num.sign() > 0 else NEG_INF


# -- formatting ------------------------------------------------------------------


def _fmt_imag(y: Fraction) -> str:
    if y == 1:
        return "i"
    if y == -1:
        return "-i"
    return f"{y}i"


def _fmt_gaussian(x: Fraction, y: Fraction) -> str:
    if not y:
        return str(x)
    if not x:
        return _fmt_imag(y)
    tail = _fmt_imag(abs(y))
    return f"{x}{'+' if y > 0 else '-'}{tail}"


def _fmt_sqrt2_coeff(c: Fraction) -> str:
    """Text for ``c*sqrt2`` with ``c > 0`` rational."""
    if c == 1:
        return "sqrt2"
    if c.denominator % 2 == 0:
        u = 2 * c  # c*sqrt2 == u/sqrt2
        if u.denominator == 1:
            return f"{u.numerator}/sqrt2"
        return f"{u.numerator}/({u.denominator}*sqrt2)"
    return f"{c}*sqrt2"


def format_scalar(x: ExtScalar) -> str:
    if isinstance(x, Infinity):
        return str(x)
    ar, ai, br, bi = x.parts
    if not (br or bi):
        return _fmt_gaussian(ar, ai)
    if not bi:
        body = _fmt_sqrt2_coeff(abs(br))
        neg = br < 0
    else:
        body = f"({_fmt_gaussian(br, bi)})*sqrt2"
        neg = False
    if not (ar or ai):
        return f"-{body}" if neg else body
    return f"{_fmt_gaussian(ar, ai)}{'-' if neg else '+'}{body}"


# -- parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)(?P<imag>i)?|(?P<sqrt2>sqrt2)|(?P<i>i)|(?P<op>[-+*/()]))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens: list[tuple[str, object]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarParseError(f"cannot parse scalar {text!r} at position {pos}")
        pos = m.end()
        if m.group("num"):
            value = Fraction(m.group("num"))
            tokens.append(("val", Scalar(0, value) if m.group("imag") else Scalar(value)))
        elif m.group("sqrt2"):
            tokens.append(("val", SQRT2))
        elif m.group("i"):
            tokens.append(("val", I))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self):
        raise ScalarParseError(f"malformed scalar {self.text!r}")

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ScalarParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self) -> Scalar:
        kind, tok = self.peek()
        if kind == "op" and tok in "+-":
            self.take()
            inner = self.unary()
            return -inner if tok == "-" else inner
        return self.atom()

    def atom(self) -> Scalar:
        kind, tok = self.take()
        if kind == "val":
            return tok
        if (kind, tok) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                self.fail()
            return value
        self.fail()

    def parse(self) -> Scalar:
        if not self.tokens:
            self.fail()
        value = self.expr()
        if self.pos != len(self.tokens):
            self.fail()
        return value


def parse_scalar(text: str) -> Scalar:
    return _Parser(text).parse()


def parse_ext_scalar(text: str) -> ExtScalar:
    t = text.strip()
    if t in ("inf", "+inf"):
        return POS_INF
    if t == "-inf":
        return NEG_INF
    return parse_scalar(t)
