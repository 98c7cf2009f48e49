"""Constructors for the named sequence families, plus the textual key grammar.

Families are built from closed forms; constructions by operators (iterated
integrals, insertions) are kept alongside so that the identity registry can
compare the two.

Key grammar, used by the CLI::

    const:a=3            x                    power:k=2
    xk:left:k=3          xk:right:k=3
    exp:right:alpha=1    exp:left:alpha=-1    exp:natural_neg
    hyp:cosh:standard    hyp:sinh:natural
    trig:cos:right       trig:sin:periodic    trig:tan:left
    fib                  fib:nega             fib:pq:P=2,Q=1
    fib:pell             fib:jacobsthal       kbonacci:k=3
    dual:factorial       dual:bell
    comb:factorial       comb:bell            comb:fubini
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import combinatorics as comb
from .errors import DegenerateParameter, InconsistentConstruction, UnknownKey
from .scalar import I, ONE, ZERO, Scalar, parse_scalar, sqrt_in_field
from .sequence import (
    ExtSequence,
    Sequence,
    ext_divide,
    insert_pow,
    int_left,
    int_right,
    iterate,
)


def const_seq(a) -> Sequence:
    a = Scalar.coerce(a)
    return Sequence(lambda n: a, pre_term=a, name=f"const:a={a}")


def x_seq() -> Sequence:
    return Sequence(lambda n: n, pre_term=-1, name="x")


def power_seq(k: int) -> Sequence:
    """``{n^k}`` with ``0^0 = 1``; ``k`` must be a nonnegative integer."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("power_seq supports nonnegative integer exponents only")
    return Sequence(lambda n: n ** k, name=f"power:k={k}")


def geometric_seq(ratio) -> Sequence:
    """``{ratio^n}``, built by repeated multiplication."""
    r = Scalar.coerce(ratio)
    return Sequence.recursive(lambda s, n: ONE if n == 0 else s.term(n - 1) * r)


# -- x^k/k! ------------------------------------------------------------------------


def xk_over_kfact_operator(k: int, variant: str) -> Sequence:
    """``(k-1)``-fold left/right integral of ``{n}`` (``k = 0`` gives ``{1}``)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return const_seq(1)
    integral = {"left": int_left, "right": int_right}[variant]
    return iterate(integral, x_seq(), k - 1)


def xk_over_kfact_closed(k: int, variant: str) -> Sequence:
    """``C(n, k)`` (left) or ``C(n+k-1, k)`` (right)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return const_seq(1)
    if variant == "left":
        return Sequence(lambda n: comb.binomial(n, k))
    if variant == "right":
        return Sequence(lambda n: comb.binomial(n + k - 1, k))
    raise ValueError(f"variant must be 'left' or 'right', got {variant!r}")


def xk_over_kfact(k: int, variant: str = "left") -> Sequence:
    """Sequence analogue of ``x^k/k!``; closed form checked against the integrals."""
    closed = xk_over_kfact_closed(k, variant)
    built = xk_over_kfact_operator(k, variant)

    def rule(n: int):
        value = closed.term(n)
        if value != built.term(n):
            raise InconsistentConstruction(f"x^{k}/{k}! ({variant}) differs at index {n}")
        return value

    return Sequence(rule, name=f"xk:{variant}:k={k}")


# -- exponential family --------------------------------------------------------------


def exp_seq(variant: str, alpha=1) -> Sequence:
    """``{(1+alpha)^n}`` (right), ``{(1-alpha)^-n}`` (left) or ``1, 0, 0, ...``.

    The left variant carries the pre-term ``1 - alpha``.
    """
    if variant == "natural_neg":
        return Sequence(lambda n: 1 if n == 0 else 0, name="exp:natural_neg")
    a = Scalar.coerce(alpha)
    if variant == "right":
        seq = geometric_seq(1 + a)
        seq.name = f"exp:right:alpha={a}"
        return seq
    if variant == "left":
        if a == 1:
            raise DegenerateParameter("the left exponential needs alpha != 1")
        base = 1 - a
        seq = geometric_seq(1 / base)
        return Sequence(seq.term, pre_term=base, name=f"exp:left:alpha={a}")
    raise ValueError(f"unknown exponential variant {variant!r}")


def hyperbolic_seq(kind: str, variant: str = "standard") -> Sequence:
    if kind not in ("cosh", "sinh"):
        raise ValueError(f"unknown hyperbolic kind {kind!r}")
    grow = exp_seq("right", 1)
    if variant == "standard":
        decay = exp_seq("left", -1)
    elif variant == "natural":
        decay = exp_seq("natural_neg")
    else:
        raise ValueError(f"unknown hyperbolic variant {variant!r}")
    half = Scalar(1) / 2
    if kind == "cosh":
        rule = lambda n: (grow.term(n) + decay.term(n)) * half
    else:
        rule = lambda n: (grow.term(n) - decay.term(n)) * half
    return Sequence(rule, name=f"hyp:{kind}:{variant}")


def trig_seq(kind: str, variant: str = "right") -> Sequence:
    """Real/imaginary parts of ``(1+i)^n`` (right), ``(1-i)^-n`` (left), or the period-8 blend."""
    if kind not in ("cos", "sin"):
        raise ValueError(f"unknown trigonometric kind {kind!r}")
    part = (lambda z: z.real) if kind == "cos" else (lambda z: z.imag)
    name = f"trig:{kind}:{variant}"
    if variant == "right":
        e = exp_seq("right", I)
        return Sequence(lambda n: part(e.term(n)), name=name)
    if variant == "left":
        e = exp_seq("left", I)
        return Sequence(lambda n: part(e.term(n)), pre_term=part(e.pre_term), name=name)
    if variant == "periodic":
        r, l = trig_seq(kind, "right"), trig_seq(kind, "left")
        return Sequence(lambda n: r.term(n).sign() * sqrt_in_field(r.term(n) * l.term(n)),
                        name=name)
    raise ValueError(f"unknown trigonometric variant {variant!r}")


def tan_seq(variant: str = "right") -> ExtSequence:
    """``sin/cos`` with ``x/0`` mapped to a signed infinity."""
    seq = ext_divide(trig_seq("sin", variant), trig_seq("cos", variant))
    seq.name = f"trig:tan:{variant}"
    return seq


# -- Fibonacci family ----------------------------------------------------------------


def pq_fibonacci(P=1, Q=1) -> Sequence:
    """``0, 1, then F(n+2) = P F(n+1) + Q F(n)``."""
    P, Q = Scalar.coerce(P), Scalar.coerce(Q)

    def step(s: Sequence, n: int):
        if n < 2:
            return n
        return P * s.term(n - 1) + Q * s.term(n - 2)

    return Sequence.recursive(step, name=f"fib:pq:P={P},Q={Q}")


def fibonacci_seq() -> Sequence:
    seq = pq_fibonacci(1, 1)
    seq.name = "fib"
    return seq


def negafibonacci_seq() -> Sequence:
    f = fibonacci_seq()
    return Sequence(lambda n: f.term(n) if n % 2 else -f.term(n), name="fib:nega")


def kbonacci(k: int) -> Sequence:
    """``k-1`` zeros, a one, then each term is the sum of the previous ``k``."""
    if k < 2:
        raise ValueError("k-bonacci needs k >= 2")

    def step(s: Sequence, n: int):
        if n < k - 1:
            return 0
        if n == k - 1:
            return 1
        if n == k:
            return 1
        # running-sum form: F(n) = 2 F(n-1) - F(n-1-k)
        return 2 * s.term(n - 1) - s.term(n - 1 - k)

    return Sequence.recursive(step, name=f"kbonacci:k={k}")


def deformed_integral(k: int, s: Sequence) -> Sequence:
    """``sum_{l=0}^{k-2} I_0^l I_L^0 s``."""
    if k < 2:
        raise ValueError("the deformed integral needs k >= 2")
    base = int_left(s, 0)
    parts = [insert_pow(base, 0, l) for l in range(k - 1)]

    def rule(n: int):
        total = ZERO
        for p in parts:
            total = total + p.term(n)
        return total

    return Sequence(rule)


# -- sequence duals ----------------------------------------------------------------------


def factorial_dual() -> Sequence:
    """``n -> 2 * sum_j S(n, j) j!``, the exact value of ``sum_k k^n 2^-k``."""
    return Sequence(lambda n: 2 * comb.fubini(n), name="dual:factorial")


def bell_dual_stirling(n: int) -> int:
    return sum(comb.stirling1_unsigned(n, k) * comb.bell(k + 1) for k in range(n + 1))


def bell_dual_binomial(n: int) -> int:
    return sum(comb.factorial(k) * comb.binomial(n, k) ** 2 for k in range(n + 1))


def _bell_dual_recurrence() -> Sequence:
    def step(s: Sequence, n: int):
        if n == 0:
            return 1
        if n == 1:
            return 2
        return 2 * n * s.term(n - 1) - (n - 1) ** 2 * s.term(n - 2)
    return Sequence.recursive(step)


def bell_dual() -> Sequence:
    """Bell dual, built three independent ways that must agree termwise."""
    rec = _bell_dual_recurrence()

    def rule(n: int):
        a = bell_dual_stirling(n)
        b = bell_dual_binomial(n)
        c = int(rec.term(n))
        if not a == b == c:
            raise InconsistentConstruction(f"Bell dual constructions disagree at n={n}: {a}, {b}, {c}")
        return a

    return Sequence(rule, name="dual:bell")


# -- key grammar -------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogKey:
    family: str
    variants: tuple[str, ...] = ()
    params: tuple[tuple[str, str], ...] = field(default=())

    def __str__(self) -> str:
        parts = [self.family, *self.variants]
        if self.params:
            parts.append(",".join(f"{k}={v}" for k, v in self.params))
        return ":".join(parts)

    def param(self, name: str, default: str | None = None) -> str:
        for k, v in self.params:
            if k == name:
                return v
        if default is None:
            raise UnknownKey(f"{self}: missing parameter {name!r}")
        return default

    def build(self) -> Sequence:
        return build_sequence(self)


# family -> (allowed variant tuples, required params with their kinds)
_GRAMMAR: dict[str, tuple[set[tuple[str, ...]], dict[str, str]]] = {
    "const": ({()}, {"a": "scalar"}),
    "x": ({()}, {}),
    "power": ({()}, {"k": "int"}),
    "xk": ({("left",), ("right",)}, {"k": "int"}),
    "exp": ({("right",), ("left",), ("natural_neg",)}, {"alpha": "scalar"}),
    "hyp": ({(k, v) for k in ("cosh", "sinh") for v in ("standard", "natural")}, {}),
    "trig": ({(k, v) for k in ("cos", "sin") for v in ("right", "left", "periodic")}
             | {("tan", "right"), ("tan", "left")}, {}),
    "fib": ({(), ("nega",), ("pq",), ("pell",), ("jacobsthal",)}, {"P": "scalar", "Q": "scalar"}),
    "kbonacci": ({()}, {"k": "int"}),
    "dual": ({("factorial",), ("bell",)}, {}),
    "comb": ({("factorial",), ("bell",), ("fubini",)}, {}),
}

_NEEDS_PARAMS = {
    ("const", ()): ("a",),
    ("power", ()): ("k",),
    ("xk", ("left",)): ("k",),
    ("xk", ("right",)): ("k",),
    ("exp", ("right",)): ("alpha",),
    ("exp", ("left",)): ("alpha",),
    ("fib", ("pq",)): ("P", "Q"),
    ("kbonacci", ()): ("k",),
}


def _canonical_value(kind: str, text: str) -> str:
    if kind == "int":
        try:
            return str(int(text))
        except ValueError:
            raise UnknownKey(f"expected an integer parameter, got {text!r}") from None
    try:
        return str(parse_scalar(text))
    except ValueError:
        raise UnknownKey(f"expected a scalar parameter, got {text!r}") from None


def parse_key(text: str) -> CatalogKey:
    """Parse and canonicalise a key such as ``exp:right:alpha=1/2``."""
    segments = [s.strip() for s in text.strip().split(":")]
    if not segments or not segments[0]:
        raise UnknownKey(f"empty catalog key {text!r}")
    family, rest = segments[0], segments[1:]
    if family not in _GRAMMAR:
        raise UnknownKey(f"unknown sequence family {family!r}")
    allowed, kinds = _GRAMMAR[family]
    raw_params: dict[str, str] = {}
    if rest and "=" in rest[-1]:
        for item in rest.pop().split(","):
            name, eq, value = item.partition("=")
            if not eq or not name.strip():
                raise UnknownKey(f"malformed parameter {item!r} in {text!r}")
            raw_params[name.strip()] = value.strip()
    variants = tuple(rest)
    if variants not in allowed:
        raise UnknownKey(f"unknown variant {':'.join(variants)!r} for family {family!r}")
    needed = _NEEDS_PARAMS.get((family, variants), ())
    if set(raw_params) != set(needed):
        raise UnknownKey(f"{text!r}: expected parameters {sorted(needed)}, got {sorted(raw_params)}")
    params = tuple((name, _canonical_value(kinds[name], raw_params[name])) for name in needed)
    return CatalogKey(family, variants, params)


def build_sequence(key: CatalogKey | str) -> Sequence:
    if isinstance(key, str):
        key = parse_key(key)
    f, v = key.family, key.variants
    if f == "const":
        seq = const_seq(parse_scalar(key.param("a")))
    elif f == "x":
        seq = x_seq()
    elif f == "power":
        seq = power_seq(int(key.param("k")))
    elif f == "xk":
        seq = xk_over_kfact(int(key.param("k")), v[0])
    elif f == "exp":
        alpha = parse_scalar(key.param("alpha")) if v[0] != "natural_neg" else ONE
        seq = exp_seq(v[0], alpha)
    elif f == "hyp":
        seq = hyperbolic_seq(v[0], v[1])
    elif f == "trig":
        seq = tan_seq(v[1]) if v[0] == "tan" else trig_seq(v[0], v[1])
    elif f == "fib":
        if not v:
            seq = fibonacci_seq()
        elif v[0] == "nega":
            seq = negafibonacci_seq()
        elif v[0] == "pell":
            seq = pq_fibonacci(2, 1)
        elif v[0] == "jacobsthal":
            seq = pq_fibonacci(1, 2)
        else:
            seq = pq_fibonacci(parse_scalar(key.param("P")), parse_scalar(key.param("Q")))
    elif f == "kbonacci":
        seq = kbonacci(int(key.param("k")))
    elif f == "dual":
        seq = factorial_dual() if v[0] == "factorial" else bell_dual()
    elif f == "comb":
        fn = {"factorial": comb.factorial, "bell": comb.bell, "fubini": comb.fubini}[v[0]]
        seq = Sequence(fn)
    else:  # pragma: no cover - parse_key rejects these
        raise UnknownKey(str(key))
    seq.name = str(key)
    return seq


# Families in table order; parametric families
# are shown with a representative parameter.
APPENDIX_ROWS: list[tuple[str, str]] = [
    ("Constant function (a=1)", "const:a=1"),
    ("Power function (k=2)", "power:k=2"),
    ("Exponential function, right (alpha=1)", "exp:right:alpha=1"),
    ("Exponential function, left (alpha=-1)", "exp:left:alpha=-1"),
    ("Exponential function, natural", "exp:natural_neg"),
    ("Hyperbolic cosine", "hyp:cosh:standard"),
    ("Hyperbolic sine", "hyp:sinh:standard"),
    ("Hyperbolic cosine, natural", "hyp:cosh:natural"),
    ("Hyperbolic sine, natural", "hyp:sinh:natural"),
    ("Cosine, right", "trig:cos:right"),
    ("Sine, right", "trig:sin:right"),
    ("Tangent, right", "trig:tan:right"),
    ("Cosine, left", "trig:cos:left"),
    ("Sine, left", "trig:sin:left"),
    ("Tangent, left", "trig:tan:left"),
    ("Cosine, periodic", "trig:cos:periodic"),
    ("Sine, periodic", "trig:sin:periodic"),
    ("Factorial dual", "dual:factorial"),
    ("Bell number dual", "dual:bell"),
]
