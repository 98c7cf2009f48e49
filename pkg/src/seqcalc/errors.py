"""Exception hierarchy shared by every seqcalc module."""

from __future__ import annotations


class SeqCalcError(Exception):
    """Base class for all seqcalc errors."""


class UnsupportedRadical(SeqCalcError, ValueError):
    """The square root does not exist inside Q(i, sqrt2) in the supported shape."""


class NotReal(SeqCalcError, ValueError):
    """A real-only operation received a value with a nonzero imaginary part."""


class ScalarParseError(SeqCalcError, ValueError):
    pass


class MissingPreTerm(SeqCalcError, IndexError):
    """Index -1 was requested from a sequence that carries no pre-term."""

    def __init__(self, name: str | None = None):
        where = f" of {name}" if name else ""
        super().__init__(f"term a(-1){where} requested but no pre-term is attached")


class DivisionByZero(SeqCalcError, ZeroDivisionError):
    """Termwise division hit a zero denominator."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"zero denominator at index {index}")


class BadSupportBound(SeqCalcError, ValueError):
    """A series family has a nonzero term beyond its declared support bound."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        super().__init__(f"family({k}) is nonzero at index {n}, beyond its support bound")


class NotIntegral(SeqCalcError, ValueError):
    def __init__(self, index: int, value: object = None):
        self.index = index
        self.value = value
        super().__init__(f"term at index {index} is not an integer: {value}")


class DegenerateParameter(SeqCalcError, ValueError):
    pass


class NoConvergenceCertificate(SeqCalcError, ArithmeticError):
    pass


class OutsideBorelRegion(SeqCalcError, ValueError):
    pass


class InconsistentConstruction(SeqCalcError, AssertionError):
    """Two independent constructions of the same quantity disagreed."""


class UnknownKey(SeqCalcError, KeyError):
    pass


class RepresentationError(SeqCalcError, ValueError):
    """Terms cannot be written in the requested output format."""


class MissingDataSource(SeqCalcError, FileNotFoundError):
    """No local OEIS snapshot is available and fetching was not enabled."""


class BFileFormatError(SeqCalcError, ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"b-file line {line_no}: {message}")
