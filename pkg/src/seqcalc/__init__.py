"""Exact arithmetic for the sequence version of calculus.

Sequences over Q(i, sqrt2) with left/right differences and sums, the named
function families built from them, an executable identity registry and
certified summation of the infinite series that appear along the way.
"""

from __future__ import annotations

from .catalog import CatalogKey, build_sequence, parse_key
from .identities import verify, verify_all
from .scalar import Scalar, format_scalar, parse_scalar
from .sequence import Sequence

__all__ = [
    "CatalogKey",
    "Scalar",
    "Sequence",
    "build_sequence",
    "format_scalar",
    "parse_key",
    "parse_scalar",
    "verify",
    "verify_all",
]
__version__ = "0.1.0"
