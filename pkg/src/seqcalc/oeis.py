"""Offline-first access to OEIS b-files.

A snapshot is a directory holding ``bNNNNNN.txt`` b-files and, optionally, a
``stripped`` index (``A000045 ,0,1,1,2,...,`` per line, plain or gzipped).
The network is only touched by :class:`Fetcher`, which the CLI enables behind
``--fetch``.
"""

from __future__ import annotations

import gzip
import os
import re
import time
import urllib.request
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence as Seq

from .errors import BFileFormatError, MissingDataSource, NotIntegral

CACHE_ENV = "SEQCALC_OEIS_CACHE"
USER_AGENT = "seqcalc-oeis-client/0.1 (offline-first b-file cache; exact sequence checks)"
BFILE_URL = "https://oeis.org/{anum}/b{digits}.txt"
MIN_DELAY_S = 1.0

_ANUM = re.compile(r"^A(\d{6})$")
_BFILE_NAME = re.compile(r"^b(\d{6})\.txt$")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env).expanduser()
    return Path.home() / ".cache" / "seqcalc" / "oeis"


def normalize_anum(anum: str | int) -> str:
    if isinstance(anum, int):
        return f"A{anum:06d}"
    text = anum.strip().upper()
    if text.isdigit():
        return f"A{int(text):06d}"
    if not _ANUM.match(text):
        raise ValueError(f"not an A-number: {anum!r}")
    return text


# -- b-file grammar ----------------------------------------------------------------


def integer_terms(terms: Iterable) -> list[int]:
    """Exact integers from scalars/fractions/ints; raises NotIntegral otherwise."""
    out = []
    for n, t in enumerate(terms):
        if isinstance(t, bool):
            raise NotIntegral(n, t)
        if isinstance(t, int):
            out.append(t)
            continue
        if isinstance(t, Fraction):
            if t.denominator != 1:
                raise NotIntegral(n, t)
            out.append(int(t))
            continue
        is_integer = getattr(t, "is_integer", None)
        if callable(is_integer) and is_integer():
            out.append(int(t))
            continue
        raise NotIntegral(n, t)
    return out


def format_bfile(terms: Iterable, offset: int = 0, comments: Iterable[str] = ()) -> str:
    """Lines ``n a(n)`` with LF endings, preceded by optional ``#`` comment lines."""
    values = integer_terms(terms)
    lines = [f"# {c}" if c else "#" for c in comments]
    lines += [f"{offset + i} {v}" for i, v in enumerate(values)]
    return "".join(line + "\n" for line in lines)


def parse_bfile(text: str, expect_offset: int | None = None) -> tuple[int, list[int]]:
    """Return ``(offset, terms)``; indices must be consecutive.

    Blank lines and ``#`` comments are skipped anywhere, which keeps real OEIS
    files (that sometimes end with blank lines) readable.
    """
    offset: int | None = None
    terms: list[int] = []
    for line_no, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BFileFormatError(line_no, f"expected 'n a(n)', got {raw!r}")
        try:
            n, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileFormatError(line_no, f"non-integer field in {raw!r}") from None
        if offset is None:
            offset = n
            if expect_offset is not None and n != expect_offset:
                raise BFileFormatError(line_no, f"first index {n}, expected {expect_offset}")
        elif n != offset + len(terms):
            raise BFileFormatError(line_no, f"index {n} out of sequence")
        terms.append(value)
    return (0 if offset is None else offset), terms


def read_bfile(path: str | os.PathLike) -> list[int]:
    return parse_bfile(Path(path).read_text(encoding="utf-8"))[1]


def write_bfile(path: str | os.PathLike, terms: Iterable, offset: int = 0,
                comments: Iterable[str] = ()) -> None:
    Path(path).write_bytes(format_bfile(terms, offset, comments).encode("utf-8"))


def parse_stripped(text: str) -> dict[str, list[int]]:
    """``stripped`` index lines look like ``A000045 ,0,1,1,2,3,``."""
    index: dict[str, list[int]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        anum, _, rest = line.partition(" ")
        values = [int(v) for v in rest.strip().strip(",").split(",") if v.strip()]
        index[normalize_anum(anum)] = values
    return index


# -- snapshot and matching ------------------------------------------------------------


def contains_run(haystack: Seq[int], needle: Seq[int]) -> int | None:
    """Position of the first contiguous occurrence of ``needle``, else None."""
    n, m = len(haystack), len(needle)
    if m == 0:
        return 0
    first = needle[0]
    for i in range(n - m + 1):
        if haystack[i] == first and list(haystack[i:i + m]) == list(needle):
            return i
    return None


@dataclass
class Match:
    anum: str
    position: int
    source: str


@dataclass
class OeisSnapshot:
    """Read-only view of a snapshot directory."""

    directory: Path
    _entries: dict[str, tuple[list[int], str]] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.directory = Path(self.directory)

    @property
    def present(self) -> bool:
        return self.directory.is_dir() and bool(self.entries())

    def entries(self) -> dict[str, tuple[list[int], str]]:
        if self._entries is not None:
            return self._entries
        entries: dict[str, tuple[list[int], str]] = {}
        if self.directory.is_dir():
            for name in ("stripped", "stripped.gz"):
                path = self.directory / name
                if path.is_file():
                    raw = path.read_bytes()
                    text = (gzip.decompress(raw) if name.endswith(".gz") else raw).decode("utf-8")
                    for anum, values in parse_stripped(text).items():
                        entries[anum] = (values, name)
            # b-files are longer than stripped prefixes, so they win
            for path in sorted(self.directory.iterdir()):
                m = _BFILE_NAME.match(path.name)
                if m:
                    entries[f"A{m.group(1)}"] = (read_bfile(path), path.name)
        self._entries = entries
        return entries

    def get(self, anum: str) -> list[int] | None:
        hit = self.entries().get(normalize_anum(anum))
        return None if hit is None else hit[0]

    def match(self, terms: Seq[int]) -> list[Match]:
        out = []
        for anum, (values, source) in sorted(self.entries().items()):
            pos = contains_run(values, terms)
            if pos is not None:
                out.append(Match(anum, pos, source))
        return out


def open_snapshot(directory: str | os.PathLike | None = None) -> OeisSnapshot:
    """Snapshot at ``directory`` (default cache dir); MissingDataSource if empty."""
    snap = OeisSnapshot(Path(directory) if directory is not None else default_cache_dir())
    if not snap.present:
        raise MissingDataSource(f"no OEIS snapshot data in {snap.directory}")
    return snap


# -- network -----------------------------------------------------------------------------


class Fetcher:
    """Rate-limited b-file downloader writing into a snapshot directory."""

    def __init__(self, directory: str | os.PathLike, delay: float = MIN_DELAY_S,
                 opener=None, clock=time.monotonic, sleep=time.sleep):
        self.directory = Path(directory)
        self.delay = max(delay, MIN_DELAY_S)
        self._open = opener or urllib.request.urlopen
        self._clock = clock
        self._sleep = sleep
        self._last: float | None = None

    def _wait(self) -> None:
        if self._last is not None:
            remaining = self.delay - (self._clock() - self._last)
            if remaining > 0:
                self._sleep(remaining)
        self._last = self._clock()

    def fetch(self, anum: str) -> Path:
        anum = normalize_anum(anum)
        target = self.directory / f"b{anum[1:]}.txt"
        if target.is_file():
            return target
        self._wait()
        request = urllib.request.Request(BFILE_URL.format(anum=anum, digits=anum[1:]),
                                         headers={"User-Agent": USER_AGENT})
        with self._open(request, timeout=30) as resp:
            text = resp.read().decode("utf-8")
        parse_bfile(text)  # refuse to cache something that is not a b-file
        self.directory.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target
