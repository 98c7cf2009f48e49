"""Command-line interface: ``seqcalc gen | verify | verify-all | table | oeis-match | list``.

Exit codes: 0 success, 1 verification failure, 2 usage error or unknown key,
3 representation error, 4 missing data source.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence as Seq

from . import identities, oeis
from .catalog import APPENDIX_ROWS, build_sequence, parse_key
from .errors import (
    BFileFormatError,
    MissingDataSource,
    NotIntegral,
    RepresentationError,
    SeqCalcError,
    UnknownKey,
)
from .scalar import format_scalar

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_REPR = 3
EXIT_NO_DATA = 4

FORMATS = ("plain", "csv", "json", "bfile")
APPENDIX_TERMS = 12


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit code but route it through main
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def render(key: str, terms: list, fmt: str) -> str:
    """Serialise exact terms; every scalar is written as a string, never a float."""
    if fmt == "plain":
        return ", ".join(format_scalar(t) for t in terms) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "value"])
        for n, t in enumerate(terms):
            writer.writerow([n, format_scalar(t)])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"key": key, "terms": [format_scalar(t) for t in terms]}) + "\n"
    if fmt == "bfile":
        try:
            return oeis.format_bfile(terms, comments=[f"seqcalc {key}"])
        except NotIntegral as exc:
            raise RepresentationError(f"{key} cannot be written as a b-file: {exc}") from None
    raise RepresentationError(f"unknown format {fmt!r}")


def _terms(key: str, count: int) -> tuple[str, list]:
    parsed = parse_key(key)
    return str(parsed), build_sequence(parsed).prefix(count)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.terms < 1:
        raise _UsageError("--terms must be >= 1")
    key, terms = _terms(args.key, args.terms)
    _emit(render(key, terms, args.format), args.out)
    return EXIT_OK


def _print_reports(reports: list[identities.VerificationReport], as_json: bool) -> None:
    if as_json:
        print(identities.reports_to_json(reports))
        return
    for r in reports:
        line = f"{r.status.upper():<24} {r.key}  [{r.mode}, scanned {r.scanned}, {r.elapsed_ms:.1f} ms]"
        if r.first_mismatch:
            fm = r.first_mismatch
            line += f"  first mismatch at {fm['index']}: {fm['lhs']} vs {fm['rhs']}"
        if r.detail and r.status != identities.PASS:
            line += f"  ({r.detail})"
        print(line)
    passed = sum(r.passed for r in reports)
    print(f"{passed}/{len(reports)} identities pass or reproduce their documented discrepancy")


def _overrides(args) -> dict:
    return {"N": args.terms} if args.terms is not None else {}


def cmd_verify(args) -> int:
    unknown = [k for k in args.keys if k not in identities.REGISTRY]
    if unknown:
        raise UnknownKey(f"unknown identity key(s): {', '.join(unknown)}")
    reports = [identities.verify(k, _overrides(args)) for k in args.keys]
    _print_reports(reports, args.json)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_verify_all(args) -> int:
    reports = identities.verify_all(_overrides(args), workers=args.workers)
    _print_reports(reports, args.json)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def appendix_table(count: int = APPENDIX_TERMS) -> list[tuple[str, str, list[str]]]:
    rows = []
    for label, key in APPENDIX_ROWS:
        rows.append((label, key, [format_scalar(t) for t in build_sequence(key).prefix(count)]))
    return rows


def cmd_table(args) -> int:
    if args.appendix:
        rows = appendix_table(args.terms)
    elif args.keys:
        rows = []
        for k in args.keys:
            key, terms = _terms(k, args.terms)
            rows.append((key, key, [format_scalar(t) for t in terms]))
    else:
        raise _UsageError("table needs --appendix or at least one key")
    width = max(len(label) for label, _, _ in rows)
    for label, key, terms in rows:
        print(f"{label:<{width}}  {', '.join(terms)}")
    return EXIT_OK


def cmd_list(args) -> int:
    if args.markdown:
        print("| key | mode | statement |")
        print("|---|---|---|")
        for spec in identities.list_identities():
            print(f"| `{spec.key}` | {spec.mode} | {spec.statement.replace('|', '/')} |")
    else:
        for spec in identities.list_identities():
            print(f"{spec.key:<36} {spec.mode:<15} {spec.statement}")
    return EXIT_OK


def cmd_oeis_match(args) -> int:
    key, terms = _terms(args.key, args.terms)
    try:
        values = oeis.integer_terms(terms)
    except NotIntegral as exc:
        raise RepresentationError(f"{key} is not integer-valued: {exc}") from None
    directory = Path(args.snapshot) if args.snapshot else oeis.default_cache_dir()
    if args.fetch:
        fetcher = oeis.Fetcher(directory)
        for anum in args.fetch:
            fetcher.fetch(anum)
    snapshot = oeis.open_snapshot(directory)
    matches = snapshot.match(values)
    if args.json:
        print(json.dumps({"key": key, "terms": [str(v) for v in values],
                          "matches": [{"anum": m.anum, "offset": m.position, "source": m.source}
                                      for m in matches]}))
    else:
        for m in matches:
            print(f"{m.anum}  (run starts at stored position {m.position}, from {m.source})")
        if not matches:
            print(f"no match for {key} in {directory}")
    return EXIT_OK if matches else EXIT_FAIL


def cmd_read_bfile(args) -> int:
    text = Path(args.path).read_text(encoding="utf-8")
    _, terms = oeis.parse_bfile(text)
    _emit(render(args.path, terms, args.format), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqcalc", description="Exact sequence calculus toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="print the first terms of a catalog sequence")
    p.add_argument("key", help="catalog key, e.g. trig:cos:right or exp:left:alpha=1/2")
    p.add_argument("--terms", "-n", type=int, default=12)
    p.add_argument("--format", "-f", choices=FORMATS, default="plain")
    p.add_argument("--out", "-o", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run selected identities")
    p.add_argument("keys", nargs="+")
    p.add_argument("--terms", "-n", type=int, help="override the prefix length N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="run every registered identity")
    p.add_argument("--terms", "-n", type=int, help="override the prefix length N")
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("table", help="print rows of 12 terms")
    p.add_argument("keys", nargs="*")
    p.add_argument("--appendix", action="store_true", help="every listed family in order")
    p.add_argument("--terms", "-n", type=int, default=APPENDIX_TERMS)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("list", help="list registered identities")
    p.add_argument("--markdown", action="store_true")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("oeis-match", help="look a prefix up in a local OEIS snapshot")
    p.add_argument("key")
    p.add_argument("--terms", "-n", type=int, default=12)
    p.add_argument("--snapshot", help=f"snapshot directory (default ${oeis.CACHE_ENV} or ~/.cache/seqcalc/oeis)")
    p.add_argument("--fetch", nargs="+", metavar="ANUM",
                   help="download these b-files into the snapshot first (network)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oeis_match)

    p = sub.add_parser("read-bfile", help="re-import a b-file and print its terms")
    p.add_argument("path")
    p.add_argument("--format", "-f", choices=FORMATS, default="plain")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_read_bfile)
    return parser


def main(argv: Seq[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"seqcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownKey as exc:
        print(f"seqcalc: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RepresentationError, BFileFormatError) as exc:
        print(f"seqcalc: error: {exc}", file=sys.stderr)
        return EXIT_REPR
    except MissingDataSource as exc:
        print(f"seqcalc: error: {exc}", file=sys.stderr)
        return EXIT_NO_DATA
    except SeqCalcError as exc:
        print(f"seqcalc: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
