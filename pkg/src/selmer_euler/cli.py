"""Command-line entry point ``selmer-euler``.

Exit codes: 0 consistent, 2 theorem violation, 3 hypothesis failure / not
congruent / undetermined, 1 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .congruence import DEFAULT_BOUND
from .iwasawa import DEFAULT_TRUNCATION
from .padic import DEFAULT_PRECISION
from .pipeline.analysis import AnalysisConfig, analyze_pair, local_table, scan
from .pipeline.cache import CacheStore
from .pipeline.records import CurveDatabase, RecordError
from .pipeline.report import emit_report, parse_report

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_db_path() -> Path:
    return Path(str(resources.files("selmer_euler") / "data" / "curves.txt"))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="selmer-euler", description=__doc__.splitlines()[0])
    ap.add_argument("--db", type=Path, default=None, help="curve record file (default: bundled curves)")
    ap.add_argument("--no-cache", action="store_true", help="ignore SELMER_EULER_CACHE")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ld = sub.add_parser("local-data", help="local data of one curve at one prime")
    ld.add_argument("label")
    ld.add_argument("--prime", type=int, required=True)
    ld.add_argument("--field", choices=("Q", "Qi"), default="Q")
    ld.add_argument("--format", choices=("text", "json"), default="text")

    an = sub.add_parser("analyze-pair", help="full analysis of a p-congruent pair")
    an.add_argument("label1")
    an.add_argument("label2")
    an.add_argument("--p", type=int, required=True)
    an.add_argument("--field", choices=("Q", "Qi"), default="Q")
    an.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    an.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    an.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)
    an.add_argument("--assume-irreducible", action="store_true")
    an.add_argument("--format", choices=("text", "json"), default="text")
    an.add_argument("--output", type=Path, help="write the report here instead of stdout")

    sc = sub.add_parser("scan", help="find p-congruent pairs in a record file")
    sc.add_argument("database", type=Path)
    sc.add_argument("--p", type=int, required=True)
    sc.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sc.add_argument("--field", choices=("Q", "Qi"), default="Q")
    sc.add_argument("--format", choices=("text", "json"), default="text")

    rp = sub.add_parser("report", help="re-render a saved JSON report")
    rp.add_argument("input", nargs="?", default="-", help="JSON report file, or - for stdin")
    rp.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _write(text: str, path: Path | None = None):
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    cache = None if args.no_cache else CacheStore.from_env()
    try:
        if args.command == "report":
            text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
            r = parse_report(text)
            _write(emit_report(r, args.format))
            return r.exit_code

        if args.command == "scan":
            db = CurveDatabase.load(args.database)
            hits = scan(db, args.p, args.bound, args.field, cache)
            if args.format == "json":
                _write(json.dumps([{"labels": list(c.labels), "sigma1": list(c.sigma1)} for c in hits],
                                  indent=2) + "\n")
            else:
                for c in hits:
                    _write(f"{c.labels[0]} {c.labels[1]}  |Sigma_1| = {len(c.sigma1)}  "
                           f"Sigma_1 = {{{', '.join(c.sigma1)}}}\n")
            return 0

        db = CurveDatabase.load(args.db or default_db_path())
        if args.command == "local-data":
            rows = local_table(db[args.label].model(args.field), args.prime)
            if args.format == "json":
                _write(json.dumps(rows, sort_keys=True, indent=2) + "\n")
            else:
                for row in rows:
                    _write(f"{args.label} at {row['place']}: Nv={row['Nv']} type={row['kodaira']} f={row['f']} "
                           f"c={row['c']} {row['kind']} a={row['a']} ord(Delta_min)={row['ord_delta_min']} "
                           f"L_v(E,1)^-1={row['L_inverse']}"
                           + (" [review]" if row["needs_review"] else "") + "\n")
            return 0

        cfg = AnalysisConfig(args.bound, args.precision, args.truncation, args.assume_irreducible, cache)
        r = analyze_pair(db, args.label1, args.label2, args.p, args.field, cfg)
        _write(emit_report(r, args.format), args.output)
        return r.exit_code
    except (RecordError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"selmer-euler: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
