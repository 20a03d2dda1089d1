"""Command-line interface.

Exit codes: 0 success, 1 computation error, 2 usage error, 3 census guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import algebra, counting, montecarlo, oracle, squares
from .numerics import to_scientific, to_significant

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

FORMATS = ("table", "csv", "json")


# -- output helpers -----------------------------------------------------------------

def _prob(p: Fraction, digits: int) -> str:
    return to_significant(p, digits)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(map(str, header))] + [[str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _bundle(name: str, args: argparse.Namespace, payload, started: float) -> str:
    doc = {
        "command": name,
        "version": __version__,
        "arguments": {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "deterministic")},
        "payload": payload,
    }
    if not args.deterministic:
        doc["metadata"] = {
            "elapsed_seconds": round(time.perf_counter() - started, 6),
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(fmt: str, name: str, args, header, rows, payload, started) -> str:
    if fmt == "json":
        return _bundle(name, args, payload, started)
    if fmt == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def _order(args: argparse.Namespace, parser: argparse.ArgumentParser, least: int = 2) -> int:
    n = args.n if args.n is not None else args.n_opt
    if n is None:
        parser.error("an order n is required")
    if n < least:
        parser.error(f"n must be >= {least}")
    return n


# -- commands --------------------------------------------------------------------------

def cmd_count(args, parser) -> str:
    n = _order(args, parser)
    started = time.perf_counter()
    b = counting.breakdown(n)
    d = args.digits
    rows = [
        ("omega", b.omega, to_scientific(b.omega, 6)),
        ("sigma", b.sigma, to_scientific(b.sigma, 6)),
        ("S(n)", b.s_exact, to_scientific(b.s_exact, 6)),
        ("sigma/S(n)", str(b.ratio), _prob(b.ratio, d)),
        ("P(consecutive)", str(b.prob_consecutive), _prob(b.prob_consecutive, d)),
    ]
    payload = {
        "n": n,
        "omega": str(b.omega),
        "sigma": str(b.sigma),
        "s_asymptotic": str(b.s_exact),
        "ratio": str(b.ratio),
        "ratio_decimal": _prob(b.ratio, d),
        "prob_consecutive": str(b.prob_consecutive),
        "prob_decimal": _prob(b.prob_consecutive, d),
    }
    if args.breakdown:
        extra = [("R", b.r), ("M", b.m_term), ("RC", b.rc), ("RCC", b.rcc), ("RRCC", b.rrcc)]
        rows += [(k, v, to_scientific(v, 6) if v else "0") for k, v in extra]
        payload.update({k.lower(): str(v) for k, v in extra})
    return _emit(args.format, "count", args, ("quantity", "exact", "approx"), rows, payload, started)


def cmd_pmf(args, parser) -> str:
    n = _order(args, parser)
    started = time.perf_counter()
    table = counting.pmf_table(n)
    pooled = n in montecarlo.POOLED_ORDERS and not args.all
    entries = []
    for x, p in table.entries.items():
        if pooled and x >= montecarlo.POOL_FROM:
            continue
        entries.append((str(x), p))
    if pooled:
        entries.append((f"{montecarlo.POOL_FROM}+", table.tail(montecarlo.POOL_FROM)))
    rows = [(x, _prob(p, args.digits), str(p)) for x, p in entries]
    payload = {"n": n, "entries": [{"x": x, "probability": str(p), "decimal": _prob(p, args.digits)} for x, p in entries]}
    return _emit(args.format, "pmf", args, ("x", "probability", "fraction"), rows, payload, started)


def cmd_census(args, parser) -> str:
    n = _order(args, parser, least=1)
    started = time.perf_counter()
    report = oracle.census(
        n, force=args.force, workers=args.workers, progress_every=10**7 if args.force else 0
    )
    if args.format == "json":
        return report.to_json() if args.deterministic else _bundle("census", args, report.to_dict(), started)
    rows = [("total", report.total)]
    rows += [(f"x={x}", c) for x, c in sorted(report.by_x.items())]
    rows += [(f"y={y}", c) for y, c in sorted(report.by_y.items())]
    rows += [("row_consecutive", report.row_consecutive), ("row_and_col", report.row_and_col), ("latin", report.latin)]
    return _emit(args.format, "census", args, ("field", "count"), rows, None, started)


def cmd_sample(args, parser) -> str:
    n = _order(args, parser, least=1)
    rng = squares.make_rng(args.seed)
    return "\n".join(squares.format_square(squares.sample_uniform(n, rng)) for _ in range(args.count))


def cmd_simulate(args, parser) -> str:
    n = _order(args, parser)
    started = time.perf_counter()
    stats = montecarlo.run_simulation(
        n,
        args.iterations,
        args.seed,
        args.workers,
        trace_resolution=args.trace_resolution if args.trace else 0,
    )
    table = counting.pmf_table(n)
    checks = montecarlo.band_check(stats, table)
    if args.trace:
        Path(args.trace).write_text(montecarlo.trace_csv(stats, counting.pmf_support(n)))
    if args.format == "json":
        if args.deterministic:
            return montecarlo.summary_json(stats, checks)
        return _bundle("simulate", args, montecarlo.summary_dict(stats, checks), started)
    rows = [
        (c.label, stats_count(stats, c), _prob(c.empirical, args.digits), _prob(c.exact, args.digits),
         f"{c.band_halfwidth:.3g}", "yes" if c.within else "NO")
        for c in checks
    ]
    return _emit(args.format, "simulate", args, ("x", "count", "empirical", "exact", "band", "within"), rows, None, started)


def stats_count(stats: montecarlo.SampleStats, check: montecarlo.BandCheck) -> int:
    if check.tail:
        return sum(c for x, c in stats.counts.items() if x >= check.x)
    return stats.counts.get(check.x, 0)


def _parse_group(spec: str) -> algebra.CayleyTable:
    kind, _, arg = spec.partition(":")
    if kind == "cyclic":
        return algebra.cyclic_group(int(arg))
    if kind == "trivial":
        return algebra.trivial_group()
    if kind == "file":
        return algebra.parse_table(Path(arg).read_text())
    raise ValueError(f"unknown group spec {spec!r} (use cyclic:K, trivial or file:PATH)")


def _rees_spec(args) -> algebra.ReesSpec:
    group = _parse_group(args.group)
    if args.sandwich:
        rows = tuple(tuple(int(v) for v in r.split(",")) for r in args.sandwich.split(";"))
        return algebra.ReesSpec(group, args.i, args.lam, rows)
    return algebra.ReesSpec.identity_sandwich(group, args.i, args.lam)


def cmd_algebra(args, parser) -> str:
    started = time.perf_counter()
    if args.action == "analyze":
        text = sys.stdin.read() if args.path == "-" else Path(args.path).read_text()
        table = algebra.parse_table(text)
    else:
        table = algebra.build_rees(_rees_spec(args))
    report = algebra.analyze(table)
    payload = report.to_dict()
    if args.action == "rees" and args.show_table:
        payload["table"] = [list(r) for r in table.table]
    if args.format == "json":
        if args.deterministic:
            return json.dumps(payload, sort_keys=True, indent=2) + "\n"
        return _bundle("algebra", args, payload, started)
    rows = [(k, json.dumps(v)) for k, v in sorted(payload.items())]
    out = _emit(args.format, "algebra", args, ("property", "value"), rows, None, started)
    if args.action == "rees" and args.show_table and args.format == "table":
        out = algebra.format_table(table) + "\n" + out
    return out


def report_table1(digits: int, orders=range(2, 9)) -> str:
    rows = []
    for n in orders:
        p = counting.prob_consecutive(n)
        rows.append((n, counting.count_consecutive(n), counting.count_all(n), _prob(p, digits), to_scientific(p, 7)))
    return _csv(("n", "sigma", "omega", "probability", "probability_sci"), rows)


def report_table2(digits: int, orders=range(2, 10)) -> str:
    rows = []
    for n in orders:
        s = counting.count_consecutive(n)
        approx = counting.asymptotic_sigma(n)
        ratio = Fraction(s, approx)
        rows.append((n, s, approx, to_scientific(s, 6), to_scientific(approx, 6), _prob(ratio, digits)))
    return _csv(("n", "sigma", "s_asymptotic", "sigma_sci", "s_sci", "ratio"), rows)


def cmd_report(args, parser) -> str:
    parts = {
        "table1": lambda: report_table1(args.digits),
        "table2": lambda: report_table2(args.digits),
    }
    wanted = list(parts) if args.which == "tables" else [args.which]
    outputs = {name: parts[name]() for name in wanted}
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            (out / f"{name}.csv").write_text(text)
        return "".join(f"wrote {out / (name + '.csv')}\n" for name in outputs)
    return "\n".join(outputs.values())


# -- parser ------------------------------------------------------------------------------

def _add_order(p: argparse.ArgumentParser) -> None:
    p.add_argument("n", nargs="?", type=int, help="order of the squares")
    p.add_argument("--n", dest="n_opt", type=int, help=argparse.SUPPRESS)


def _add_common(p: argparse.ArgumentParser, fmt_default: str = "table") -> None:
    p.add_argument("--format", choices=FORMATS, default=fmt_default)
    p.add_argument("--digits", type=int, default=12, help="significant digits for decimals")
    p.add_argument("--deterministic", action="store_true", help="omit timing metadata")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equisquare", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact and asymptotic counts")
    _add_order(p)
    _add_common(p)
    p.add_argument("--breakdown", action="store_true", help="include every lemma term")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("pmf", help="distribution of the consecutive-line count")
    _add_order(p)
    _add_common(p)
    p.add_argument("--all", action="store_true", help="do not pool x >= 3 for n in 3..5")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("census", help="brute-force census (small n)")
    _add_order(p)
    _add_common(p, "json")
    p.add_argument("--force", action="store_true", help="run past the guard")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("sample", help="draw uniform squares")
    _add_order(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_sample, deterministic=True)

    p = sub.add_parser("simulate", help="Monte Carlo run with band checks")
    _add_order(p)
    _add_common(p, "json")
    p.add_argument("--iterations", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace", metavar="PATH", help="write the running-frequency CSV here")
    p.add_argument("--trace-resolution", type=int, default=montecarlo.DEFAULT_RESOLUTION)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("algebra", help="Cayley-table analysis and Rees semigroups")
    asub = p.add_subparsers(dest="action", required=True)
    a = asub.add_parser("analyze", help="analyze a table file ('-' for stdin)")
    a.add_argument("path")
    _add_common(a, "json")
    a = asub.add_parser("rees", help="build M(G; I, Lambda; P) and analyze it")
    a.add_argument("--group", default="cyclic:2", help="cyclic:K, trivial or file:PATH")
    a.add_argument("--i", type=int, default=1)
    a.add_argument("--lambda", dest="lam", type=int, default=1)
    a.add_argument("--sandwich", help="rows of P separated by ';', entries by ','")
    a.add_argument("--show-table", action="store_true")
    _add_common(a, "json")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("report", help="reproduce the probability and count tables as CSV")
    p.add_argument("which", choices=("tables", "table1", "table2"))
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_report, deterministic=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args, parser)
    except oracle.GuardExceeded as exc:
        print(f"equisquare: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"equisquare: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
