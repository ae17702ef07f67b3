"""Command line: betti, check-np, threshold, section, scan, cache-info.

Exit codes: 0 computed/decided, 1 usage error, 2 undecided within budget.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .betti import (
    BettiTable,
    Holds,
    NpVerdict,
    ThresholdResult,
    betti_table,
    check_np,
    conjecture_scan,
    np_threshold,
)
from .cache import ENGINE_VERSION, open_cache
from .certificates import CertificateError, SectionCertificate, default_section
from .config import RunConfig
from .koszul import Certification, VeroneseContext

EXIT_OK, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# rendering


def render_betti(table: BettiTable, fmt: str) -> str:
    if fmt == "json":
        return _dump(table.to_json())
    if fmt == "csv":
        return _csv(["i", "j", "dim", "certification"],
                    [[i, j, e.value, e.certification.value] for (i, j), e in sorted(table.entries.items())])
    cols = list(range(table.i_max + 1))
    skipped = set(table.skipped)
    grid = []
    for q in range(table.q_max + 1):
        cells = []
        for i in cols:
            if i == 0:
                cells.append("1" if q == 0 else ".")
                continue
            if (i, i + q) in skipped:
                cells.append("?")
                continue
            e = table.entries.get((i, i + q))
            if e is None or e.value == 0:
                cells.append(".")
            else:
                mark = "*" if e.certification is Certification.UPPER_BOUND else ""
                cells.append(f"{e.value}{mark}")
        grid.append(cells)
    totals = [str(sum(int(r[i].rstrip("*")) for r in grid if r[i] not in (".", "?"))) for i in cols]
    width = max(len(c) for c in [*totals, *(c for r in grid for c in r), str(cols[-1])])
    lines = [f"betti table of the degree-{table.ctx.d} Veronese ring of P^{table.ctx.n}",
             "       " + " ".join(str(i).rjust(width) for i in cols),
             "total: " + " ".join(t.rjust(width) for t in totals)]
    for q, cells in enumerate(grid):
        lines.append(f"{q:>5}: " + " ".join(c.rjust(width) for c in cells))
    if any("*" in c for r in grid for c in r):
        lines.append("* modular upper bound, not certified over QQ")
    if skipped:
        lines.append("? skipped (over budget)")
    return "\n".join(lines)


def render_verdict(ctx: VeroneseContext, v: NpVerdict, fmt: str) -> str:
    if fmt == "json":
        return _dump({"n": ctx.n, "d": ctx.d, **v.to_json()})
    if fmt == "csv":
        w = v.witness or ("", "")
        return _csv(["n", "d", "p", "holds", "witness_q", "witness_dim", "certification", "certificate"],
                    [[ctx.n, ctx.d, v.p, v.holds.value, w[0], w[1], v.certification, v.certificate or ""]])
    line = f"N_{v.p} for the degree-{ctx.d} Veronese embedding of P^{ctx.n}: {v.holds.value}"
    if v.witness is not None:
        line += f"\n  witness: H^2(wedge^{v.witness[0]} E_{ctx.d}) has dimension {v.witness[1]}"
    line += f"\n  certification: {v.certification}"
    if v.certificate:
        line += f" ({v.certificate})"
    if v.primes:
        line += f"\n  primes: {', '.join(map(str, v.primes))}"
    return line


def render_threshold(ctx: VeroneseContext, res: ThresholdResult, fmt: str) -> str:
    if fmt == "json":
        return _dump({"n": ctx.n, "d": ctx.d, **res.to_json()})
    if fmt == "csv":
        return _csv(["n", "d", "p", "holds", "certification"],
                    [[ctx.n, ctx.d, v.p, v.holds.value, v.certification] for v in res.verdicts])
    lines = [f"N_p threshold for the degree-{ctx.d} Veronese embedding of P^{ctx.n}: {res.label}"]
    last = res.verdicts[-1] if res.verdicts else None
    if last is not None and last.holds is not Holds.YES:
        lines.append(render_verdict(ctx, last, "text"))
    return "\n".join(lines)


def render_section(cert: SectionCertificate, fmt: str) -> str:
    if fmt == "json":
        return _dump(cert.to_json())
    if fmt == "csv":
        return _csv(["wedge", "monomial", "coefficient"],
                    [[" ".join(map(str, idx)), m, c] for idx, m, c in cert.to_json()["tensor"]])
    ctx = cert.ctx
    return "\n".join([
        f"section of wedge^{cert.q} E_{ctx.d}({cert.t}) on P^{ctx.n}",
        f"  terms: {len(cert.tensor)}",
        f"  nonzero: {bool(cert.tensor)}",
        f"  in kernel of alpha_{cert.t}: {not cert.image()}",
        f"  verified: {cert.verify()}",
    ])


def render_scan(rows, fmt: str) -> str:
    if fmt == "json":
        return _dump([r.to_json() for r in rows])
    table = [[r.n, r.d, "all" if r.conjectured is None else r.conjectured, r.status,
              r.computed.label if r.computed else "", "" if r.agrees is None else r.agrees, r.columns]
             for r in rows]
    header = ["n", "d", "conjectured", "status", "computed", "agrees", "columns"]
    if fmt == "csv":
        return _csv(header, table)
    widths = [max(len(str(x)) for x in col) for col in zip(header, *table)]
    return "\n".join(" ".join(str(x).rjust(w) for x, w in zip(row, widths)) for row in [header, *table])


# ---------------------------------------------------------------------------
# commands


def _ctx(args) -> VeroneseContext:
    if args.n < 1 or args.d < 1:
        raise UsageError(f"need n >= 1 and d >= 1 (got n={args.n}, d={args.d})")
    return VeroneseContext(args.n, args.d)


def cmd_betti(args, config: RunConfig):
    ctx = _ctx(args)
    if (args.imax is not None and args.imax < 0) or (args.qmax is not None and args.qmax < 0):
        raise UsageError("--imax and --qmax must be >= 0")
    table = betti_table(ctx, args.imax, args.qmax, config)
    out = render_betti(table, config.output_format)
    if table.skipped:
        path = Path(args.partial_out or f"betti_n{ctx.n}_d{ctx.d}_partial.json")
        path.write_text(_dump(table.to_json()))
        print(f"partial table written to {path}", file=sys.stderr)
        return out, EXIT_UNDECIDED
    return out, EXIT_OK


def cmd_check_np(args, config: RunConfig):
    ctx = _ctx(args)
    if args.p < 0:
        raise UsageError("--p must be >= 0")
    v = check_np(ctx, args.p, config)
    code = EXIT_OK if v.holds in (Holds.YES, Holds.NO) else EXIT_UNDECIDED
    return render_verdict(ctx, v, config.output_format), code


def cmd_threshold(args, config: RunConfig):
    ctx = _ctx(args)
    if args.pmax < 0:
        raise UsageError("--pmax must be >= 0")
    res = np_threshold(ctx, args.pmax, config)
    last = res.verdicts[-1] if res.verdicts else None
    code = EXIT_UNDECIDED if last is not None and last.holds in (Holds.PROBABLY_NO, Holds.UNAVAILABLE) else EXIT_OK
    return render_threshold(ctx, res, config.output_format), code


def cmd_section(args, config: RunConfig):
    ctx = _ctx(args)
    try:
        cert = default_section(ctx, args.t, args.q)
    except CertificateError as exc:
        raise UsageError(str(exc)) from exc
    return render_section(cert, config.output_format), EXIT_OK if cert.verify() else EXIT_UNDECIDED


def cmd_scan(args, config: RunConfig):
    rows = conjecture_scan(args.nmax, args.dmax, args.budget, config)
    return render_scan(rows, config.output_format), EXIT_OK


def cmd_cache_info(args, config: RunConfig):
    cache = open_cache(config.cache_dir)
    info = cache.info() if cache is not None else {"directory": None, "enabled": False,
                                                   "engine_version": ENGINE_VERSION, "entries": 0,
                                                   "by_kind": {}}
    if config.output_format == "json":
        return _dump(info), EXIT_OK
    return "\n".join(f"{k}: {v}" for k, v in info.items()), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, action="append", help="prime for modular ranks (repeatable)")
    common.add_argument("--exact-budget", type=int, help="max columns per block for exact ranks (0 = off)")
    common.add_argument("--max-columns", type=int, help="refuse Koszul maps with more columns")
    common.add_argument("--format", dest="output_format", choices=("text", "json", "csv"))
    common.add_argument("--cache-dir", help="persistent rank cache directory")
    common.add_argument("--jobs", type=int, help="worker processes for table cells")
    common.add_argument("--no-symmetry", action="store_true", help="disable S_{n+1} block reduction")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="veronese", description="Syzygies of Veronese embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def nd(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("betti", parents=[common], help="graded Betti table")
    nd(p)
    p.add_argument("--imax", type=int)
    p.add_argument("--qmax", type=int)
    p.add_argument("--partial-out", help="where to write a partial table on budget exhaustion")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("check-np", parents=[common], help="decide property N_p")
    nd(p)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_check_np)

    p = sub.add_parser("threshold", parents=[common], help="largest p with N_p")
    nd(p)
    p.add_argument("--pmax", type=int, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("section", parents=[common], help="build and verify a kernel section")
    nd(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("scan", parents=[common], help="compare thresholds with the conjecture")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--budget", type=int, default=50_000, help="max columns of any needed map")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cache-info", parents=[common], help="describe the rank cache")
    p.set_defaults(func=cmd_cache_info)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = RunConfig.from_env(
            primes=tuple(args.prime) if args.prime else None,
            exact_budget=args.exact_budget,
            max_columns=args.max_columns,
            output_format=args.output_format,
            cache_dir=args.cache_dir,
            jobs=args.jobs,
            use_symmetry=False if args.no_symmetry else None,
        )
        out, code = args.func(args, config)
    except (UsageError, ValueError) as exc:
        print(f"veronese {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out.rstrip("\n"))
    return code


if __name__ == "__main__":
    sys.exit(main())
