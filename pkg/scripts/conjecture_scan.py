"""Scan (n, d) pairs against the conjectured thresholds and save the rows."""
import argparse
import json
from pathlib import Path

from veronese.betti import conjecture_scan
from veronese.cli import render_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=3)
    ap.add_argument("--dmax", type=int, default=4)
    ap.add_argument("--budget", type=int, default=50_000)
    ap.add_argument("--out", type=Path, help="write rows as JSON here")
    args = ap.parse_args()
    rows = conjecture_scan(args.nmax, args.dmax, args.budget)
    print(render_scan(rows, "text"))
    if args.out:
        args.out.write_text(json.dumps([r.to_json() for r in rows], indent=2, sort_keys=True))
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
