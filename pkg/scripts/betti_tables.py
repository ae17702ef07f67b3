"""Print Betti diagrams for small Veronese embeddings and run the Hilbert check."""
import argparse
import time

from veronese.betti import betti_table, hilbert_check
from veronese.cli import render_betti
from veronese.config import RunConfig
from veronese.koszul import VeroneseContext

DEFAULT = ["1,2", "1,3", "1,4", "1,5", "1,6", "2,2", "2,3", "3,2"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("pairs", nargs="*", default=DEFAULT, help="n,d pairs")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = RunConfig(jobs=args.jobs)
    for pair in args.pairs:
        n, d = map(int, pair.split(","))
        start = time.perf_counter()
        table = betti_table(VeroneseContext(n, d), config=cfg)
        elapsed = time.perf_counter() - start
        print(render_betti(table, "text"))
        check = hilbert_check(table) if table.complete and table.covers_support else "n/a"
        print(f"hilbert check: {check}   ({elapsed:.2f}s)\n")


if __name__ == "__main__":
    main()
