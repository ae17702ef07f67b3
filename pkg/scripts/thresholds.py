"""Compute N_p thresholds and compare with 3d-3 (or 5 for quadrics)."""
import argparse
import time

from veronese.betti import conjectured_threshold, np_threshold
from veronese.config import RunConfig
from veronese.koszul import VeroneseContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("pairs", nargs="*", default=["1,4", "2,2", "2,3", "3,2", "4,2"])
    ap.add_argument("--pmax", type=int, default=10)
    ap.add_argument("--exact-budget", type=int, default=5000)
    args = ap.parse_args()
    cfg = RunConfig(exact_budget=args.exact_budget)
    print(f"{'n':>2} {'d':>2} {'N':>4} {'computed':>9} {'expected':>9} {'last verdict':>28} {'secs':>7}")
    for pair in args.pairs:
        n, d = map(int, pair.split(","))
        ctx = VeroneseContext(n, d)
        start = time.perf_counter()
        res = np_threshold(ctx, min(args.pmax, max(ctx.N - 1, 0)), cfg)
        elapsed = time.perf_counter() - start
        conj = conjectured_threshold(n, d)
        last = res.verdicts[-1] if res.verdicts else None
        verdict = f"N_{last.p}={last.holds.value} ({last.certification})" if last else ""
        print(f"{n:>2} {d:>2} {ctx.N:>4} {res.label:>9} {'all' if conj is None else conj:>9} "
              f"{verdict:>28} {elapsed:>7.2f}")


if __name__ == "__main__":
    main()
