"""Degree-4 embedding of P^2: N_9 holds and N_10 fails.

The failure is witnessed at q = 12 by an explicit kernel section of the
second wedge power twisted by 1, so no large exact elimination is needed.
"""
import argparse
import time

from veronese.betti import check_np
from veronese.certificates import build_kernel_section
from veronese.algebra import Monomial
from veronese.config import RunConfig
from veronese.koszul import VeroneseContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-yes", action="store_true", help="only certify the failure of N_10")
    args = ap.parse_args()
    ctx = VeroneseContext(2, 4)
    x = [Monomial.var(2, i) for i in range(3)]
    cert = build_kernel_section(ctx, 1, 2, Monomial.var(2, 0, 3), x)
    print(f"kernel section of wedge^2 E_4(1): {len(cert.tensor)} terms, verified={cert.verify()}")
    cfg = RunConfig(exact_budget=0, max_columns=10**6)
    for p in ([10] if args.skip_yes else [9, 10]):
        start = time.perf_counter()
        v = check_np(ctx, p, cfg)
        print(f"N_{p}: {v.holds.value} witness={v.witness} certification={v.certification}"
              f" certificate={v.certificate} ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
