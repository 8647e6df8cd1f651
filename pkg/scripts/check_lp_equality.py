#!/usr/bin/env python3
"""Compare the cut relaxation with the brute-force component LP on a random corpus.

Prints one row per instance and a summary; exits non-zero on any mismatch.
"""

import argparse
import sys
import time

from qbst.bcr import solve_bcr
from qbst.decompose import Decomposer, phi
from qbst.generate import corpus
from qbst.model import arc_cost, bidirect, component_cost, fmt_rational
from qbst.oracle import check_feasible_dcr, solve_dcr_bruteforce


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--quiet", action="store_true", help="summary only")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    bad = 0
    if not args.quiet:
        print(f"{'#':>4} {'n':>3} {'|R|':>3} {'bcr':>10} {'dcr':>10} {'steps':>5} ok")
    for i, inst in enumerate(corpus(args.seed, args.size)):
        dg = bidirect(inst)
        sol = solve_bcr(dg)
        _, dcr = solve_dcr_bruteforce(inst)
        dec = Decomposer(dg, sol.x)
        y = dec.run()
        ok = (
            dcr == sol.objective_value
            and phi(y) == sol.x
            and component_cost(y) == arc_cost(dg, sol.x)
            and check_feasible_dcr(inst, y)[0]
        )
        bad += not ok
        if not args.quiet or not ok:
            print(
                f"{i:>4} {inst.n:>3} {len(inst.terminals):>3} {fmt_rational(sol.objective_value):>10} "
                f"{fmt_rational(dcr):>10} {dec.iterations:>5} {'yes' if ok else 'NO'}"
            )
    print(f"{args.size - bad}/{args.size} instances agree ({time.perf_counter() - t0:.1f}s)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
