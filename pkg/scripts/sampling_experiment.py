#!/usr/bin/env python3
"""Empirical mean tree cost of the centre sampler relative to the relaxation value."""

import argparse
import math
import statistics
import sys
from fractions import Fraction

from qbst.bcr import solve_bcr
from qbst.generate import corpus
from qbst.model import bidirect
from qbst.sampler import build_plan, sample_tree


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--band", type=float, default=1.35)
    args = ap.parse_args(argv)

    rows = []
    for inst in corpus(args.seed, 10 * args.instances):
        sol = solve_bcr(bidirect(inst))
        plan = build_plan(sol.x, inst, seed=len(rows))
        if plan.M == 0:
            continue
        costs = [sample_tree(plan, inst, t).cost for t in range(args.trials)]
        mean = sum(costs, Fraction(0)) / args.trials
        sd = statistics.stdev(float(c) for c in costs)
        retries = sum(sample_tree(plan, inst, t).retries for t in range(min(args.trials, 200)))
        rows.append((inst, sol.objective_value, plan, float(mean / sol.objective_value), sd / math.sqrt(args.trials), retries))
        if len(rows) == args.instances:
            break

    print(f"{'n':>3} {'|R|':>3} {'M':>6} {'rounds':>6} {'mean/lp':>8} {'stderr':>8} {'redraws/200':>11}")
    for inst, lp, plan, ratio, se, retries in rows:
        print(f"{inst.n:>3} {len(inst.terminals):>3} {str(plan.M):>6} {plan.rounds:>6} {ratio:>8.4f} {se / float(lp):>8.4f} {retries:>11}")
    worst = max(r[3] for r in rows)
    print(f"worst mean/lp = {worst:.4f} (band {args.band})")
    return 0 if worst <= args.band else 1


if __name__ == "__main__":
    sys.exit(main())
