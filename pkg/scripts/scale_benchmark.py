#!/usr/bin/env python3
"""Time reduce + solve on satisfiable formulas of growing size.

Formulas are planted: a hidden assignment is drawn first and every clause
gets exactly one true variable, so each instance is satisfiable.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from tetravex.core import validate_tiling
from tetravex.reduction import OneInThreeInstance, decode_assignment, reduce
from tetravex.solver import solve


def planted(rng: random.Random, n: int, m: int) -> OneInThreeInstance:
    if n < 2:
        raise ValueError("planting needs a true and a false variable (n >= 2)")
    truth = [rng.random() < 0.4 for _ in range(n)]
    truth[0], truth[-1] = True, False
    yes = [i + 1 for i, t in enumerate(truth) if t]
    no = [i + 1 for i, t in enumerate(truth) if not t]
    clauses = []
    for _ in range(m):
        cl = [rng.choice(yes), rng.choice(no), rng.choice(no)]
        rng.shuffle(cl)
        clauses.append(tuple(cl))
    return OneInThreeInstance(n, tuple(clauses))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2x1,3x2,4x2,5x3,6x3",
                    help="comma list of NxM (variables x clauses)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    print(f"{'n':>3} {'m':>3} {'board':>7} {'tiles':>6} {'nodes':>10} {'seconds':>8}")
    for item in args.sizes.split(","):
        n, m = (int(x) for x in item.split("x"))
        for _ in range(args.repeats):
            sat = planted(rng, n, m)
            start = time.perf_counter()
            inst, rmap = reduce(sat)
            res = solve(inst, limit=1)
            dt = time.perf_counter() - start
            tiling = res.witnesses[0]
            assert validate_tiling(inst, tiling).valid
            assert sat.satisfied_by(decode_assignment(rmap, tiling))
            print(f"{n:>3} {m:>3} {inst.width:>3}x{inst.height:<3} {inst.size:>6} "
                  f"{res.stats.nodes_expanded:>10} {dt:8.3f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
