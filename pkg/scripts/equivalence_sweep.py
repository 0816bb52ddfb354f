#!/usr/bin/env python3
"""Check oracle satisfiability against solver solvability on random formulas.

Every formula is reduced in each requested variant; a solvable instance
must also decode to a satisfying assignment.  Exits 1 on any mismatch.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from tetravex.core import Boundary
from tetravex.reduction import OneInThreeInstance, decode_assignment, reduce, sat_oracle
from tetravex.solver import solve

VARIANTS = {
    "bordered": dict(),
    "square": dict(pad_square=True),
    "toroidal": dict(boundary=Boundary.TOROIDAL),
    "shared": dict(rigid_blocks=False),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--variants", default=",".join(VARIANTS))
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    variants = args.variants.split(",")
    worst = {v: 0.0 for v in variants}
    bad = 0
    for _ in range(args.count):
        n, m = rng.randint(1, args.max_n), rng.randint(1, args.max_m)
        sat = OneInThreeInstance(n, tuple(tuple(rng.randint(1, n) for _ in range(3)) for _ in range(m)))
        expected = bool(sat_oracle(sat))
        for name in variants:
            inst, rmap = reduce(sat, **VARIANTS[name])
            start = time.perf_counter()
            res = solve(inst, limit=1)
            worst[name] = max(worst[name], time.perf_counter() - start)
            ok = res.solvable == expected
            if ok and res.solvable:
                ok = sat.satisfied_by(decode_assignment(rmap, res.witnesses[0]))
            if not ok:
                bad += 1
                print(f"MISMATCH {name} n={n} clauses={sat.clauses}", flush=True)
    print(f"{args.count} formulas, {bad} mismatches")
    for name, t in worst.items():
        print(f"  {name:9} worst solve {t:.3f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
