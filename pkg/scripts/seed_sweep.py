#!/usr/bin/env python3
"""Sweep seeded random instances through the full verification suite.

Prints the worst violation per check across the sweep and exits
nonzero if anything fails, so it doubles as a quick soak test:

    python3 scripts/seed_sweep.py --seeds 20 --d 2 --dim-c 2 --dim-a 2
"""

import argparse
import sys
import time

from ncscatter import serialize
from ncscatter.lifting import generate
from ncscatter.verify import CheckResult, all_passed, run_all_checks


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--seeds", type=int, default=10, help="number of instances")
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--dim-c", type=int, default=2)
    parser.add_argument("--dim-a", type=int, default=2)
    parser.add_argument("--depth", type=int, default=3)
    parser.add_argument("--a-scale", type=float, default=0.9)
    parser.add_argument("-o", "--output", help="write the worst-case report as JSON")
    args = parser.parse_args()

    worst: dict[str, CheckResult] = {}
    t0 = time.perf_counter()
    for seed in range(args.seeds):
        inst = generate(args.d, args.dim_c, args.dim_a, seed=seed, a_scale=args.a_scale)
        for res in run_all_checks(inst, args.depth, seed=seed):
            seen = worst.get(res.name)
            if seen is None or not res.passed or res.max_violation > seen.max_violation:
                worst[res.name] = res
    elapsed = time.perf_counter() - t0

    results = list(worst.values())
    for res in results:
        print(res.line())
    print(
        f"{args.seeds} instances (d={args.d}, dims ({args.dim_c},{args.dim_a}), "
        f"depth {args.depth}) in {elapsed:.2f} s"
    )
    if args.output:
        serialize.save(args.output, serialize.report_to_json(results))
    return 0 if all_passed(results) else 1


if __name__ == "__main__":
    sys.exit(main())
