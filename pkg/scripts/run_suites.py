"""Run every verification suite over the admissible (m, r) grid and print a summary table.

    python3 scripts/run_suites.py [--seed N] [--scale X]
"""
import argparse
import time

from chowdilog.cli import DEFAULT_TRIALS
from chowdilog.suites import SUITES, run_suite

GRID = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7)]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="multiply the default trial counts")
    args = p.parse_args()
    print(f"{'suite':<13} {'m':>2} {'r':>2} {'trials':>6} {'time':>7}  result")
    for name in SUITES:
        trials = max(1, round(DEFAULT_TRIALS[name] * args.scale))
        for m, r in GRID:
            t0 = time.perf_counter()
            checks = run_suite(name, m, r, trials, args.seed)
            dt = time.perf_counter() - t0
            status = "PASS" if all(c.ok for c in checks) else "FAIL"
            notes = "; ".join(c.detail for c in checks if c.detail)
            print(f"{name:<13} {m:>2} {r:>2} {trials:>6} {dt:>6.2f}s  {status} {notes}")


if __name__ == "__main__":
    main()
