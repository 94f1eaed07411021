"""Wall-clock time of each mode over a range of instance sizes.

    python3 scripts/scaling.py --sizes 10 20 30 40 --count 5 --modes cg full compact
"""
import argparse
import time
from statistics import mean

from mcpp import SolverConfig, generate_instance, solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 30])
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--modes", nargs="+", default=["cg", "full", "compact"])
    ap.add_argument("--time-limit", type=float, default=600.0)
    args = ap.parse_args()
    print(f"{'n':>4} {'mode':>8} {'solved':>7} {'mean s':>8} {'max s':>8} {'nodes':>6}")
    for n in args.sizes:
        pss = [generate_instance(1000 * n + k, n) for k in range(args.count)]
        for mode in args.modes:
            secs, nodes, solved = [], 0, 0
            for ps in pss:
                t = time.monotonic()
                res = solve(ps, SolverConfig(mode=mode, time_limit=args.time_limit))
                secs.append(time.monotonic() - t)
                nodes += res.stats.nodes
                solved += res.status == "Optimal"
            print(f"{n:4d} {mode:>8} {solved:4d}/{len(pss):<2d} {mean(secs):8.2f} {max(secs):8.2f} {nodes:6d}",
                  flush=True)


if __name__ == "__main__":
    main()
