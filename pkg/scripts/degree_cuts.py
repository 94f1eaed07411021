"""Root lower bound with and without degree-cut separation.

    python3 scripts/degree_cuts.py --n 30 --count 30
"""
import argparse
from statistics import mean

from mcpp import SolverConfig, generate_instance
from mcpp.search import BranchAndPrice


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rows = []
    for k in range(args.count):
        ps = generate_instance(args.seed + k, args.n)
        a = BranchAndPrice(ps, SolverConfig(degree_cuts=True)).root_bound()
        b = BranchAndPrice(ps, SolverConfig(degree_cuts=False)).root_bound()
        rows.append((a, b))
        print(f"{args.seed + k:5d}  with {a:9.4f}  without {b:9.4f}  gain {a - b:+.4f}", flush=True)
    a, b = mean(r[0] for r in rows), mean(r[1] for r in rows)
    strict = sum(x > y + 1e-6 for x, y in rows)
    print(f"mean  with {a:.4f}  without {b:.4f}  strictly higher on {strict}/{len(rows)}")


if __name__ == "__main__":
    main()
