"""Gap of greedy and greedy + local search against the exhaustive oracle.

    python3 scripts/heuristic_gap.py --count 100 --iterations 500
"""
import argparse
import statistics
import sys

from tt_grouper.exact import brute_force_oracle
from tt_grouper.heuristic import LocalSearchConfig, construct_greedy, local_search
from tt_grouper.schedule import evaluate
from tt_grouper.suites import micro_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--iterations", type=int, default=500)
    args = ap.parse_args(argv)

    gaps = {"greedy": [], "local": []}
    for seed, inst in enumerate(micro_suite(args.count, args.start), start=args.start):
        best = brute_force_oracle(inst).cmax
        start = construct_greedy(inst)
        improved = local_search(inst, start, LocalSearchConfig(iterations=args.iterations, seed=seed))
        for name, sol in (("greedy", start), ("local", improved)):
            gaps[name].append(100.0 * (evaluate(inst, sol).cmax - best) / best)
    print("method,mean_bg,median_bg,max_bg,optimal_share")
    for name, g in gaps.items():
        share = sum(v == 0 for v in g) / len(g)
        print(f"{name},{statistics.mean(g):.3f},{statistics.median(g):.3f},{max(g):.3f},{share:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
