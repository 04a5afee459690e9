"""Concatenate-then-summarize versus divide-and-conquer on a synthetic multi-video corpus.

    python3 scripts/compare_strategies.py [--videos 3] [--sentences 40 55 70] [--ratio 0.2] [--trials 20]

Reports the sentence count fed to the final pass, plan length and wall time for each strategy.
"""
import argparse
import random
import statistics
import time

from clipsmith import synthetic
from clipsmith.pipeline import SummaryParams, summarize_multi_concat, summarize_multi_dnc

STRATEGIES = {"concat": summarize_multi_concat, "dnc": summarize_multi_dnc}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sentences", type=int, nargs="+", default=[40, 55, 70], help="sentences per video")
    ap.add_argument("--ratio", type=float, default=0.2)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    params = SummaryParams(ratio=args.ratio)
    rows = {name: {"final": [], "clips": [], "plan": [], "secs": []} for name in STRATEGIES}
    for _ in range(args.trials):
        ts = [synthetic.lecture(rng, n, f"v{k}", unique=True) for k, n in enumerate(args.sentences)]
        for name, fn in STRATEGIES.items():
            started = time.perf_counter()
            b = fn(ts, params)
            rows[name]["secs"].append(time.perf_counter() - started)
            rows[name]["final"].append(b.stats["final_pass_input"])
            rows[name]["clips"].append(len(b.plan.clips))
            rows[name]["plan"].append(b.plan.total_seconds)

    total = sum(args.sentences)
    print(f"{len(args.sentences)} videos, {total} sentences, ratio {args.ratio}, {args.trials} trials")
    print(f"{'strategy':>8} {'final_in':>8} {'clips':>6} {'plan_s':>8} {'wall_ms':>8}")
    for name, r in rows.items():
        print(f"{name:>8} {statistics.mean(r['final']):>8.1f} {statistics.mean(r['clips']):>6.1f} "
              f"{statistics.mean(r['plan']):>8.1f} {1000 * statistics.mean(r['secs']):>8.1f}")


if __name__ == "__main__":
    main()
