"""Time the single-video extractive pipeline on synthetic lectures of growing length.

    python3 scripts/bench_pipeline.py [--sizes 300 600 1200 2400] [--engine textrank] [--repeat 3]

1,200 sentences is roughly one hour of lecture audio.
"""
import argparse
import random
import time

from clipsmith import synthetic
from clipsmith.pipeline import SummaryParams, summarize_single
from clipsmith.render import emit_edl, emit_ffmpeg_plan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[300, 600, 1200, 2400])
    ap.add_argument("--engine", choices=["tfidf", "textrank", "sumbasic"], default="textrank")
    ap.add_argument("--ratio", type=float, default=0.2)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = SummaryParams(ratio=args.ratio, engine=args.engine)
    print(f"{'sentences':>9} {'source_s':>9} {'clips':>5} {'plan_s':>8} {'best_s':>7}")
    for n in args.sizes:
        t = synthetic.lecture(random.Random(args.seed), n, "bench")
        times = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            b = summarize_single(t, params)
            emit_edl(b.plan, b.budget_seconds)
            emit_ffmpeg_plan(b.plan, {"bench": "bench.mp4"}, "out")
            times.append(time.perf_counter() - started)
        print(f"{n:>9} {t.duration:>9.1f} {len(b.plan.clips):>5} {b.plan.total_seconds:>8.1f} {min(times):>7.3f}")


if __name__ == "__main__":
    main()
