"""Rewrite tests/golden from tests/fixtures/lecture.srt at ratio 0.2.

    python3 scripts/regen_golden.py

Only run this after an intended change to the EDL or ffmpeg plan format, then review the diff.
"""
from pathlib import Path

from clipsmith.pipeline import SummaryParams, summarize_single
from clipsmith.render import emit_edl, emit_ffmpeg_plan
from clipsmith.transcript_io import FormatKind, parse

ROOT = Path(__file__).resolve().parent.parent


def main():
    t = parse((ROOT / "tests/fixtures/lecture.srt").read_bytes(), FormatKind.SRT, "lecture")
    bundle = summarize_single(t, SummaryParams(ratio=0.2))
    media = {"lecture": "lecture.mp4"}
    script, listing = emit_ffmpeg_plan(bundle.plan, media, "out")
    out = ROOT / "tests/golden"
    out.mkdir(exist_ok=True)
    (out / "lecture.edl.json").write_bytes(emit_edl(bundle.plan, bundle.budget_seconds, media))
    (out / "lecture.plan.sh").write_text(script)
    (out / "lecture.concat.txt").write_text(listing)
    for p in sorted(out.iterdir()):
        print(p.relative_to(ROOT))


if __name__ == "__main__":
    main()
