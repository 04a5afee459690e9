"""Regenerate tests/fixtures: 50 transcripts each in SRT, WebVTT and YouTube-JSON, plus malformed samples.

    python scripts/make_fixtures.py [--out tests/fixtures] [--seed 7]
"""
from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from clipsmith import synthetic
from clipsmith.transcript_io import format_timestamp, write_srt, write_youtube_json

PER_FORMAT = 50


def srt_variant(rng: random.Random, t) -> bytes:
    """Mix of single- and multi-line cues, some CRLF files, some long timestamps."""
    out = []
    for n, seg in enumerate(t.segments, start=1):
        words = seg.text.split()
        if len(words) > 6 and rng.random() < 0.5:
            cut = len(words) // 2
            body = " ".join(words[:cut]) + "\n" + " ".join(words[cut:])
        else:
            body = seg.text
        out.append(f"{n}\n{format_timestamp(seg.start)} --> {format_timestamp(seg.end)}\n{body}\n")
    text = "\n".join(out)
    if rng.random() < 0.3:
        text = text.replace("\n", "\r\n")
    return text.encode("utf-8")


def vtt_variant(rng: random.Random, t) -> bytes:
    lines = ["WEBVTT - synthetic lecture", ""]
    if rng.random() < 0.5:
        lines += ["NOTE generated fixture", "", "STYLE", "::cue { color: white }", ""]
    for n, seg in enumerate(t.segments):
        if rng.random() < 0.3:
            lines.append(f"cue-{n}")
        timing = f"{format_timestamp(seg.start, '.')} --> {format_timestamp(seg.end, '.')}"
        if rng.random() < 0.3:
            timing += " align:start position:0%"
        lines.append(timing)
        words = seg.text.split()
        if rng.random() < 0.3 and len(words) > 2:
            words[1] = f"<c>{words[1]}</c>"
            words[0] = f"<v Speaker>{words[0]}"
        lines.append(" ".join(words).replace("&", "&amp;"))
        lines.append("")
    return "\n".join(lines).encode("utf-8")


def json_variant(rng: random.Random, t) -> bytes:
    items = json.loads(write_youtube_json(t))
    if rng.random() < 0.5:
        # auto-captions: no punctuation, overlapping cues
        for item in items:
            item["text"] = item["text"].rstrip(".?!").lower()
            item["duration"] = round(item["duration"] + rng.uniform(0, 1.5), 3)
    return (json.dumps(items, indent=1) + "\n").encode("utf-8")


MALFORMED = {
    "bad_timing.srt": b"1\n00:00:01,000 -> 00:00:02,000\nhello\n",
    "inverted.srt": b"1\n00:00:04,000 --> 00:00:03,000\nhello\n",
    "bad_utf8.srt": b"1\n00:00:01,000 --> 00:00:02,000\nh\xffllo\n",
    "no_header.vtt": b"00:00.000 --> 00:02.000\nhi\n",
    "negative.json": b'[{"text": "hi", "start": -1.0, "duration": 2.0}]',
    "missing_field.json": b'[{"text": "hi", "start": 1.0}]',
    "truncated.json": b'[{"text": "hi", "start": 1.0, "duration": ',
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="tests/fixtures")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = Path(args.out)
    writers = {"srt": srt_variant, "vtt": vtt_variant, "json": json_variant}
    for fmt, write in writers.items():
        (out / fmt).mkdir(parents=True, exist_ok=True)
        for k in range(PER_FORMAT):
            n = rng.randint(3, 40)
            t = synthetic.lecture(rng, n, f"{fmt}_{k:02d}", questions=0.1)
            if k % 10 == 9:
                # push some fixtures past the one-hour mark
                segs = tuple(type(s)(s.text, round(s.start + 3600 * (k // 10), 3), s.duration, s.video_id)
                             for s in t.segments)
                t = type(t)(t.video_id, segs, t.source_format)
            (out / fmt / f"{t.video_id}.{fmt}").write_bytes(write(rng, t))
    (out / "malformed").mkdir(parents=True, exist_ok=True)
    for name, raw in MALFORMED.items():
        (out / "malformed" / name).write_bytes(raw)
    # a plain canonical SRT used by the golden-file tests
    golden = synthetic.lecture(random.Random(2024), 30, "lecture", gap=(0.5, 2.0))
    (out / "lecture.srt").write_bytes(write_srt(golden))
    print(f"wrote fixtures under {out}")


if __name__ == "__main__":
    main()
