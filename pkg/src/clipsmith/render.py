"""Edit-decision list, ffmpeg cut/concat plan, cheat-sheet and paragraph text."""
from __future__ import annotations

import json
import shlex
import subprocess
from pathlib import Path
from typing import Mapping

from .errors import MissingInput
from .selector import ClipPlan, PlannedClip

EDL_VERSION = 1


def _sec(x: float) -> str:
    return f"{x:.3f}"


def emit_edl(plan: ClipPlan, budget_seconds: float, inputs: Mapping[str, str] | None = None) -> bytes:
    """Canonical EDL JSON: fixed key order, 3-decimal seconds, compact separators, trailing newline."""
    inputs = inputs or {}
    clips = []
    for c in plan.clips:
        video = json.dumps(inputs.get(c.video_id, c.video_id), ensure_ascii=False)
        indices = ",".join(str(i) for i in c.sentence_indices)
        clips.append(
            f'{{"video":{video},"start":{_sec(c.start)},"end":{_sec(c.end)},'
            f'"importance":{c.importance:.6f},"sentence_indices":[{indices}]}}'
        )
    total = sum(round(c.end - c.start, 3) for c in plan.clips)
    body = (
        f'{{"version":{EDL_VERSION},"budget_seconds":{_sec(budget_seconds)},'
        f'"total_seconds":{_sec(total)},"clips":[{",".join(clips)}]}}\n'
    )
    return body.encode("utf-8")


def parse_edl(raw: bytes) -> tuple[ClipPlan, float]:
    data = json.loads(raw.decode("utf-8"))
    if data.get("version") != EDL_VERSION:
        raise ValueError(f"unsupported EDL version {data.get('version')!r}")
    clips = tuple(
        PlannedClip(c["video"], float(c["start"]), float(c["end"]), float(c["importance"]),
                    tuple(int(i) for i in c["sentence_indices"]))
        for c in data["clips"]
    )
    return ClipPlan(clips), float(data["budget_seconds"])


def emit_ffmpeg_plan(
    plan: ClipPlan, inputs: Mapping[str, str], outdir: str, reencode: bool = False
) -> tuple[str, str]:
    """(script, concat list). One stream-copy cut per clip, then one concat-demuxer join."""
    codec = "-c:v libx264 -c:a aac" if reencode else "-c copy"
    out = outdir.rstrip("/") or "."
    script = []
    listing = []
    for k, c in enumerate(plan.clips):
        if c.video_id not in inputs:
            raise MissingInput(c.video_id)
        name = f"clip_{k:04d}.mp4"
        script.append(
            f"ffmpeg -y -ss {_sec(c.start)} -to {_sec(c.end)} -i {shlex.quote(inputs[c.video_id])} "
            f"{codec} {shlex.quote(f'{out}/{name}')}"
        )
        listing.append(f"file '{name}'")
    script.append(
        f"ffmpeg -y -f concat -safe 0 -i {shlex.quote(f'{out}/concat.txt')} -c copy {shlex.quote(f'{out}/summary.mp4')}"
    )
    return "\n".join(script) + "\n", "".join(line + "\n" for line in listing)


def execute_plan(script: str, concat_list: str, outdir: str | Path) -> None:
    """Run the cut commands in order, then the concat; raises CalledProcessError on failure."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "concat.txt").write_text(concat_list, "utf-8")
    for line in script.splitlines():
        subprocess.run(shlex.split(line), check=True)


def emit_cheatsheet(bundle) -> str:
    multi = bundle.mode != "single"
    parts = []
    for video_id, bullets in bundle.cheatsheet.items():
        if multi:
            parts.append(f"## {video_id}\n")
        parts.extend(f"- {b}\n" for b in bullets)
    return "".join(parts)


def emit_paragraph(bundle) -> str:
    text = bundle.paragraph + "\n"
    if bundle.paragraph_fallback:
        text += f"# engine: textrank, mode: {bundle.mode}\n"
    return text
