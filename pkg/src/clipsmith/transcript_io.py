"""Timestamped transcript model and YouTube-JSON / SRT / WebVTT readers and writers."""
from __future__ import annotations

import enum
import html
import json
import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import ParseError


class FormatKind(str, enum.Enum):
    YOUTUBE_JSON = "youtube-json"
    SRT = "srt"
    VTT = "vtt"
    UNKNOWN = "unknown"


def round_ms(seconds: float) -> float:
    """Round to whole milliseconds, half away from zero."""
    d = Decimal(repr(float(seconds))).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP)
    return float(d)


def to_ms(seconds: float) -> int:
    return int(Decimal(repr(float(seconds))).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP) * 1000)


_CONTROL = re.compile(r"[\x00-\x1f\x7f-\x9f]")
_SPACES = re.compile(r"\s+")


def clean_text(text: str) -> str:
    return _SPACES.sub(" ", _CONTROL.sub(" ", text)).strip()


@dataclass(frozen=True)
class TimedSegment:
    text: str
    start: float
    duration: float
    video_id: str

    @property
    def end(self) -> float:
        return round_ms(self.start + self.duration)


@dataclass(frozen=True)
class Transcript:
    video_id: str
    segments: tuple[TimedSegment, ...]
    source_format: FormatKind

    def __post_init__(self):
        if not self.segments:
            raise ValueError("transcript has no segments")
        if any(s.video_id != self.video_id for s in self.segments):
            raise ValueError("all segments must share the transcript video_id")

    @property
    def duration(self) -> float:
        """Source length estimate: the latest segment end."""
        return max(s.end for s in self.segments)

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.segments)


def detect_format(raw: bytes) -> FormatKind:
    text = raw.decode("utf-8", errors="replace").lstrip("﻿")
    head = text.lstrip()
    if head.startswith(("[", "{")):
        return FormatKind.YOUTUBE_JSON
    if head.startswith("WEBVTT"):
        return FormatKind.VTT
    lines = [ln.strip() for ln in text.splitlines()]
    nonblank = [ln for ln in lines if ln]
    if len(nonblank) >= 2 and nonblank[0].isdigit() and _SRT_TIMING.match(nonblank[1]):
        return FormatKind.SRT
    return FormatKind.UNKNOWN


def _decode(raw: bytes) -> str:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"offset {exc.start}", "invalid UTF-8") from None
    return text.lstrip("﻿").replace("\r\n", "\n").replace("\r", "\n")


def _segment(text: str, start: float, end: float, video_id: str, where: str) -> TimedSegment | None:
    if not (math.isfinite(start) and math.isfinite(end)):
        raise ParseError(where, "non-finite time")
    if start < 0:
        raise ParseError(where, "negative time")
    start_ms, end_ms = to_ms(start), to_ms(end)
    if end_ms <= start_ms:
        raise ParseError(where, "end <= start")
    text = clean_text(text)
    if not text:
        return None
    return TimedSegment(text, start_ms / 1000, (end_ms - start_ms) / 1000, video_id)


def _finish(segments: list[TimedSegment], video_id: str, kind: FormatKind) -> Transcript:
    if not segments:
        raise ParseError("end of input", "no cues with text")
    # sorted() is stable: equal starts keep input order
    return Transcript(video_id, tuple(sorted(segments, key=lambda s: s.start)), kind)


def _parse_youtube_json(text: str, video_id: str) -> Transcript:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("segments", data.get("transcript"))
    if not isinstance(data, list):
        raise ParseError("offset 0", "expected a JSON array of {text, start, duration}")
    segments = []
    for n, item in enumerate(data):
        where = f"item {n}"
        if not isinstance(item, dict):
            raise ParseError(where, "expected an object")
        try:
            body = item["text"]
            start = float(item["start"])
            duration = float(item["duration"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(where, f"missing or invalid field: {exc}") from None
        if not isinstance(body, str):
            raise ParseError(where, "text must be a string")
        seg = _segment(body, start, start + duration, video_id, where)
        if seg is not None:
            segments.append(seg)
    return _finish(segments, video_id, FormatKind.YOUTUBE_JSON)


_SRT_TIMING = re.compile(
    r"^(\d+):(\d{2}):(\d{2}),(\d{1,3})\s*-->\s*(\d+):(\d{2}):(\d{2}),(\d{1,3})\s*$"
)
_VTT_TIME = r"(?:(\d+):)?(\d{2}):(\d{2})\.(\d{3})"
_VTT_TIMING = re.compile(rf"^{_VTT_TIME}\s+-->\s+{_VTT_TIME}(?:\s+.*)?$")
_VTT_TAG = re.compile(r"<[^>]*>")


def _hms(h: str | None, m: str, s: str, frac: str) -> float:
    if int(m) > 59 or int(s) > 59:
        raise ValueError("minutes/seconds out of range")
    ms = int(frac.ljust(3, "0"))
    return (int(h or 0) * 3600 + int(m) * 60 + int(s)) + ms / 1000


def _blocks(lines: list[str], first: int = 0):
    """Yield (line_number, lines) for blank-line separated blocks."""
    block: list[str] = []
    start = 0
    for n, line in enumerate(lines[first:], start=first + 1):
        if line.strip():
            if not block:
                start = n
            block.append(line)
        elif block:
            yield start, block
            block = []
    if block:
        yield start, block


def _parse_srt(text: str, video_id: str) -> Transcript:
    segments = []
    for lineno, block in _blocks(text.split("\n")):
        timing_at = 0
        if block[0].strip().isdigit() and len(block) > 1:
            timing_at = 1
        line = block[timing_at].strip()
        where = f"line {lineno + timing_at}"
        match = _SRT_TIMING.match(line)
        if not match:
            raise ParseError(where, f"malformed timing line {line!r}")
        g = match.groups()
        try:
            start = _hms(*g[0:4])
            end = _hms(*g[4:8])
        except ValueError as exc:
            raise ParseError(where, str(exc)) from None
        body = " ".join(ln.strip() for ln in block[timing_at + 1:])
        seg = _segment(body, start, end, video_id, where)
        if seg is not None:
            segments.append(seg)
    return _finish(segments, video_id, FormatKind.SRT)


def _parse_vtt(text: str, video_id: str) -> Transcript:
    lines = text.split("\n")
    if not lines[0].startswith("WEBVTT"):
        raise ParseError("line 1", "missing WEBVTT header")
    segments = []
    for lineno, block in _blocks(lines, first=1):
        head = block[0].strip()
        if head.startswith(("NOTE", "STYLE", "REGION")) and "-->" not in head:
            continue
        timing_at = 0 if "-->" in head else 1
        if timing_at >= len(block):
            raise ParseError(f"line {lineno}", "cue without timing line")
        line = block[timing_at].strip()
        where = f"line {lineno + timing_at}"
        match = _VTT_TIMING.match(line)
        if not match:
            raise ParseError(where, f"malformed timing line {line!r}")
        g = match.groups()
        try:
            start = _hms(*g[0:4])
            end = _hms(*g[4:8])
        except ValueError as exc:
            raise ParseError(where, str(exc)) from None
        body = " ".join(html.unescape(_VTT_TAG.sub("", ln)).strip() for ln in block[timing_at + 1:])
        seg = _segment(body, start, end, video_id, where)
        if seg is not None:
            segments.append(seg)
    return _finish(segments, video_id, FormatKind.VTT)


def parse(raw: bytes, fmt: FormatKind | str, video_id: str) -> Transcript:
    fmt = FormatKind(fmt)
    text = _decode(raw)
    if fmt is FormatKind.YOUTUBE_JSON:
        return _parse_youtube_json(text, video_id)
    if fmt is FormatKind.SRT:
        return _parse_srt(text, video_id)
    if fmt is FormatKind.VTT:
        return _parse_vtt(text, video_id)
    raise ParseError("offset 0", "unrecognized transcript format")


def parse_auto(raw: bytes, video_id: str) -> Transcript:
    return parse(raw, detect_format(raw), video_id)


def format_timestamp(seconds: float, sep: str = ",") -> str:
    ms = to_ms(seconds)
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d}{sep}{ms:03d}"


def write_srt(t: Transcript) -> bytes:
    out = []
    for n, seg in enumerate(t.segments, start=1):
        out.append(f"{n}\n{format_timestamp(seg.start)} --> {format_timestamp(seg.end)}\n{seg.text}\n\n")
    return "".join(out).encode("utf-8")


def write_vtt(t: Transcript) -> bytes:
    out = ["WEBVTT\n\n"]
    for seg in t.segments:
        out.append(
            f"{format_timestamp(seg.start, '.')} --> {format_timestamp(seg.end, '.')}\n"
            f"{html.escape(seg.text, quote=False)}\n\n"
        )
    return "".join(out).encode("utf-8")


def write_youtube_json(t: Transcript) -> bytes:
    items = [{"text": s.text, "start": s.start, "duration": s.duration} for s in t.segments]
    return (json.dumps(items, ensure_ascii=False, indent=1) + "\n").encode("utf-8")
