"""Punctuation restoration, sentence segmentation with interpolated timestamps, question filtering."""
from __future__ import annotations

import bisect
import re
import shlex
import subprocess
from dataclasses import dataclass, replace
from typing import Literal

from .errors import AdapterFailed, EmptyTranscript
from .transcript_io import TimedSegment, Transcript, clean_text, round_ms

TERMINALS = ".!?"
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")
_HAS_WORD = re.compile(r"[^\W_]")
_INSERTABLE = set(".,!?;:")


@dataclass(frozen=True)
class TimedSentence:
    text: str
    start: float
    end: float
    video_id: str
    index: int


@dataclass(frozen=True)
class PunctuationPolicy:
    mode: Literal["passthrough", "heuristic", "external"] = "heuristic"
    gap_threshold: float = 0.8
    external_command: str | None = None

    def __post_init__(self):
        if self.mode not in ("passthrough", "heuristic", "external"):
            raise ValueError(f"unknown punctuation mode {self.mode!r}")
        if (self.mode == "external") != (self.external_command is not None):
            raise ValueError("external_command is required iff mode is 'external'")
        if self.gap_threshold < 0:
            raise ValueError("gap_threshold must be >= 0")


def _capitalize_first(text: str) -> str:
    for n, ch in enumerate(text):
        if ch.isalpha():
            return text[:n] + ch.upper() + text[n + 1:]
    return text


def _heuristic(t: Transcript, gap_threshold: float) -> Transcript:
    segs = list(t.segments)
    texts = [s.text for s in segs]
    for k, seg in enumerate(segs):
        last = k == len(segs) - 1
        if not last and segs[k + 1].start - seg.end < gap_threshold:
            continue
        if texts[k].endswith(tuple(TERMINALS)):
            continue
        texts[k] = texts[k].rstrip(",;:") + "."
        if not last:
            texts[k + 1] = _capitalize_first(texts[k + 1])
    return replace(t, segments=tuple(replace(s, text=x) for s, x in zip(segs, texts)))


def _realign(source: str, punctuated: str) -> list[int] | None:
    """Map each output character to a source offset; inserted punctuation maps to -1.

    Returns None when the output is not the source plus punctuation and case changes.
    """
    mapping = []
    i = 0
    for ch in punctuated:
        if i < len(source) and ch.casefold() == source[i].casefold():
            mapping.append(i)
            i += 1
        elif ch in _INSERTABLE:
            mapping.append(-1)
        else:
            return None
    return mapping if i == len(source) else None


def _external(t: Transcript, command: str) -> Transcript:
    source = " ".join(s.text for s in t.segments)
    try:
        proc = subprocess.run(
            shlex.split(command), input=source.encode("utf-8"), capture_output=True, check=False
        )
    except OSError as exc:
        raise AdapterFailed(None, str(exc), "could not start punctuation command") from None
    stderr = proc.stderr.decode("utf-8", errors="replace")
    if proc.returncode != 0:
        raise AdapterFailed(proc.returncode, stderr)
    punctuated = proc.stdout.decode("utf-8", errors="replace").rstrip("\r\n")
    mapping = _realign(source, punctuated)
    if mapping is None:
        raise AdapterFailed(proc.returncode, stderr, "alignment: output differs from input beyond punctuation/case")

    starts = []
    pos = 0
    for seg in t.segments:
        starts.append(pos)
        pos += len(seg.text) + 1
    pieces: list[list[str]] = [[] for _ in t.segments]
    owner = 0
    for ch, src in zip(punctuated, mapping):
        if src >= 0:
            k = bisect.bisect_right(starts, src) - 1
            if src >= starts[k] + len(t.segments[k].text):
                continue  # separator space between segments
            owner = k
        pieces[owner].append(ch)
    segments = []
    for seg, chars in zip(t.segments, pieces):
        text = clean_text("".join(chars))
        segments.append(replace(seg, text=text or seg.text))
    return replace(t, segments=tuple(segments))


def restore_punctuation(t: Transcript, policy: PunctuationPolicy) -> Transcript:
    if policy.mode == "passthrough":
        return t
    if policy.mode == "heuristic":
        return _heuristic(t, policy.gap_threshold)
    return _external(t, policy.external_command)


def sentence_spans(text: str) -> list[tuple[int, int, bool]]:
    """(start, end, needs_period) character spans; a trailing unterminated tail needs a period."""
    spans = []
    prev = 0
    for m in _SENTENCE_END.finditer(text):
        spans.append((prev, m.end(), False))
        prev = m.end()
    if not spans:
        return []
    if _HAS_WORD.search(text[prev:]):
        spans.append((prev, len(text), True))
    return [s for s in spans if _HAS_WORD.search(text[s[0]:s[1]])]


def split_sentences(text: str) -> list[str]:
    """Split free text into sentences; text with no terminal punctuation is one sentence."""
    text = clean_text(text)
    if not text:
        return []
    spans = sentence_spans(text)
    if not spans:
        return [text if text.endswith(tuple(TERMINALS)) else text + "."]
    return [clean_text(text[a:b]) + ("." if tail else "") for a, b, tail in spans]


def segment_sentences(t: Transcript) -> list[TimedSentence]:
    segs: list[TimedSegment] = list(t.segments)
    offsets = []
    pos = 0
    for seg in segs:
        offsets.append(pos)
        pos += len(seg.text) + 1
    full = " ".join(s.text for s in segs)

    def time_at(k: int, p: int) -> float:
        seg = segs[k]
        return seg.start + seg.duration * (p - offsets[k]) / len(seg.text)

    def start_time(p: int) -> float:
        k = bisect.bisect_right(offsets, p) - 1
        if p >= offsets[k] + len(segs[k].text) and k + 1 < len(segs):
            return segs[k + 1].start
        return time_at(k, p)

    def end_time(p: int) -> float:
        k = bisect.bisect_right(offsets, p - 1) - 1
        return time_at(k, p)

    spans = sentence_spans(full)
    if not spans:
        raise EmptyTranscript(f"{t.video_id}: no sentence-terminal punctuation found")
    out: list[TimedSentence] = []
    prev_start = 0.0
    for a, b, tail in spans:
        text = clean_text(full[a:b]) + ("." if tail else "")
        start = max(round_ms(start_time(a)), prev_start)
        end = round_ms(end_time(b))
        if end <= start:
            end = round_ms(start + 0.001)
        out.append(TimedSentence(text, start, end, t.video_id, len(out)))
        prev_start = start
    return out


def filter_questions(sentences: list[TimedSentence]) -> list[TimedSentence]:
    kept = [s for s in sentences if not s.text.endswith("?")]
    return [replace(s, index=n) for n, s in enumerate(kept)]
