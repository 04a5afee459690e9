"""Clip candidates, budgeted 0/1 selection, and merge/pad post-processing into a clip plan.

Selection objective, per candidate i with length l_i and importance P_i and indicator I_i:

    importance mode:  maximize sum(P_i * I_i)                   s.t. sum(l_i * I_i) <= L
    paper mode:       maximize sum((P_i - lam * l_i / L) * I_i)  s.t. sum(l_i * I_i) <= L

Paper mode is the budgeted, unit-free form of minimizing sum((l_i - P_i) * I_i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .aligner import Alignment
from .transcript_io import round_ms, to_ms

# subset objectives are compared on values rounded to multiples of 2**-40; the integer
# sums are exact, so ties are well defined and transitive
QUANTUM_BITS = 40


@dataclass(frozen=True)
class ClipCandidate:
    i: int
    video_id: str
    start: float
    end: float
    importance: float
    sentence_indices: tuple[int, ...]

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"candidate {self.i}: end must exceed start")
        if not 0.0 <= self.importance <= 1.0:
            raise ValueError(f"candidate {self.i}: importance must be in [0, 1]")

    @property
    def length(self) -> float:
        return round_ms(self.end - self.start)


@dataclass(frozen=True)
class SelectionBudget:
    L: float
    resolution: float = 0.1
    objective_mode: Literal["importance", "paper"] = "importance"
    lam: float = 1.0

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("budget L must be > 0")
        if not 0 < self.resolution <= self.L:
            raise ValueError("resolution must be in (0, L]")
        if self.objective_mode not in ("importance", "paper"):
            raise ValueError(f"unknown objective mode {self.objective_mode!r}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")

    @property
    def ticks(self) -> int:
        return to_ms(self.L) // self.tick_ms

    @property
    def tick_ms(self) -> int:
        return max(1, to_ms(self.resolution))

    def weight(self, length: float) -> int:
        return -(-to_ms(length) // self.tick_ms)

    def value(self, c: ClipCandidate) -> float:
        if self.objective_mode == "importance":
            return c.importance
        return c.importance - self.lam * c.length / self.L


@dataclass(frozen=True)
class SelectionResult:
    chosen: tuple[bool, ...]
    objective_value: float
    total_length: float


@dataclass(frozen=True)
class PlannedClip:
    video_id: str
    start: float
    end: float
    importance: float
    sentence_indices: tuple[int, ...]


@dataclass(frozen=True)
class ClipPlan:
    clips: tuple[PlannedClip, ...]
    merge_gap: float = 1.0
    padding: float = 0.25

    @property
    def total_seconds(self) -> float:
        return math.fsum(c.end - c.start for c in self.clips)


def build_candidates(
    alignments: Sequence[Alignment], scores: Mapping[tuple[str, int], float] | None = None
) -> list[ClipCandidate]:
    """One candidate per alignment; importance is the sentence score, else the alignment similarity."""
    if not alignments:
        raise ValueError("build_candidates needs at least one alignment")
    out = []
    for n, a in enumerate(alignments):
        importance = a.similarity
        if scores is not None and (a.video_id, a.original_index) in scores:
            importance = scores[(a.video_id, a.original_index)]
        out.append(ClipCandidate(n, a.video_id, a.start, a.end, importance, (a.original_index,)))
    return out


def filter_candidates(
    candidates: Sequence[ClipCandidate], min_importance: float = 0.0, max_clip_seconds: float | None = None
) -> list[ClipCandidate]:
    out = []
    for c in candidates:
        if c.importance < min_importance:
            continue
        if max_clip_seconds is not None and c.length > max_clip_seconds:
            mid = (c.start + c.end) / 2
            start = max(0.0, round_ms(mid - max_clip_seconds / 2))
            c = ClipCandidate(c.i, c.video_id, start, round_ms(start + max_clip_seconds),
                              c.importance, c.sentence_indices)
        out.append(c)
    return out


def subset_objective(candidates: Sequence[ClipCandidate], chosen: Sequence[bool], budget: SelectionBudget) -> float:
    return math.fsum(budget.value(c) for c, on in zip(candidates, chosen) if on)


def optimize_selection(candidates: Sequence[ClipCandidate], budget: SelectionBudget) -> SelectionResult:
    """Exact 0/1 knapsack over ticks of `resolution` seconds.

    Item weights round up to whole ticks and the capacity rounds down, so the real-seconds
    budget always holds. Among optimal subsets the one whose indicator vector is
    lexicographically largest (earliest candidates included first) wins.
    """
    n = len(candidates)
    cap = budget.ticks
    weights = [budget.weight(c.length) for c in candidates]
    values = [budget.value(c) for c in candidates]
    best = np.zeros(cap + 1, dtype=np.int64)
    take = np.zeros((n, cap + 1), dtype=bool)
    # suffix DP: best[c] = optimum over items i..n-1 with c ticks free
    for i in range(n - 1, -1, -1):
        w, v = weights[i], values[i]
        if w > cap or (budget.objective_mode == "paper" and v <= 0):
            continue
        with_item = np.full(cap + 1, np.iinfo(np.int64).min, dtype=np.int64)
        with_item[w:] = best[: cap + 1 - w] + round(math.ldexp(v, QUANTUM_BITS))
        take[i] = with_item >= best
        best = np.where(take[i], with_item, best)
    chosen = []
    free = cap
    for i in range(n):
        on = bool(take[i, free])
        chosen.append(on)
        if on:
            free -= weights[i]
    total = math.fsum(c.length for c, on in zip(candidates, chosen) if on)
    return SelectionResult(tuple(chosen), subset_objective(candidates, chosen, budget), total)


def postprocess_clips(
    result: SelectionResult,
    candidates: Sequence[ClipCandidate],
    merge_gap: float = 1.0,
    padding: float = 0.25,
    video_durations: Mapping[str, float] | None = None,
    video_order: Sequence[str] | None = None,
    budget_seconds: float | None = None,
) -> ClipPlan:
    """Pad chosen clips, clamp to [0, duration], merge same-video clips whose gap <= merge_gap.

    With `budget_seconds`, a merge that would add footage beyond what padding accounts for
    only happens while the selection's unused budget can absorb it, so the plan never runs
    over budget + 2 * padding per clip. A refused merge trims the later clip's leading pad
    instead so clips never overlap.
    """
    if len(result.chosen) != len(candidates):
        raise ValueError("selection result does not match the candidate list")
    durations = video_durations or {}
    picked = [c for c, on in zip(candidates, result.chosen) if on]
    order = list(video_order or [])
    for c in picked:
        if c.video_id not in order:
            order.append(c.video_id)
    pad_ms = to_ms(padding)
    slack = None
    if budget_seconds is not None:
        slack = to_ms(budget_seconds) - sum(to_ms(c.length) for c in picked)
    clips = []
    for vid in order:
        group = sorted((c for c in picked if c.video_id == vid), key=lambda c: (c.start, c.i))
        merged: list[list] = []
        for c in group:
            start = max(0.0, round_ms(c.start - padding))
            end = round_ms(c.end + padding)
            if vid in durations:
                end = min(end, durations[vid])
            if merged and start - merged[-1][1] <= merge_gap:
                last = merged[-1]
                union = max(last[1], end)
                # footage the merge adds beyond two separately padded clips
                cost = to_ms(union - last[0]) - to_ms(last[1] - last[0]) - to_ms(end - start) + 2 * pad_ms
                if slack is None or cost <= slack or c.start <= last[4]:
                    if slack is not None:
                        slack -= max(cost, 0)
                    last[1] = union
                    last[2] = max(last[2], c.importance)
                    last[3].extend(c.sentence_indices)
                    last[4] = max(last[4], c.end)
                    continue
                # refused: split the shared padding at this clip's own start
                start = max(start, min(last[1], c.start))
                last[1] = min(last[1], start)
            merged.append([start, end, c.importance, list(c.sentence_indices), c.end])
        clips.extend(PlannedClip(vid, s, e, imp, tuple(idx)) for s, e, imp, idx, _ in merged)
    return ClipPlan(tuple(clips), merge_gap, padding)
