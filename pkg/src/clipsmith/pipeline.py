"""Single-video and multi-video (concatenate / divide-and-conquer) summarization runs."""
from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal, Sequence

from .aligner import Alignment, align_global, align_monotone
from .errors import EmptyPlan
from .segmenter import PunctuationPolicy, TimedSentence, filter_questions, restore_punctuation, segment_sentences
from .selector import (
    ClipPlan,
    SelectionBudget,
    build_candidates,
    filter_candidates,
    optimize_selection,
    postprocess_clips,
)
from .summarizer import (
    ENGINES,
    EngineParams,
    ScoredSentence,
    abstractive_summarize,
    check_ratio,
    score_sentences,
    select_top,
)
from .transcript_io import Transcript, round_ms, write_srt

log = logging.getLogger(__name__)

CHEATSHEET_BULLETS = 6


@dataclass(frozen=True)
class SummaryParams:
    ratio: float | None = 0.2
    budget_seconds: float | None = None
    engine: str = "textrank"
    min_importance: float = 0.0
    max_clip_seconds: float | None = None
    merge_gap: float = 1.0
    padding: float = 0.25
    filter_questions: bool = False
    abstractive_adapter: str | None = None
    abstractive_fallback: bool = True
    punctuation: PunctuationPolicy = field(default_factory=PunctuationPolicy)
    objective_mode: str = "importance"
    lam: float = 1.0
    resolution: float = 0.1
    engine_params: EngineParams = field(default_factory=EngineParams)
    cache_dir: Path | None = None
    max_workers: int | None = None

    def __post_init__(self):
        if self.ratio is None and self.budget_seconds is None:
            raise ValueError("set a ratio, a budget in seconds, or both")
        if self.ratio is not None:
            check_ratio(self.ratio)
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise ValueError("budget_seconds must be > 0")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if not 0 <= self.min_importance <= 1:
            raise ValueError("min_importance must be in [0, 1]")
        if self.merge_gap < 0 or self.padding < 0:
            raise ValueError("merge_gap and padding must be >= 0")

    @property
    def extractive_ratio(self) -> float:
        # budget-only runs rank every sentence and let the knapsack do the cutting
        return self.ratio if self.ratio is not None else 1.0


@dataclass(frozen=True)
class ClipProvenance:
    video_id: str
    sentence_indices: tuple[int, ...]
    engine: str
    similarity: float


@dataclass(frozen=True)
class SummaryBundle:
    plan: ClipPlan
    cheatsheet: dict[str, list[str]]
    paragraph: str
    provenance: tuple[ClipProvenance, ...]
    mode: Literal["single", "multi-concat", "multi-dnc"]
    budget_seconds: float
    engine: str
    paragraph_fallback: bool
    stats: dict = field(default_factory=dict, compare=False)


def _prepare(t: Transcript, p: SummaryParams) -> list[TimedSentence]:
    sentences = segment_sentences(restore_punctuation(t, p.punctuation))
    if p.filter_questions:
        sentences = filter_questions(sentences)
    return sentences


def _budget(p: SummaryParams, source_seconds: float) -> float:
    if p.budget_seconds is not None:
        return p.budget_seconds
    return round_ms(p.ratio * source_seconds)


def _top_bullets(sentences: Sequence[TimedSentence], scores: Sequence[float]) -> list[str]:
    order = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))[:CHEATSHEET_BULLETS]
    return [sentences[i].text for i in sorted(order)]


def _paragraph(text: str, ratio: float, p: SummaryParams) -> tuple[list[str], bool]:
    if p.abstractive_adapter is None and not p.abstractive_fallback:
        return [], False
    sentences = abstractive_summarize(text, ratio, p.abstractive_adapter, p.engine_params)
    return sentences, p.abstractive_adapter is None


def _select(
    alignments: list[Alignment],
    scores: dict[tuple[str, int], float] | None,
    p: SummaryParams,
    durations: dict[str, float],
    order: list[str],
    engine: str,
) -> tuple[ClipPlan, tuple[ClipProvenance, ...], float]:
    budget_seconds = _budget(p, sum(durations.values()))
    candidates = build_candidates(alignments, scores)
    candidates = filter_candidates(candidates, p.min_importance, p.max_clip_seconds)
    if not candidates:
        raise EmptyPlan("every candidate clip fell below the importance threshold")
    budget = SelectionBudget(budget_seconds, min(p.resolution, budget_seconds), p.objective_mode, p.lam)
    result = optimize_selection(candidates, budget)
    plan = postprocess_clips(result, candidates, p.merge_gap, p.padding, durations, order, budget_seconds)
    if not plan.clips:
        raise EmptyPlan(f"no clip fits the {budget_seconds:.3f} s budget")
    similarity = {(a.video_id, a.original_index): a.similarity for a in alignments}
    provenance = tuple(
        ClipProvenance(c.video_id, c.sentence_indices, engine,
                       min(similarity[(c.video_id, i)] for i in c.sentence_indices))
        for c in plan.clips
    )
    return plan, provenance, budget_seconds


def summarize_single(t: Transcript, p: SummaryParams) -> SummaryBundle:
    sentences = _prepare(t, p)
    if not sentences:
        raise EmptyPlan(f"{t.video_id}: no sentences left after question filtering")
    scored = score_sentences(sentences, p.engine, p.engine_params)
    summary = select_top(scored, p.extractive_ratio, p.engine)
    chosen = [sentences[i] for i in summary.selected]
    alignments = align_monotone([s.text for s in chosen], sentences)
    scores = {(t.video_id, s.sentence_index): s.score for s in scored}
    durations = {t.video_id: t.duration}
    plan, provenance, budget = _select(alignments, scores, p, durations, [t.video_id], p.engine)
    paragraph, fallback = _paragraph(" ".join(s.text for s in chosen), p.extractive_ratio, p)
    bullets = _top_bullets(chosen, [scored[i].score for i in summary.selected])
    return SummaryBundle(
        plan, {t.video_id: bullets}, " ".join(paragraph), provenance, "single", budget, p.engine, fallback,
        {"sentences": len(sentences), "extractive_selected": len(chosen), "final_pass_input": len(sentences)},
    )


def _check_multi(ts: Sequence[Transcript]) -> None:
    if len(ts) < 2:
        raise ValueError("multi-video summarization needs at least two transcripts")
    ids = [t.video_id for t in ts]
    if len(set(ids)) != len(ids):
        raise ValueError("transcript video ids must be distinct")


def _dedupe(alignments: list[Alignment]) -> list[Alignment]:
    seen = set()
    out = []
    for a in alignments:
        key = (a.video_id, a.original_index)
        if key not in seen:
            seen.add(key)
            out.append(a)
    return out


def _finish_multi(
    ts: Sequence[Transcript],
    originals: list[tuple[str, list[TimedSentence]]],
    final: list[str],
    scores: dict[tuple[str, int], float],
    p: SummaryParams,
    mode: str,
    fallback: bool,
    stats: dict,
) -> SummaryBundle:
    alignments = _dedupe(align_global(final, originals))
    use_scores = scores if p.abstractive_adapter is None else None
    order = [t.video_id for t in ts]
    durations = {t.video_id: t.duration for t in ts}
    engine = p.engine if p.abstractive_adapter is None else "abstractive"
    plan, provenance, budget = _select(alignments, use_scores, p, durations, order, engine)

    by_video: dict[str, list[tuple[float, int, str]]] = {vid: [] for vid in order}
    for a in alignments:
        importance = use_scores.get((a.video_id, a.original_index), a.similarity) if use_scores else a.similarity
        by_video[a.video_id].append((importance, a.original_index, final[a.summary_index]))
    cheatsheet = {}
    for vid, items in by_video.items():
        top = sorted(items, key=lambda x: (-x[0], x[1]))[:CHEATSHEET_BULLETS]
        cheatsheet[vid] = [text for _, _, text in sorted(top, key=lambda x: x[1])]
    paragraph = " ".join(final) if (p.abstractive_adapter or p.abstractive_fallback) else ""
    return SummaryBundle(plan, cheatsheet, paragraph, provenance, mode, budget, engine, fallback, stats)


def summarize_multi_concat(ts: Sequence[Transcript], p: SummaryParams) -> SummaryBundle:
    """Concatenate every transcript, summarize once, then search all videos for each final sentence."""
    _check_multi(ts)
    originals = [(t.video_id, _prepare(t, p)) for t in ts]
    joined = [s for _, sents in originals for s in sents]
    if not joined:
        raise EmptyPlan("no sentences left after question filtering")
    scored = score_sentences(joined, p.engine, p.engine_params)
    summary = select_top(scored, p.extractive_ratio, p.engine)
    extractive = [joined[i].text for i in summary.selected]
    final = abstractive_summarize(" ".join(extractive), p.extractive_ratio, p.abstractive_adapter, p.engine_params)
    scores = {(joined[s.sentence_index].video_id, joined[s.sentence_index].index): s.score for s in scored}
    stats = {
        "final_pass_input": len(joined),
        "extractive_selected": len(extractive),
        "abstractive_input": len(extractive),
        "abstractive_ratio": p.extractive_ratio,
    }
    return _finish_multi(ts, originals, final, scores, p, "multi-concat", p.abstractive_adapter is None, stats)


@dataclass(frozen=True)
class VideoSummary:
    """Per-video stage output of divide-and-conquer; also the cache payload."""

    video_id: str
    sentences: list[TimedSentence]
    scores: list[float]
    selected: list[int]


def transcript_digest(t: Transcript) -> str:
    h = hashlib.sha256()
    h.update(t.video_id.encode("utf-8") + b"\0")
    h.update(write_srt(t))
    return h.hexdigest()


def _cache_key(p: SummaryParams) -> dict:
    return {
        "ratio": p.extractive_ratio,
        "engine": p.engine,
        "filter_questions": p.filter_questions,
        "punctuation": asdict(p.punctuation),
        "damping": p.engine_params.damping,
        "tolerance": p.engine_params.tolerance,
        "max_iterations": p.engine_params.max_iterations,
        "stopwords": hashlib.sha256("\n".join(sorted(p.engine_params.stopwords)).encode()).hexdigest(),
    }


def _load_cached(path: Path, key: dict) -> VideoSummary | None:
    try:
        data = json.loads(path.read_text("utf-8"))
        if data.get("params") != key:
            return None
        sentences = [TimedSentence(s["text"], s["start"], s["end"], data["video_id"], n)
                     for n, s in enumerate(data["sentences"])]
        scores = json.loads((path.parent / "scores.json").read_text("utf-8"))["scores"]
        return VideoSummary(data["video_id"], sentences, scores, data["selected"])
    except (OSError, ValueError, KeyError, TypeError):
        return None


def _store_cached(path: Path, key: dict, vs: VideoSummary) -> None:
    from .render import emit_edl  # local: render imports pipeline types
    from .selector import PlannedClip

    path.parent.mkdir(parents=True, exist_ok=True)
    clips = tuple(
        PlannedClip(vs.video_id, vs.sentences[i].start, vs.sentences[i].end, vs.scores[i], (i,))
        for i in vs.selected
    )
    edl = json.loads(emit_edl(ClipPlan(clips, 0.0, 0.0), 0.0))
    payload = {
        "video_id": vs.video_id,
        "params": key,
        "selected": vs.selected,
        "sentences": [{"text": s.text, "start": s.start, "end": s.end} for s in vs.sentences],
        "edl": edl,
    }
    (path.parent / "scores.json").write_text(json.dumps({"scores": vs.scores}) + "\n", "utf-8")
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=1) + "\n", "utf-8")


def summarize_video(t: Transcript, p: SummaryParams) -> VideoSummary:
    """Per-video extractive stage; cached under <cache>/<sha256>/summary.json when a cache dir is set."""
    key = _cache_key(p)
    path = None
    if p.cache_dir is not None:
        path = Path(p.cache_dir) / transcript_digest(t) / "summary.json"
        cached = _load_cached(path, key)
        if cached is not None:
            log.debug("cache hit for %s", t.video_id)
            return cached
    sentences = _prepare(t, p)
    if sentences:
        scored = score_sentences(sentences, p.engine, p.engine_params)
        scores = [s.score for s in scored]
        selected = list(select_top(scored, p.extractive_ratio, p.engine).selected)
    else:
        scores, selected = [], []
    vs = VideoSummary(t.video_id, sentences, scores, selected)
    if path is not None:
        _store_cached(path, key, vs)
    return vs


def summarize_multi_dnc(ts: Sequence[Transcript], p: SummaryParams) -> SummaryBundle:
    """Summarize each video (in parallel), then re-summarize the joined summaries at ratio 1/N."""
    _check_multi(ts)
    n = len(ts)
    if p.max_workers == 1:
        stage = [summarize_video(t, p) for t in ts]
    else:
        with ThreadPoolExecutor(max_workers=p.max_workers or n) as pool:
            # map() yields in submission order, whatever order the workers finish in
            stage = list(pool.map(lambda t: summarize_video(t, p), ts))
    extractive = [vs.sentences[i].text for vs in stage for i in vs.selected]
    if not extractive:
        raise EmptyPlan("no sentences left after question filtering")
    final_ratio = 1.0 / n
    final = abstractive_summarize(" ".join(extractive), final_ratio, p.abstractive_adapter, p.engine_params)
    originals = [(vs.video_id, vs.sentences) for vs in stage]
    scores = {(vs.video_id, i): s for vs in stage for i, s in enumerate(vs.scores)}
    stats = {
        "final_pass_input": len(extractive),
        "extractive_selected": len(extractive),
        "abstractive_input": len(extractive),
        "abstractive_ratio": final_ratio,
        "per_video_selected": [len(vs.selected) for vs in stage],
    }
    return _finish_multi(ts, originals, final, scores, p, "multi-dnc", p.abstractive_adapter is None, stats)
