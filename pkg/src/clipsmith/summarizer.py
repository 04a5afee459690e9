"""Sentence importance engines (tf-idf, TextRank, SumBasic), top-ratio selection, abstractive adapter."""
from __future__ import annotations

import os
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Literal, Sequence

import numpy as np

from .aligner import build_vocabulary, embed
from .errors import AdapterFailed, NoContent
from .segmenter import split_sentences
from .tokens import default_stopwords, tokenize

Engine = Literal["tfidf", "textrank", "sumbasic"]
ENGINES: tuple[str, ...] = ("tfidf", "textrank", "sumbasic")


@dataclass(frozen=True)
class ScoredSentence:
    sentence_index: int
    score: float


@dataclass(frozen=True)
class ExtractiveSummary:
    selected: tuple[int, ...]
    ratio: float
    engine: str


@dataclass(frozen=True)
class EngineParams:
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    stopwords: frozenset[str] = field(default_factory=default_stopwords)

    def __post_init__(self):
        if not 0 < self.damping < 1:
            raise ValueError("damping must be in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


def check_ratio(ratio: float) -> float:
    if not 0 < ratio <= 1:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    return float(ratio)


def summary_size(ratio: float, n: int) -> int:
    """clamp(round_half_up(ratio * n), 1, n), computed in decimal to dodge float halves."""
    k = int((Decimal(repr(float(ratio))) * n).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    return min(max(k, 1), n)


def minmax(raw: Sequence[float]) -> list[float]:
    lo, hi = min(raw), max(raw)
    if hi == lo:
        return [1.0] * len(raw)
    return [(x - lo) / (hi - lo) for x in raw]


def _texts(sentences) -> list[str]:
    return [s if isinstance(s, str) else s.text for s in sentences]


def _tfidf_raw(texts: list[str], params: EngineParams) -> list[float]:
    vocab = build_vocabulary([texts], params.stopwords)
    return [
        sum(v.weights.values()) / len(v.weights) if v.weights else 0.0
        for v in embed(texts, vocab)
    ]


def textrank_raw(texts: list[str], params: EngineParams) -> list[float]:
    """Stationary distribution of the damped walk on the tf-idf cosine graph (sums to 1).

    The walk runs over the sentences sorted by text and the result is scattered back, so
    reordering the input reorders the output bit for bit.
    """
    n = len(texts)
    order = sorted(range(n), key=texts.__getitem__)
    texts = [texts[i] for i in order]
    vocab = build_vocabulary([texts], params.stopwords)
    dense = np.zeros((n, len(vocab.df)))
    for row, vec in enumerate(embed(texts, vocab)):
        if vec.norm > 0:
            for tid, w in vec.weights.items():
                dense[row, tid] = w / vec.norm
    sim = np.clip(dense @ dense.T, 0.0, 1.0)
    np.fill_diagonal(sim, 0.0)
    rowsum = sim.sum(axis=1)
    dangling = rowsum == 0
    trans = np.where(dangling[:, None], 1.0 / n, sim / np.where(dangling, 1.0, rowsum)[:, None])
    d = params.damping
    p = np.full(n, 1.0 / n)
    for _ in range(params.max_iterations):
        nxt = (1 - d) / n + d * (trans.T @ p)
        change = np.abs(nxt - p).sum()
        p = nxt
        if change < params.tolerance:
            break
    out = [0.0] * n
    first = 0
    for k, i in enumerate(order):
        # duplicates are interchangeable; give them all the first copy's value
        if texts[k] != texts[first]:
            first = k
        out[i] = float(p[first])
    return out


def _sumbasic_raw(texts: list[str], params: EngineParams) -> list[float]:
    tokens = [tokenize(t, params.stopwords) for t in texts]
    counts = Counter(tok for toks in tokens for tok in toks)
    total = sum(counts.values())
    prob = {w: c / total for w, c in counts.items()}
    n = len(texts)
    containing: dict[str, set[int]] = {}
    for i, toks in enumerate(tokens):
        for w in toks:
            containing.setdefault(w, set()).add(i)

    def mean_prob(i: int) -> float:
        return sum(prob[w] for w in tokens[i]) / len(tokens[i]) if tokens[i] else 0.0

    current = [mean_prob(i) for i in range(n)]
    remaining = set(range(n))
    rank = [0] * n
    for r in range(n):
        best = min(remaining, key=lambda i: (-current[i], i))
        rank[best] = r
        remaining.discard(best)
        touched = set()
        for w in set(tokens[best]):
            prob[w] = prob[w] ** 2
            touched |= containing[w]
        for i in touched & remaining:
            current[i] = mean_prob(i)
    return [1 - r / n for r in rank]


_RAW = {"tfidf": _tfidf_raw, "textrank": textrank_raw, "sumbasic": _sumbasic_raw}


def score_sentences(sentences, engine: Engine = "textrank", params: EngineParams | None = None) -> list[ScoredSentence]:
    """Normalized importance in [0, 1] per sentence; accepts TimedSentence objects or plain strings."""
    if engine not in _RAW:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    params = params or EngineParams()
    texts = _texts(sentences)
    if not texts:
        raise ValueError("score_sentences needs at least one sentence")
    if not any(tokenize(t, params.stopwords) for t in texts):
        raise NoContent("every sentence is empty after stop-word removal")
    scores = minmax(_RAW[engine](texts, params))
    return [ScoredSentence(i, s) for i, s in enumerate(scores)]


def select_top(scores: Sequence[ScoredSentence], ratio: float, engine: str = "textrank") -> ExtractiveSummary:
    check_ratio(ratio)
    if not scores:
        raise ValueError("select_top needs at least one score")
    k = summary_size(ratio, len(scores))
    ranked = sorted(scores, key=lambda s: (-s.score, s.sentence_index))
    return ExtractiveSummary(tuple(sorted(s.sentence_index for s in ranked[:k])), ratio, engine)


def abstractive_summarize(
    text: str, ratio: float, adapter: str | None = None, params: EngineParams | None = None
) -> list[str]:
    """Summary sentences from an external command, or an extractive TextRank pass when no adapter is set."""
    check_ratio(ratio)
    if not text.strip():
        raise ValueError("abstractive_summarize needs non-empty text")
    if adapter is None:
        sentences = split_sentences(text)
        summary = select_top(score_sentences(sentences, "textrank", params), ratio)
        return [sentences[i] for i in summary.selected]
    env = dict(os.environ, SUMMARY_RATIO=f"{ratio:.2f}")
    try:
        proc = subprocess.run(
            shlex.split(adapter), input=text.encode("utf-8"), capture_output=True, env=env, check=False
        )
    except OSError as exc:
        raise AdapterFailed(None, str(exc), "could not start abstractive command") from None
    stderr = proc.stderr.decode("utf-8", errors="replace")
    if proc.returncode != 0:
        raise AdapterFailed(proc.returncode, stderr)
    out = split_sentences(proc.stdout.decode("utf-8", errors="replace"))
    if not out:
        raise AdapterFailed(proc.returncode, stderr, "empty output")
    return out
