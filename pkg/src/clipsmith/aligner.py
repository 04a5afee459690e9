"""Sentence vectors and mapping summary sentences back to timestamped originals."""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import AlignmentMiss, DegenerateMatch
from .segmenter import TimedSentence
from .tokens import tokenize


@dataclass(frozen=True)
class Vocabulary:
    """Token ids by first appearance, plus document frequencies over the sentences seen."""

    ids: Mapping[str, int]
    df: tuple[int, ...]
    n_docs: int
    stopwords: frozenset[str] | None = None

    def idf(self, token_id: int) -> float:
        return math.log(self.n_docs / (1 + self.df[token_id])) + 1.0


def build_vocabulary(corpora: Iterable[Iterable[str]], stopwords: frozenset[str] | None = None) -> Vocabulary:
    ids: dict[str, int] = {}
    df: list[int] = []
    n = 0
    for corpus in corpora:
        for sentence in corpus:
            n += 1
            for tok in dict.fromkeys(tokenize(sentence, stopwords)):
                if tok not in ids:
                    ids[tok] = len(df)
                    df.append(0)
                df[ids[tok]] += 1
    return Vocabulary(MappingProxyType(ids), tuple(df), n, stopwords)


@dataclass(frozen=True)
class EmbeddingVector:
    weights: Mapping[int, float]
    norm: float
    norm_sq: float

    @classmethod
    def from_weights(cls, weights: dict[int, float]) -> "EmbeddingVector":
        sq = math.fsum(w * w for w in weights.values())
        return cls(MappingProxyType(weights), math.sqrt(sq), sq)


def embed(sentences: Sequence[str], vocabulary: Vocabulary | None = None) -> list[EmbeddingVector]:
    """tf-idf vectors; tf is the in-sentence count, idf = ln(n / (1 + df)) + 1."""
    if vocabulary is None:
        vocabulary = build_vocabulary([sentences])
    out = []
    for sentence in sentences:
        counts = Counter(tokenize(sentence, vocabulary.stopwords))
        weights = {}
        for tok, tf in counts.items():
            tid = vocabulary.ids.get(tok)
            if tid is not None:
                weights[tid] = tf * vocabulary.idf(tid)
        out.append(EmbeddingVector.from_weights(weights))
    return out


def cosine_similarity(u: EmbeddingVector, v: EmbeddingVector) -> float:
    if u.norm == 0 or v.norm == 0:
        return 0.0
    if len(u.weights) > len(v.weights):
        u, v = v, u
    # fsum keeps the result independent of token order, so equal bags tie exactly
    dot = math.fsum(w * v.weights[k] for k, w in u.weights.items() if k in v.weights)
    # sqrt of the squared-norm product makes identical vectors come out at exactly 1.0
    return min(1.0, max(0.0, dot / math.sqrt(u.norm_sq * v.norm_sq)))


@dataclass(frozen=True)
class Alignment:
    summary_index: int
    video_id: str
    original_index: int
    similarity: float
    start: float
    end: float


_TERMINAL_TAIL = re.compile(r"[.!?]+$")


def normalize_text(text: str) -> str:
    return _TERMINAL_TAIL.sub("", " ".join(text.lower().split())).strip()


def align_monotone(
    summary: Sequence[str], original: Sequence[TimedSentence], stats: dict | None = None
) -> list[Alignment]:
    """Resume-pointer scan: each summary sentence matches the next identical original sentence."""
    keys = [normalize_text(s.text) for s in original]
    pointer = 0
    comparisons = 0
    out = []
    for k, text in enumerate(summary):
        want = normalize_text(text)
        while pointer < len(original):
            comparisons += 1
            pointer += 1
            if keys[pointer - 1] == want:
                s = original[pointer - 1]
                out.append(Alignment(k, s.video_id, s.index, 1.0, s.start, s.end))
                break
        else:
            raise AlignmentMiss(k)
    if stats is not None:
        stats["comparisons"] = comparisons
    return out


def align_global(
    summary: Sequence[str],
    originals: Sequence[tuple[str, Sequence[TimedSentence]]],
    vocabulary: Vocabulary | None = None,
) -> list[Alignment]:
    """Cosine argmax over every original sentence of every video.

    Ties go to the earlier video in input order, then the smaller sentence index.
    """
    flat = [(vid, s) for vid, sents in originals for s in sents]
    if not flat:
        raise ValueError("align_global needs at least one original sentence")
    if vocabulary is None:
        vocabulary = build_vocabulary([[s.text for _, s in flat], summary])
    vectors = embed([s.text for _, s in flat], vocabulary)
    keys = [normalize_text(s.text) for _, s in flat]
    out = []
    for k, (text, q) in enumerate(zip(summary, embed(summary, vocabulary))):
        want = normalize_text(text)
        best, best_sim = -1, 0.0
        for j, vec in enumerate(vectors):
            sim = 1.0 if keys[j] == want else cosine_similarity(q, vec)
            if sim > best_sim:
                best, best_sim = j, sim
        if best < 0:
            raise DegenerateMatch(k)
        vid, s = flat[best]
        out.append(Alignment(k, vid, s.index, best_sim, s.start, s.end))
    return out
