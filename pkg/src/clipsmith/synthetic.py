"""Seeded synthetic lecture transcripts for tests, fixtures and benchmarks."""
from __future__ import annotations

import random

from .transcript_io import FormatKind, TimedSegment, Transcript

TOPICS = [
    "gradient descent updates the weights along the negative gradient",
    "convolution layers share filters across every image position",
    "pooling reduces spatial resolution while keeping strong activations",
    "the loss function measures prediction error on training examples",
    "regularization penalizes large weights to reduce overfitting",
    "backpropagation computes gradients with the chain rule",
    "dropout randomly disables neurons during training",
    "batch normalization stabilizes layer input distributions",
    "recurrent networks carry hidden state across time steps",
    "attention weights tokens by their relevance to a query",
    "transformers stack attention blocks with feedforward layers",
    "embeddings map discrete symbols into dense vectors",
    "the learning rate controls the optimizer step size",
    "validation data estimates generalization performance",
    "segmentation maps assign a class to every pixel",
    "feature hierarchies grow from edges to object parts",
]
FILLER = (
    "model data network layer signal output input matrix vector kernel channel sample batch "
    "epoch metric score class label pixel image frame sequence token memory buffer graph node "
    "edge weight bias error noise variance mean curve slope surface region boundary scale"
).split()


def random_sentence(rng: random.Random, words: int | None = None) -> str:
    if rng.random() < 0.6:
        base = rng.choice(TOPICS).split()
        extra = rng.sample(FILLER, rng.randint(1, 4))
        body = base + extra
    else:
        body = rng.sample(FILLER, words or rng.randint(4, 10))
    text = " ".join(body)
    return text[0].upper() + text[1:] + "."


def lecture(
    rng: random.Random,
    n_sentences: int,
    video_id: str = "lecture",
    gap: tuple[float, float] = (0.0, 1.5),
    unique: bool = False,
    questions: float = 0.0,
) -> Transcript:
    """One segment per sentence, ms-aligned, sentences separated by random pauses."""
    segments = []
    seen = set()
    t = round(rng.uniform(0, 2), 3)
    while len(segments) < n_sentences:
        text = random_sentence(rng)
        if unique:
            key = frozenset(text.lower().rstrip(".").split())
            if key in seen:
                continue
            seen.add(key)
        if questions and rng.random() < questions:
            text = text[:-1] + "?"
        duration = round(rng.uniform(1.5, 6.0), 3)
        segments.append(TimedSegment(text, t, duration, video_id))
        t = round(t + duration + rng.uniform(*gap), 3)
    return Transcript(video_id, tuple(segments), FormatKind.YOUTUBE_JSON)


def unpunctuated(t: Transcript) -> Transcript:
    """Strip terminal punctuation and case, as raw auto-captions arrive."""
    segs = tuple(
        TimedSegment(s.text.rstrip(".?!").lower(), s.start, s.duration, s.video_id) for s in t.segments
    )
    return Transcript(t.video_id, segs, t.source_format)
