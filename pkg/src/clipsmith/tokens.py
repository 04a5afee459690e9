"""Tokenization shared by the scoring engines and the alignment vector space."""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_ALNUM = re.compile(r"[^\W_]+")


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    text = resources.files("clipsmith").joinpath("data/stopwords.txt").read_text("utf-8")
    return load_stopwords(text)


def load_stopwords(text: str) -> frozenset[str]:
    words = (ln.strip().lower() for ln in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase alphanumeric runs of length >= 2, minus stop words."""
    if stopwords is None:
        stopwords = default_stopwords()
    return [t for t in _ALNUM.findall(text.lower()) if len(t) >= 2 and t not in stopwords]
