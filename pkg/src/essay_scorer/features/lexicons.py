"""Bundled word lists: stopwords, easy words, valence lexicon."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


def _read_lines(name: str) -> list[str]:
    ref = resources.files("essay_scorer.features") / "data" / name
    return ref.read_text(encoding="utf-8").splitlines()


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    return frozenset(
        line.strip().lower() for line in _read_lines("stopwords.txt") if line.strip()
    )


@lru_cache(maxsize=None)
def easy_words() -> frozenset[str]:
    return frozenset(
        line.strip().lower() for line in _read_lines("easy_words.txt") if line.strip()
    )


@lru_cache(maxsize=None)
def valence_lexicon() -> dict[str, float]:
    lexicon = {}
    for line in _read_lines("valence.txt"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, value = line.partition("\t")
        lexicon[word.lower()] = float(value)
    return lexicon
