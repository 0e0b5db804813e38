"""Tag/word vocabularies and padded index-grid encoding of essays."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

# The 45-tag Penn Treebank tagset, including punctuation tags.
PTB_TAGS: tuple[str, ...] = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS",
    "MD", "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$",
    "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
    "#", "$", "''", "(", ")", ",", ".", ":", "``",
)

PAD_INDEX = 0
UNK_INDEX = 1

# Default grid caps: generous for ASAP mean lengths of 150-650 words.
MAX_SENTENCES = 100
MAX_TOKENS = 50


@dataclass(frozen=True)
class TaggedSentence:
    """Tokens of one sentence paired one-to-one with PTB tags."""

    tokens: tuple
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags must have equal length")
        for tag in self.tags:
            if tag not in _TAG_SET:
                raise ValueError(f"unknown tag {tag!r}")


_TAG_SET = frozenset(PTB_TAGS)


@dataclass(frozen=True)
class Vocabulary:
    """Symbol -> dense index map with reserved PAD (0) and UNK (1)."""

    entries: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries) + 2

    def index(self, symbol: str) -> int:
        return self.entries.get(symbol, UNK_INDEX)

    @staticmethod
    def for_tags() -> "Vocabulary":
        return Vocabulary({tag: i + 2 for i, tag in enumerate(PTB_TAGS)})

    @staticmethod
    def from_words(essays, min_freq: int = 2) -> "Vocabulary":
        """Word vocabulary over lowercased surfaces, frequency >= min_freq."""
        counts: Counter = Counter()
        for sentences in essays:
            for sent in sentences:
                counts.update(tok.surface.lower() for tok in sent.tokens)
        kept = sorted(w for w, c in counts.items() if c >= min_freq)
        return Vocabulary({w: i + 2 for i, w in enumerate(kept)})


@dataclass(frozen=True)
class EssayTensor:
    """Padded [max_sentences x max_tokens] index grid with validity mask."""

    indices: np.ndarray
    mask: np.ndarray
    num_sentences: int


def encode_indices(
    sentences: list[TaggedSentence],
    vocab: Vocabulary,
    mode: str = "pos",
    max_sentences: int = MAX_SENTENCES,
    max_tokens: int = MAX_TOKENS,
) -> EssayTensor:
    """Encode tagged sentences as a padded grid of vocabulary indices.

    mode "pos" indexes the tag sequence, mode "word" the lowercased
    surfaces.  Sentences and tokens beyond the caps are truncated.
    """
    if mode not in ("pos", "word"):
        raise ValueError(f"mode must be 'pos' or 'word', got {mode!r}")
    indices = np.full((max_sentences, max_tokens), PAD_INDEX, dtype=np.int64)
    mask = np.zeros((max_sentences, max_tokens), dtype=bool)
    kept = sentences[:max_sentences]
    for row, sent in enumerate(kept):
        symbols = (
            sent.tags if mode == "pos" else [t.surface.lower() for t in sent.tokens]
        )
        for col, sym in enumerate(symbols[:max_tokens]):
            indices[row, col] = vocab.index(sym)
            mask[row, col] = True
    return EssayTensor(indices=indices, mask=mask, num_sentences=len(kept))
