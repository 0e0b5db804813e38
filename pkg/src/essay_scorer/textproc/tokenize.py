"""Tokenization of sentence text into word, number and punctuation tokens."""

from __future__ import annotations

import re
from dataclasses import dataclass

# Ordered alternatives: placeholders, contraction-bearing words, numbers,
# plain words (optionally hyphenated), any single non-space character.
_TOKEN_RE = re.compile(
    r"""
    @[A-Za-z0-9]+                                   # ASAP anonymized entity
  | [A-Za-z]+(?:['’][A-Za-z]+)+                # word with apostrophe
  | ['’][A-Za-z]+                              # clitic ('ll, 's, ...)
  | \d+(?:[.,]\d+)*                                 # number
  | [A-Za-z]+(?:-[A-Za-z]+)*                        # word, maybe hyphenated
  | \S                                              # single punctuation mark
    """,
    re.VERBOSE,
)

_NT_RE = re.compile(r"^([A-Za-z]+?)(n['’]t)$", re.IGNORECASE)
_APOS_RE = re.compile(r"^([A-Za-z]+)(['’][A-Za-z]+)$")


@dataclass(frozen=True)
class Token:
    """A single surface token with its span in the source text."""

    surface: str
    start: int
    end: int

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")

    @property
    def is_anon_entity(self) -> bool:
        return self.surface.startswith("@") and len(self.surface) > 1

    @property
    def is_word(self) -> bool:
        return any(c.isalnum() for c in self.surface)


def tokenize(sentence: str) -> list[Token]:
    """Split one sentence into tokens.

    Words, numbers, @-placeholders and individual punctuation marks are
    separate tokens.  Contractions split at the apostrophe ("don't" ->
    "do", "n't"; "I'll" -> "I", "'ll").
    """
    tokens: list[Token] = []
    for match in _TOKEN_RE.finditer(sentence):
        text, start = match.group(), match.start()
        # Already-split clitics stay whole so tokenization is idempotent.
        if text[0] in "'’" or text.lower() in ("n't", "n’t"):
            tokens.append(Token(text, start, match.end()))
            continue
        nt = _NT_RE.match(text)
        if nt:
            stem, neg = nt.group(1), nt.group(2)
            if stem:
                tokens.append(Token(stem, start, start + len(stem)))
            tokens.append(Token(neg, start + len(stem), match.end()))
            continue
        ap = _APOS_RE.match(text)
        if ap:
            stem, suffix = ap.group(1), ap.group(2)
            tokens.append(Token(stem, start, start + len(stem)))
            tokens.append(Token(suffix, start + len(stem), match.end()))
            continue
        tokens.append(Token(text, start, match.end()))
    return tokens
