"""Rule-based sentence segmentation.

Boundaries occur at sentence-final punctuation (. ! ?) followed by
whitespace and an upward-looking continuation (capital letter, quote,
digit or @-placeholder).  A frozen abbreviation guard list suppresses
false splits after common abbreviations.
"""

from __future__ import annotations

import re

# Abbreviations that end with a period but do not end a sentence.
# Stored lowercase without the trailing period.
ABBREVIATIONS = frozenset(
    {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt",
        "etc", "e.g", "i.e", "u.s", "u.k", "vs", "no", "inc", "ltd",
        "co", "corp", "dept", "est", "fig", "gen", "gov", "approx",
        "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
        "sept", "oct", "nov", "dec", "mon", "tue", "wed", "thu", "fri",
        "sat", "sun", "a.m", "p.m",
    }
)

_CONTINUATION = re.compile(r'[A-Z"\'“‘@0-9(]')
_WORD_BEFORE = re.compile(r'([A-Za-z][A-Za-z.]*)$')


def _is_abbreviation(prefix: str) -> bool:
    match = _WORD_BEFORE.search(prefix)
    if match is None:
        return False
    word = match.group(1).lower().rstrip(".")
    if word in ABBREVIATIONS:
        return True
    # Single-letter initials such as "J." in "J. Smith".
    return len(word) == 1


def split_sentences(text: str) -> list[str]:
    """Split raw essay text into sentence strings.

    The returned sentences are whitespace-trimmed slices of the input,
    so joining them preserves every non-whitespace character.  Empty
    input yields an empty list.
    """
    if not text or not text.strip():
        return []

    boundaries = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?":
            # Absorb a run of terminal punctuation plus closing quotes.
            j = i + 1
            while j < n and text[j] in '.!?"\'”’)':
                j += 1
            if j < n and text[j].isspace():
                k = j
                while k < n and text[k].isspace():
                    k += 1
                if k < n and _CONTINUATION.match(text[k]):
                    if ch != "." or not _is_abbreviation(text[:i]):
                        boundaries.append(j)
                i = j
                continue
        i += 1

    sentences = []
    start = 0
    for b in boundaries:
        piece = text[start:b].strip()
        if piece:
            sentences.append(piece)
        start = b
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
