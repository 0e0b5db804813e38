"""Text preprocessing: sentence splitting, tokenization, POS tagging."""

from __future__ import annotations

from .sentences import split_sentences
from .tagger import PerceptronTagger, default_tagger, pos_tag
from .tokenize import Token, tokenize
from .vocab import (
    MAX_SENTENCES,
    MAX_TOKENS,
    PAD_INDEX,
    PTB_TAGS,
    UNK_INDEX,
    EssayTensor,
    TaggedSentence,
    Vocabulary,
    encode_indices,
)

__all__ = [
    "split_sentences", "tokenize", "pos_tag", "preprocess",
    "Token", "TaggedSentence", "Vocabulary", "EssayTensor",
    "encode_indices", "PerceptronTagger", "default_tagger",
    "PTB_TAGS", "PAD_INDEX", "UNK_INDEX", "MAX_SENTENCES", "MAX_TOKENS",
    "read_pretagged", "write_pretagged",
]


def preprocess(text: str) -> list[TaggedSentence]:
    """Raw essay text -> tagged sentences via the bundled pipeline."""
    tagger = default_tagger()
    result = []
    for sentence in split_sentences(text):
        tokens = tokenize(sentence)
        if tokens:
            result.append(tagger.tag_sentence(tokens))
    return result


def read_pretagged(path) -> list[TaggedSentence]:
    """Read token<TAB>tag lines with blank-line sentence separators."""
    sentences: list[TaggedSentence] = []
    tokens: list[Token] = []
    tags: list[str] = []
    offset = 0

    def flush():
        nonlocal tokens, tags
        if tokens:
            sentences.append(TaggedSentence(tokens=tuple(tokens), tags=tuple(tags)))
        tokens, tags = [], []

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                flush()
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ValueError(f"{path}:{lineno}: expected token<TAB>tag")
            surface, tag = parts
            tokens.append(Token(surface, offset, offset + len(surface)))
            tags.append(tag)
            offset += len(surface) + 1
    flush()
    return sentences


def write_pretagged(sentences: list[TaggedSentence], fh) -> None:
    """Inverse of read_pretagged for a writable text stream."""
    for sent in sentences:
        for token, tag in zip(sent.tokens, sent.tags):
            fh.write(f"{token.surface}\t{tag}\n")
        fh.write("\n")
