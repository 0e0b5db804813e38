"""The five feature-category extractors.

Every extractor takes the tagged sentences of one essay and returns a
fixed-length list of floats.  All ratios define 0/0 as 0, so an empty
essay maps to all zeros in every category.
"""

from __future__ import annotations

from collections import Counter

from ..textproc.vocab import PTB_TAGS, TaggedSentence
from .lexicons import easy_words, stopwords, valence_lexicon
from .syllables import count_syllables

LENGTH_NAMES = (
    "char_count", "word_count", "sentence_count", "mean_word_length",
    "mean_sentence_length", "max_sentence_length", "min_sentence_length",
    "long_word_proportion", "commas_per_sentence", "punct_per_sentence",
    "unique_punct_count",
)

READABILITY_NAMES = (
    "flesch_reading_ease", "flesch_kincaid_grade", "gunning_fog", "smog_index",
    "automated_readability_index", "coleman_liau_index", "lix", "rix",
    "dale_chall", "mean_syllables_per_word", "polysyllable_proportion",
    "linsear_write", "forcast",
)

COMPLEXITY_NAMES = (
    "clauses_per_sentence", "mean_clause_length", "max_clauses_in_sentence",
    "mean_sentence_depth", "mean_leaf_depth",
)

VARIATION_NAMES = (
    "unique_word_count", "type_token_ratio", "corrected_type_token_ratio",
    "hapax_proportion", "stopword_proportion", "distinct_bigram_ratio",
    "distinct_trigram_ratio", "word_rarity",
) + tuple(f"tag_freq_{tag}" for tag in PTB_TAGS)

SENTIMENT_NAMES = (
    "positive_sentence_proportion", "negative_sentence_proportion",
    "neutral_sentence_proportion", "mean_sentence_polarity",
)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _words(sentences: list[TaggedSentence]) -> list[str]:
    return [
        tok.surface for sent in sentences for tok in sent.tokens if tok.is_word
    ]


def extract_length(sentences: list[TaggedSentence]) -> list[float]:
    words = _words(sentences)
    puncts = [
        tok.surface
        for sent in sentences
        for tok in sent.tokens
        if not tok.is_word
    ]
    char_count = sum(len(w) for w in words)
    sent_word_counts = [
        sum(tok.is_word for tok in sent.tokens) for sent in sentences
    ]
    n_sents = len(sentences)
    return [
        float(char_count),
        float(len(words)),
        float(n_sents),
        _ratio(char_count, len(words)),
        _ratio(len(words), n_sents),
        float(max(sent_word_counts, default=0)),
        float(min(sent_word_counts, default=0)),
        _ratio(sum(len(w) >= 7 for w in words), len(words)),
        _ratio(puncts.count(","), n_sents),
        _ratio(len(puncts), n_sents),
        float(len(set(puncts))),
    ]


def extract_readability(sentences: list[TaggedSentence]) -> list[float]:
    words = _words(sentences)
    n_words = len(words)
    n_sents = len(sentences)
    if n_words == 0 or n_sents == 0:
        return [0.0] * len(READABILITY_NAMES)

    syllables = [count_syllables(w) for w in words]
    total_syll = sum(syllables)
    poly = sum(s >= 3 for s in syllables)
    mono = sum(s == 1 for s in syllables)
    letters = sum(sum(c.isalnum() for c in w) for w in words)
    long_words = sum(len(w) > 6 for w in words)
    easy = easy_words()
    difficult = sum(w.lower() not in easy for w in words)

    wps = n_words / n_sents
    spw = total_syll / n_words

    flesch = 206.835 - 1.015 * wps - 84.6 * spw
    fk_grade = 0.39 * wps + 11.8 * spw - 15.59
    fog = 0.4 * (wps + 100.0 * poly / n_words)
    smog = 1.0430 * (poly * 30.0 / n_sents) ** 0.5 + 3.1291
    ari = 4.71 * letters / n_words + 0.5 * wps - 21.43
    coleman = 0.0588 * (100.0 * letters / n_words) - 0.296 * (100.0 * n_sents / n_words) - 15.8
    lix = wps + 100.0 * long_words / n_words
    rix = long_words / n_sents
    dc_pct = 100.0 * difficult / n_words
    dale_chall = 0.1579 * dc_pct + 0.0496 * wps
    if dc_pct > 5.0:
        dale_chall += 3.6365
    # Linsear Write over the whole text rather than a 100-word sample.
    points = (n_words - poly) * 1.0 + poly * 3.0
    r = points / n_sents
    linsear = r / 2.0 if r > 20.0 else r / 2.0 - 1.0
    forcast = 20.0 - (mono * 150.0 / n_words) / 10.0

    return [
        flesch, fk_grade, fog, smog, ari, coleman, lix, rix, dale_chall,
        spw, poly / n_words, linsear, forcast,
    ]


# Subordinating conjunctions that open a dependent clause (IN-tagged).
SUBORDINATORS = frozenset(
    {
        "because", "although", "though", "since", "while", "if", "unless",
        "until", "whereas", "after", "before", "once", "whether", "that",
        "whenever", "wherever", "as",
    }
)

_RELATIVE_TAGS = frozenset({"WDT", "WP", "WP$", "WRB"})
_FINITE_TAGS = frozenset({"VBD", "VBP", "VBZ", "MD"})


def _clause_boundaries(sent: TaggedSentence) -> list[int]:
    """Indices where a new clause starts (never index 0)."""
    boundaries = []
    tags = sent.tags
    lowers = [tok.surface.lower() for tok in sent.tokens]
    for i in range(1, len(tags)):
        tag = tags[i]
        if tag == "IN" and lowers[i] in SUBORDINATORS:
            boundaries.append(i)
        elif tag in _RELATIVE_TAGS:
            boundaries.append(i)
        elif tag == "CC":
            prev_start = boundaries[-1] if boundaries else 0
            left_finite = any(t in _FINITE_TAGS for t in tags[prev_start:i])
            right_finite = any(t in _FINITE_TAGS for t in tags[i + 1 :])
            if left_finite and right_finite:
                boundaries.append(i)
    return boundaries


def _token_depths(sent: TaggedSentence) -> list[int]:
    """Nesting-depth proxy: 1 + subordinate markers seen so far."""
    depths = []
    depth = 1
    lowers = [tok.surface.lower() for tok in sent.tokens]
    for i, tag in enumerate(sent.tags):
        if (tag == "IN" and lowers[i] in SUBORDINATORS) or tag in _RELATIVE_TAGS:
            depth += 1
        depths.append(depth)
    return depths


def extract_complexity(sentences: list[TaggedSentence]) -> list[float]:
    if not sentences:
        return [0.0] * len(COMPLEXITY_NAMES)
    clause_counts = []
    clause_lengths = []
    sent_depths = []
    all_depths = []
    for sent in sentences:
        bounds = _clause_boundaries(sent)
        starts = [0] + bounds
        ends = bounds + [len(sent.tokens)]
        clause_counts.append(len(starts))
        clause_lengths.extend(e - s for s, e in zip(starts, ends))
        depths = _token_depths(sent)
        sent_depths.append(max(depths, default=1))
        all_depths.extend(depths)
    return [
        _ratio(sum(clause_counts), len(sentences)),
        _ratio(sum(clause_lengths), len(clause_lengths)),
        float(max(clause_counts)),
        _ratio(sum(sent_depths), len(sent_depths)),
        _ratio(sum(all_depths), len(all_depths)),
    ]


def extract_variation(sentences: list[TaggedSentence]) -> list[float]:
    words = [w.lower() for w in _words(sentences)]
    n_words = len(words)
    counts = Counter(words)
    unique = len(counts)
    hapax = sum(c == 1 for c in counts.values())

    bigrams = list(zip(words, words[1:]))
    trigrams = list(zip(words, words[1:], words[2:]))
    stops = stopwords()
    common = stops | easy_words()

    all_tags = [tag for sent in sentences for tag in sent.tags]
    n_tokens = len(all_tags)
    tag_counts = Counter(all_tags)

    head = [
        float(unique),
        _ratio(unique, n_words),
        unique / (2.0 * n_words) ** 0.5 if n_words else 0.0,
        _ratio(hapax, n_words),
        _ratio(sum(w in stops for w in words), n_words),
        _ratio(len(set(bigrams)), len(bigrams)),
        _ratio(len(set(trigrams)), len(trigrams)),
        _ratio(sum(w not in common for w in words), n_words),
    ]
    tag_freqs = [_ratio(tag_counts.get(tag, 0), n_tokens) for tag in PTB_TAGS]
    return head + tag_freqs


NEGATORS = frozenset(
    {"not", "n't", "no", "never", "neither", "nor", "cannot", "nothing", "without"}
)
NEGATION_WINDOW = 3
POLARITY_THRESHOLD = 0.05


def sentence_polarity(sent: TaggedSentence) -> float:
    """Mean token valence with negation flips, clamped to [-1, 1]."""
    lexicon = valence_lexicon()
    lowers = [tok.surface.lower() for tok in sent.tokens]
    total = 0.0
    for i, word in enumerate(lowers):
        valence = lexicon.get(word)
        if valence is None:
            continue
        window = lowers[max(0, i - NEGATION_WINDOW) : i]
        if any(w in NEGATORS for w in window):
            valence = -valence
        total += valence
    if not lowers:
        return 0.0
    return max(-1.0, min(1.0, total / len(lowers)))


def extract_sentiment(sentences: list[TaggedSentence]) -> list[float]:
    if not sentences:
        return [0.0] * len(SENTIMENT_NAMES)
    polarities = [sentence_polarity(s) for s in sentences]
    n = len(polarities)
    pos = sum(p > POLARITY_THRESHOLD for p in polarities)
    neg = sum(p < -POLARITY_THRESHOLD for p in polarities)
    return [
        pos / n,
        neg / n,
        (n - pos - neg) / n,
        sum(polarities) / n,
    ]
