"""Train the bundled part-of-speech tagger from the hand-tagged corpus.

Run from the repo root:

    python tools/train_tagger.py

Writes src/essay_scorer/textproc/data/tagger_weights.json.  Training is
seeded and single-threaded, so the asset is reproducible.
"""

import random
import sys
from collections import Counter, defaultdict
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from essay_scorer.textproc.tagger import (  # noqa: E402
    AveragedPerceptron,
    PerceptronTagger,
    _normalize,
    _rule_tag,
    context_features,
)

CORPUS = REPO / "tools" / "tagged_corpus.txt"
OUT = REPO / "src" / "essay_scorer" / "textproc" / "data" / "tagger_weights.json"

ITERATIONS = 10
SEED = 13
TAGDICT_MIN_FREQ = 4


def load_corpus():
    sentences = []
    for line in CORPUS.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pairs = []
        for item in line.split():
            word, _, tag = item.rpartition("|")
            pairs.append((word, tag))
        sentences.append(pairs)
    return sentences


def build_tagdict(sentences):
    counts = defaultdict(Counter)
    for sent in sentences:
        for word, tag in sent:
            counts[_normalize(word)][tag] += 1
    tagdict = {}
    for word, tags in counts.items():
        total = sum(tags.values())
        tag, freq = tags.most_common(1)[0]
        if total >= TAGDICT_MIN_FREQ and freq == total:
            tagdict[word] = tag
    return tagdict


def main():
    sentences = load_corpus()
    classes = sorted({tag for sent in sentences for _, tag in sent})
    tagdict = build_tagdict(sentences)
    model = AveragedPerceptron(classes)
    rng = random.Random(SEED)

    for _ in range(ITERATIONS):
        rng.shuffle(sentences)
        for sent in sentences:
            words = [w for w, _ in sent]
            context = (
                PerceptronTagger.START
                + [_normalize(w) for w in words]
                + PerceptronTagger.END
            )
            prev, prev2 = PerceptronTagger.START
            for i, (word, truth) in enumerate(sent):
                rule = _rule_tag(word, words[i - 1] if i else None)
                if rule is not None:
                    guess = rule
                elif _normalize(word) in tagdict:
                    guess = tagdict[_normalize(word)]
                else:
                    feats = context_features(
                        i + 2, _normalize(word), context, prev, prev2
                    )
                    guess = model.predict(feats)
                    model.update(truth, guess, feats)
                prev2, prev = prev, guess

    model.average()
    tagger = PerceptronTagger(model, tagdict)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    tagger.save(OUT)

    # Resubstitution accuracy as a smoke check.
    right = total = 0
    for sent in sorted(sentences):
        words = [w for w, _ in sent]
        gold = [t for _, t in sent]
        pred = tagger.tag(words)
        right += sum(p == g for p, g in zip(pred, gold))
        total += len(gold)
    print(f"wrote {OUT}")
    print(f"training accuracy: {right}/{total} = {right / total:.3f}")


if __name__ == "__main__":
    main()
