"""Averaged-perceptron part-of-speech tagger with frozen bundled weights.

Closed-class behaviour (punctuation, numbers, anonymized placeholders,
clitic suffixes) is rule-driven; everything else is scored by a linear
model over local context features.  Weights ship as a checksummed JSON
asset so tagging is deterministic across runs and platforms.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources

from .tokenize import Token
from .vocab import TaggedSentence

WEIGHTS_RESOURCE = "tagger_weights.json"

_PUNCT_TAGS = {
    ".": ".", "!": ".", "?": ".",
    ",": ",",
    ":": ":", ";": ":", "-": ":", "--": ":", "...": ":", "–": ":", "—": ":",
    "(": "(", "[": "(", "{": "(",
    ")": ")", "]": ")", "}": ")",
    "$": "$", "#": "#",
    '"': "''", "'": "''", "’": "''", "“": "``", "”": "''",
    "`": "``", "``": "``", "''": "''",
}

# Clitics produced by the tokenizer's apostrophe split.
_CLITIC_TAGS = {
    "n't": "RB",
    "'ll": "MD",
    "'d": "MD",
    "'re": "VBP",
    "'ve": "VBP",
    "'m": "VBP",
}

_PRONOUN_BEFORE_S = {
    "he", "she", "it", "that", "there", "what", "who", "where", "here", "this",
}


def _rule_tag(surface: str, prev_surface: str | None) -> str | None:
    if surface.startswith("@") and len(surface) > 1:
        return "NNP"
    if surface in _PUNCT_TAGS:
        return _PUNCT_TAGS[surface]
    lower = surface.lower()
    if lower in _CLITIC_TAGS:
        return _CLITIC_TAGS[lower]
    if lower in ("'s", "’s"):
        prev = (prev_surface or "").lower()
        return "VBZ" if prev in _PRONOUN_BEFORE_S else "POS"
    if surface[0].isdigit() or (
        surface[0] in "+-" and len(surface) > 1 and surface[1].isdigit()
    ):
        return "CD"
    if not any(c.isalnum() for c in surface):
        return "SYM"
    return None


def _normalize(surface: str) -> str:
    if any(c.isdigit() for c in surface):
        return "!DIGITS"
    return surface.lower()


def context_features(i: int, word: str, context: list[str], prev: str, prev2: str):
    """Feature strings for position i given the padded word context."""
    feats = [
        "bias",
        f"suf1={word[-1:]}",
        f"suf2={word[-2:]}",
        f"suf3={word[-3:]}",
        f"suf4={word[-4:]}",
        f"pre1={word[0]}" if word else "pre1=",
        f"t-1={prev}",
        f"t-2={prev2}",
        f"t-1t-2={prev}+{prev2}",
        f"w={word}",
        f"t-1w={prev}+{word}",
        f"w-1={context[i - 1]}",
        f"suf3-1={context[i - 1][-3:]}",
        f"w-2={context[i - 2]}",
        f"w+1={context[i + 1]}",
        f"suf3+1={context[i + 1][-3:]}",
        f"w+2={context[i + 2]}",
    ]
    if word and word[0].isupper():
        feats.append("shape=upper")
    if "-" in word[1:-1]:
        feats.append("shape=hyphen")
    for suffix, name in (
        ("ed", "m=ed"), ("ing", "m=ing"), ("ly", "m=ly"), ("s", "m=s"),
        ("ion", "m=ion"), ("er", "m=er"), ("est", "m=est"), ("ous", "m=ous"),
        ("ful", "m=ful"), ("ive", "m=ive"), ("able", "m=able"),
        ("ness", "m=ness"), ("ment", "m=ment"), ("ity", "m=ity"),
    ):
        if word.endswith(suffix):
            feats.append(name)
    return feats


class AveragedPerceptron:
    """Multi-class perceptron with weight averaging for stable training."""

    def __init__(self, classes=None, weights=None):
        self.classes: list[str] = list(classes) if classes else []
        self.weights: dict[str, dict[str, float]] = weights if weights else {}
        self._totals: dict[tuple[str, str], float] = {}
        self._tstamps: dict[tuple[str, str], int] = {}
        self.instances = 0

    def predict(self, features) -> str:
        scores: dict[str, float] = {}
        for feat in features:
            per_class = self.weights.get(feat)
            if not per_class:
                continue
            for cls, weight in per_class.items():
                scores[cls] = scores.get(cls, 0.0) + weight
        # Ties break on class name so prediction is order-independent.
        return max(self.classes, key=lambda c: (scores.get(c, 0.0), c))

    def update(self, truth: str, guess: str, features):
        self.instances += 1
        if truth == guess:
            return
        for feat in features:
            per_class = self.weights.setdefault(feat, {})
            for cls, delta in ((truth, 1.0), (guess, -1.0)):
                key = (feat, cls)
                current = per_class.get(cls, 0.0)
                self._totals[key] = (
                    self._totals.get(key, 0.0)
                    + (self.instances - self._tstamps.get(key, 0)) * current
                )
                self._tstamps[key] = self.instances
                per_class[cls] = current + delta

    def average(self):
        for feat, per_class in self.weights.items():
            for cls, weight in list(per_class.items()):
                key = (feat, cls)
                total = self._totals.get(key, 0.0)
                total += (self.instances - self._tstamps.get(key, 0)) * weight
                averaged = round(total / self.instances, 6)
                if averaged:
                    per_class[cls] = averaged
                else:
                    del per_class[cls]


class PerceptronTagger:
    """Tags token sequences with the 45-tag PTB tagset."""

    START = ["-START-", "-START2-"]
    END = ["-END-", "-END2-"]

    def __init__(self, model: AveragedPerceptron, tagdict: dict[str, str]):
        self.model = model
        self.tagdict = tagdict

    def tag(self, words: list[str]) -> list[str]:
        tags: list[str] = []
        context = (
            self.START + [_normalize(w) for w in words] + self.END
        )
        prev, prev2 = self.START
        for i, surface in enumerate(words):
            tag = _rule_tag(surface, words[i - 1] if i else None)
            if tag is None:
                tag = self.tagdict.get(_normalize(surface))
            if tag is None:
                feats = context_features(
                    i + 2, _normalize(surface), context, prev, prev2
                )
                tag = self.model.predict(feats)
            prev2, prev = prev, tag
            tags.append(tag)
        return tags

    def tag_sentence(self, tokens: list[Token]) -> TaggedSentence:
        tags = self.tag([t.surface for t in tokens])
        return TaggedSentence(tokens=tuple(tokens), tags=tuple(tags))

    def to_payload(self) -> dict:
        return {
            "classes": sorted(self.model.classes),
            "tagdict": self.tagdict,
            "weights": self.model.weights,
        }

    def save(self, path):
        payload = self.to_payload()
        body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(body.encode()).hexdigest()
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"format": "pos-tagger-weights", "version": 1,
                       "sha256": digest, "payload": payload}, fh)

    @classmethod
    def from_file(cls, path=None) -> "PerceptronTagger":
        if path is None:
            ref = resources.files("essay_scorer.textproc") / "data" / WEIGHTS_RESOURCE
            raw = ref.read_text(encoding="utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                raw = fh.read()
        container = json.loads(raw)
        if container.get("format") != "pos-tagger-weights":
            raise ValueError("not a tagger weights file")
        payload = container["payload"]
        body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(body.encode()).hexdigest()
        if digest != container["sha256"]:
            raise ValueError("tagger weights checksum mismatch")
        model = AveragedPerceptron(payload["classes"], payload["weights"])
        return cls(model, payload["tagdict"])


_default_tagger: PerceptronTagger | None = None


def default_tagger() -> PerceptronTagger:
    global _default_tagger
    if _default_tagger is None:
        _default_tagger = PerceptronTagger.from_file()
    return _default_tagger


def pos_tag(tokens: list[Token]) -> TaggedSentence:
    """Tag a token list using the bundled frozen weights."""
    return default_tagger().tag_sentence(tokens)
