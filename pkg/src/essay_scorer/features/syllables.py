"""Vowel-group syllable counting heuristic."""

_VOWELS = set("aeiouy")


def count_syllables(word: str) -> int:
    """Count syllables: consecutive vowels form one group, a trailing
    silent 'e' is dropped (kept for '-le' endings), minimum 1."""
    letters = "".join(c for c in word.lower() if c.isalpha())
    if not letters:
        return 0
    if letters.endswith("e") and not letters.endswith("le"):
        letters = letters[:-1]
    groups = 0
    in_group = False
    for ch in letters:
        if ch in _VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return max(groups, 1)
