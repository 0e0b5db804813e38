"""Score scaling and quadratic weighted kappa.

Essay scores live on prompt-specific integer ranges (2-12, 0-60, ...).
Training happens in unit [0, 1] space; agreement between integer scores
is measured with quadratic weighted kappa (QWK).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PromptMeta:
    """Score range and genre for one essay set."""

    essay_set: int
    score_min: int
    score_max: int
    genre: str = ""

    def __post_init__(self):
        if self.score_min >= self.score_max:
            raise ValueError(
                f"essay set {self.essay_set}: score_min {self.score_min} "
                f"must be < score_max {self.score_max}"
            )

    @property
    def num_ratings(self) -> int:
        return self.score_max - self.score_min + 1


#: The eight ASAP essay sets: (score_min, score_max, genre).
ASAP_PROMPTS: dict[int, PromptMeta] = {
    1: PromptMeta(1, 2, 12, "ARG"),
    2: PromptMeta(2, 1, 6, "ARG"),
    3: PromptMeta(3, 0, 3, "RES"),
    4: PromptMeta(4, 0, 3, "RES"),
    5: PromptMeta(5, 0, 4, "RES"),
    6: PromptMeta(6, 0, 4, "RES"),
    7: PromptMeta(7, 0, 30, "NAR"),
    8: PromptMeta(8, 0, 60, "NAR"),
}


def scale_to_unit(score: int, meta: PromptMeta) -> float:
    """Map an integer score onto [0, 1] by its prompt's range."""
    if not meta.score_min <= score <= meta.score_max:
        raise ValueError(
            f"score {score} outside range [{meta.score_min}, {meta.score_max}] "
            f"for essay set {meta.essay_set}"
        )
    return (score - meta.score_min) / (meta.score_max - meta.score_min)


def rescale_from_unit(yhat: float, meta: PromptMeta) -> int:
    """Map a unit-space prediction back to an integer score.

    Rounds half away from zero, then clamps into the prompt's range.
    """
    raw = meta.score_min + yhat * (meta.score_max - meta.score_min)
    rounded = int(np.floor(raw + 0.5)) if raw >= 0 else int(np.ceil(raw - 0.5))
    return max(meta.score_min, min(meta.score_max, rounded))


def build_weight_matrix(num_ratings: int) -> np.ndarray:
    """Quadratic disagreement weights W[i, j] = (i - j)^2 / (R - 1)^2."""
    if num_ratings < 2:
        raise ValueError(f"need at least 2 ratings, got {num_ratings}")
    idx = np.arange(num_ratings)
    diff = idx[:, None] - idx[None, :]
    return diff.astype(float) ** 2 / (num_ratings - 1) ** 2


def quadratic_weighted_kappa(human, pred, meta: PromptMeta) -> float:
    """QWK between integer human scores and integer predictions.

    The observed matrix O counts (human, pred) pairs; the expected matrix
    is the outer product of the two score histograms, normalized to the
    same total as O.

    If both raters are constant and identical (the weighted expected sum
    is zero), perfect agreement is defined as kappa 1; any disagreement
    in that degenerate case is an error.
    """
    human = np.asarray(human, dtype=int)
    pred = np.asarray(pred, dtype=int)
    if human.shape != pred.shape or human.ndim != 1 or human.size == 0:
        raise ValueError("human and pred must be equal-length non-empty 1-d sequences")
    for name, arr in (("human", human), ("pred", pred)):
        if arr.min() < meta.score_min or arr.max() > meta.score_max:
            raise ValueError(f"{name} scores outside range for essay set {meta.essay_set}")

    num_ratings = meta.num_ratings
    h_idx = human - meta.score_min
    p_idx = pred - meta.score_min

    weights = build_weight_matrix(num_ratings)
    observed = np.zeros((num_ratings, num_ratings))
    np.add.at(observed, (h_idx, p_idx), 1.0)

    h_hist = np.bincount(h_idx, minlength=num_ratings).astype(float)
    p_hist = np.bincount(p_idx, minlength=num_ratings).astype(float)
    expected = np.outer(h_hist, p_hist)
    expected *= observed.sum() / expected.sum()

    denom = float((weights * expected).sum())
    numer = float((weights * observed).sum())
    if denom == 0.0:
        if numer == 0.0:
            return 1.0
        raise ValueError("degenerate QWK: constant raters with disagreement")
    return 1.0 - numer / denom
