"""ASAP-style dataset ingestion and summary statistics.

The public training file is tab-separated and is not valid UTF-8; rows
decode as Windows-1252 with invalid bytes replaced.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

from .metrics import ASAP_PROMPTS, PromptMeta

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("essay_id", "essay_set", "essay", "domain1_score")


@dataclass
class Essay:
    essay_id: int
    essay_set: int
    text: str
    score: int
    sentences: list = field(default_factory=list, repr=False)
    tensor: object = None
    features: object = None


@dataclass
class Dataset:
    essays: list[Essay]
    metas: dict[int, PromptMeta]

    def by_set(self) -> dict[int, list[Essay]]:
        grouped: dict[int, list[Essay]] = {}
        for essay in self.essays:
            grouped.setdefault(essay.essay_set, []).append(essay)
        return grouped


def load_dataset(path, metas: dict[int, PromptMeta] | None = None) -> Dataset:
    """Parse the ASAP TSV.  Essays with a missing gold score are skipped
    with a warning; malformed rows and out-of-range values are errors."""
    metas = metas or ASAP_PROMPTS
    essays: list[Essay] = []
    seen_ids: set[int] = set()
    with open(path, encoding="cp1252", errors="replace", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        for rownum, row in enumerate(reader, 2):
            try:
                essay_id = int(row["essay_id"])
                essay_set = int(row["essay_set"])
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{rownum}: malformed row: {exc}") from exc
            if essay_set not in metas:
                raise ValueError(
                    f"{path}:{rownum}: essay_id {essay_id} has unknown "
                    f"essay_set {essay_set}"
                )
            raw_score = (row.get("domain1_score") or "").strip()
            if not raw_score:
                log.warning("essay %d (row %d): missing gold score, skipped",
                            essay_id, rownum)
                continue
            score = int(float(raw_score))
            meta = metas[essay_set]
            if not meta.score_min <= score <= meta.score_max:
                raise ValueError(
                    f"{path}:{rownum}: score {score} out of range for set {essay_set}"
                )
            if essay_id in seen_ids:
                raise ValueError(f"{path}:{rownum}: duplicate essay_id {essay_id}")
            seen_ids.add(essay_id)
            essays.append(Essay(essay_id, essay_set, row["essay"] or "", score))
    if not essays:
        raise ValueError(f"{path}: no essays")
    return Dataset(essays=essays, metas=dict(metas))


def dataset_stats(dataset: Dataset) -> list[dict]:
    """Per-set summary: count, mean word-ish length, and how many essays
    got exactly the minimum / maximum score."""
    rows = []
    for essay_set in sorted(dataset.by_set()):
        group = dataset.by_set()[essay_set]
        meta = dataset.metas[essay_set]
        lengths = [len(e.text.split()) for e in group]
        rows.append(
            {
                "essay_set": essay_set,
                "count": len(group),
                "genre": meta.genre,
                "mean_length": sum(lengths) / len(group),
                "score_range": f"{meta.score_min}-{meta.score_max}",
                "min_score_count": sum(e.score == meta.score_min for e in group),
                "max_score_count": sum(e.score == meta.score_max for e in group),
            }
        )
    return rows
