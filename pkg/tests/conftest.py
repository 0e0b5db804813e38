import numpy as np
import pytest

from essay_scorer.data import Dataset, Essay
from essay_scorer.metrics import ASAP_PROMPTS
from essay_scorer.textproc import preprocess

GOOD_TEXT = (
    "Computers help people learn because they provide wonderful access to "
    "excellent information. Students enjoy reading and writing every day. "
    "I believe this is a great benefit for everyone, and schools should "
    "invest in modern technology."
)
BAD_TEXT = "i dont like it. it bad. no good. it was terrible and boring."

FIXTURE_ESSAYS = [
    "",
    "The cat sat.",
    "I don't think computers are necessary. @PERSON1 disagrees strongly!",
    GOOD_TEXT,
    BAD_TEXT,
]


@pytest.fixture(scope="session")
def fixture_sentences():
    return [preprocess(text) for text in FIXTURE_ESSAYS]


def make_synthetic_dataset(per_set=8, seed=0) -> Dataset:
    """Separable toy data: good/bad texts with extreme scores."""
    rng = np.random.default_rng(seed)
    essays = []
    eid = 0
    for essay_set in range(1, 9):
        meta = ASAP_PROMPTS[essay_set]
        for k in range(per_set):
            high = k % 2 == 0
            filler = " ".join(rng.choice(["also", "very", "truly"], size=2))
            text = (GOOD_TEXT if high else BAD_TEXT) + f" Essay number {k} {filler}."
            score = meta.score_max if high else meta.score_min
            essays.append(Essay(eid, essay_set, text, score))
            eid += 1
    return Dataset(essays=essays, metas=dict(ASAP_PROMPTS))


@pytest.fixture(scope="session")
def synthetic_dataset():
    return make_synthetic_dataset()


def write_synthetic_tsv(path, dataset: Dataset):
    with open(path, "w", encoding="cp1252") as fh:
        fh.write("essay_id\tessay_set\tessay\tdomain1_score\n")
        for e in dataset.essays:
            fh.write(f"{e.essay_id}\t{e.essay_set}\t{e.text}\t{e.score}\n")
    return path
