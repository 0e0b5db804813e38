"""Binding end-to-end acceptance suite.

Each criterion prints one PASS/FAIL line directly to the terminal (past
pytest's capture) so the result survives in piped logs.  Criteria that
need the public ASAP training file skip unless it is available; point
ASAP_DATA at the TSV (default: data/training_set_rel3.tsv).  The full
multi-hour reproduction run additionally requires RUN_FULL_REPRO=1.
"""

import dataclasses
import os
import time
from pathlib import Path

import numpy as np
import pytest

from essay_scorer import EssayScorer
from essay_scorer.cv import (
    RunConfig,
    make_folds,
    run_cross_validation,
    train_fold,
)
from essay_scorer.data import dataset_stats, load_dataset
from essay_scorer.features.normalize import apply_normalization, fit_normalization
from essay_scorer.features.registry import DEFAULT_REGISTRY, assemble
from essay_scorer.metrics import (
    ASAP_PROMPTS,
    PromptMeta,
    quadratic_weighted_kappa,
    rescale_from_unit,
    scale_to_unit,
)
from essay_scorer.model import ModelConfig, forward, init_params
from essay_scorer.model.checkpoint import load_checkpoint, save_checkpoint
from essay_scorer.model.network import _attention_pool
from essay_scorer.textproc import preprocess
from essay_scorer.textproc.vocab import EssayTensor

from conftest import (
    BAD_TEXT,
    FIXTURE_ESSAYS,
    GOOD_TEXT,
    make_synthetic_dataset,
)
from test_metrics import qwk_oracle
from test_network import TINY, finite_difference_check, make_tensor

ASAP_PATH = Path(os.environ.get("ASAP_DATA", "data/training_set_rel3.tsv"))

needs_asap = pytest.mark.skipif(
    not ASAP_PATH.exists(),
    reason=f"ASAP training file not found at {ASAP_PATH} (set ASAP_DATA)",
)


def _report(capsys, num, desc, body):
    start = time.monotonic()
    try:
        body()
    except BaseException:
        with capsys.disabled():
            print(f"\ncriterion {num}: FAIL - {desc}")
        raise
    elapsed = time.monotonic() - start
    with capsys.disabled():
        print(f"\ncriterion {num}: PASS - {desc} ({elapsed:.1f}s)")


def test_criterion_1_qwk_oracle_equivalence(capsys):
    def body():
        start = time.monotonic()
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(1, 51))
            r = int(rng.integers(2, 11))
            lo = int(rng.integers(-3, 4))
            meta = PromptMeta(0, lo, lo + r - 1)
            human = rng.integers(lo, lo + r, size=n).tolist()
            pred = rng.integers(lo, lo + r, size=n).tolist()
            ours = quadratic_weighted_kappa(human, pred, meta)
            assert abs(ours - qwk_oracle(human, pred, meta)) <= 1e-9
        hand = quadratic_weighted_kappa(
            [0, 1, 2, 2], [0, 1, 1, 2], PromptMeta(0, 0, 2)
        )
        assert hand == 0.8
        assert time.monotonic() - start < 5.0

    _report(capsys, 1, "QWK matches independent oracle on 1000 random "
            "instances within 1e-9; hand case K=0.8 exact; <5s", body)


def test_criterion_2_gradient_correctness(capsys):
    def body():
        start = time.monotonic()
        tensor = make_tensor(2, 4, [4, 4], rng=np.random.default_rng(21))
        feats = np.random.default_rng(22).random(6)
        # parameters drawn at a larger scale than the training init so no
        # group's gradient is small enough to drown in finite-difference noise
        params = init_params(TINY, seed=23)
        prng = np.random.default_rng(24)
        for arr in params.as_dict().values():
            arr[...] = prng.normal(0.0, 0.5, size=arr.shape)
        params.emb[0] = 0.0
        errors = finite_difference_check(TINY, tensor, feats, y=0.35,
                                         h=1e-5, params=params)
        for name, err in errors.items():
            assert err < 1e-4, f"{name}: relative error {err}"
        assert time.monotonic() - start < 30.0

    _report(capsys, 2, "reverse-mode gradients match central finite "
            "differences (h=1e-5) per parameter group within 1e-4; <30s", body)


def test_criterion_3_forward_oracle(capsys):
    def body():
        cfg = ModelConfig(vocab_size=6, emb_dim=3, filters=2, window=3,
                          hidden=2, n_features=3)
        params = init_params(cfg, seed=31)
        idx = np.zeros((2, 3), dtype=np.int64)
        idx[0, :3] = [2, 4, 5]
        idx[1, :2] = [3, 2]
        mask = np.zeros((2, 3), dtype=bool)
        mask[0, :3] = True
        mask[1, :2] = True
        tensor = EssayTensor(idx, mask, 2)
        feats = np.array([0.1, 0.6, 0.9])
        yhat, _ = forward(tensor, feats, params, cfg)

        def sig(v):
            return 1 / (1 + np.exp(-v))

        def sent(ids):
            x = params.emb[ids]
            xp = np.vstack([np.zeros((1, 3)), x, np.zeros((1, 3))])
            z = np.array([
                np.maximum(params.conv_w @ xp[j : j + 3].ravel()
                           + params.conv_b, 0)
                for j in range(len(ids))
            ])
            m = np.tanh(z @ params.wattn_w.T + params.wattn_b)
            sc = m @ params.wattn_v
            ex = np.exp(sc - sc.max())
            return (ex / ex.sum()) @ z

        inputs = [sent([2, 4, 5]), sent([3, 2])]
        h_prev = np.zeros(2)
        c_prev = np.zeros(2)
        hs = []
        for s in inputs:
            i = sig(params.lstm_wi @ s + params.lstm_ui @ h_prev + params.lstm_bi)
            f = sig(params.lstm_wf @ s + params.lstm_uf @ h_prev + params.lstm_bf)
            cb = np.tanh(params.lstm_wc @ s + params.lstm_uc @ h_prev + params.lstm_bc)
            c = i * cb + f * c_prev
            og = sig(params.lstm_wo @ s + params.lstm_uo @ h_prev + params.lstm_bo)
            h_prev = og * np.tanh(c)
            c_prev = c
            hs.append(h_prev)
        hmat = np.array(hs)
        a = np.tanh(hmat @ params.sattn_w.T + params.sattn_b)
        sc = a @ params.sattn_v
        ex = np.exp(sc - sc.max())
        o = (ex / ex.sum()) @ hmat
        e = np.concatenate([o, feats])
        expected = float(sig(params.out_w @ e + params.out_b))
        assert abs(yhat - expected) <= 1e-12

    _report(capsys, 3, "hand-specified micro-network forward pass matches "
            "straight-line reference within 1e-12", body)


def test_criterion_4_attention_invariants(capsys):
    def body():
        rng = np.random.default_rng(44)
        for _ in range(10_000):
            n_total = int(rng.integers(1, 10))
            n_valid = int(rng.integers(1, n_total + 1))
            d = int(rng.integers(1, 5))
            equal_case = rng.random() < 0.1
            if equal_case:
                vectors = np.tile(rng.normal(size=d), (n_valid, 1))
            else:
                vectors = rng.normal(size=(n_valid, d))
            _, u, _ = _attention_pool(
                vectors, rng.normal(size=(d, d)), rng.normal(size=d),
                rng.normal(size=d),
            )
            full = np.zeros(n_total)
            full[:n_valid] = u  # masked tail never receives weight
            assert abs(full.sum() - 1.0) <= 1e-6
            assert (full[n_valid:] == 0).all()
            assert (full[:n_valid] >= 0).all()
            if equal_case:
                np.testing.assert_allclose(u, 1.0 / n_valid, atol=1e-9)

    _report(capsys, 4, "attention weights on 10000 random masked inputs sum "
            "to 1 +/- 1e-6, vanish off-mask, uniform on equal inputs", body)


def test_criterion_5_overfit_sanity(capsys):
    def body():
        start = time.monotonic()
        rng = np.random.default_rng(55)
        X, y = [], []
        for k in range(32):
            high = k % 2 == 0
            filler = " ".join(rng.choice(["today", "truly", "often"], size=3))
            X.append((GOOD_TEXT if high else BAD_TEXT) + f" Item {k} {filler}.")
            y.append(12 if high else 2)
        est = EssayScorer(epochs=200, dropout=0.0, seed=5)
        est.fit(X, y)
        assert min(est.loss_history_) < 0.01, min(est.loss_history_)
        assert time.monotonic() - start < 120.0

    _report(capsys, 5, "32 essays, dropout off, <=200 epochs reach training "
            "MSE < 0.01 in unit-score space; <2min", body)


def test_criterion_6_feature_contract(capsys):
    def body():
        import json

        golden = json.loads(
            (Path(__file__).parent / "data" / "feature_golden.json").read_text()
        )
        vectors = []
        for text, entry in zip(FIXTURE_ESSAYS, golden):
            assert entry["text"] == text
            expected = entry["values"]
            sentences = preprocess(text)
            vec = assemble(sentences, essay_set=1)
            assert vec.values.shape == (86,)
            assert np.isfinite(vec.values).all()
            np.testing.assert_allclose(vec.values, expected, atol=1e-12)
            names = DEFAULT_REGISTRY.feature_names
            tag_block = vec.values[[i for i, n in enumerate(names)
                                    if n.startswith("tag_freq_")]]
            if sentences:
                assert tag_block.sum() == pytest.approx(1.0, abs=1e-9)
            vectors.append(vec)
        stats = fit_normalization(vectors)
        for vec in vectors:
            norm = apply_normalization(vec, stats).values
            assert (norm >= 0.0).all() and (norm <= 1.0).all()

    _report(capsys, 6, "every essay yields exactly 86 finite features; "
            "normalized values in [0,1]; tag block sums to 1; golden file "
            "pinned", body)


def test_criterion_7_round_trip_exactness(capsys):
    def body():
        for meta in ASAP_PROMPTS.values():
            for score in range(meta.score_min, meta.score_max + 1):
                assert rescale_from_unit(scale_to_unit(score, meta), meta) == score

        dataset = make_synthetic_dataset(per_set=4)
        config = RunConfig(epochs=2, seed=77)
        plan = make_folds(dataset, config)[0]
        artifacts, _ = train_fold(plan, config, dataset.metas)
        path = Path("/tmp/acceptance_roundtrip.npz")
        try:
            save_checkpoint(path, artifacts["params"], artifacts["model_config"],
                            artifacts["vocab"], artifacts["norm_stats"])
            params, model_cfg, _, _, _ = load_checkpoint(path)
            for essay in plan.test:
                before, _ = forward(essay.tensor,
                                    artifacts["features"][essay.essay_id],
                                    artifacts["params"],
                                    artifacts["model_config"])
                after, _ = forward(essay.tensor,
                                   artifacts["features"][essay.essay_id],
                                   params, model_cfg)
                assert before == after  # bit-for-bit
        finally:
            path.unlink(missing_ok=True)

    _report(capsys, 7, "unit-scale round trip is the identity on all eight "
            "score ranges; checkpoint reload reproduces evaluation "
            "bit-for-bit", body)


def test_criterion_8_determinism(capsys):
    def body():
        dataset = make_synthetic_dataset(per_set=4)
        config = RunConfig(epochs=2, seed=88)
        plan = make_folds(dataset, config)[0]
        arts_a, res_a = train_fold(plan, config, dataset.metas)
        arts_b, res_b = train_fold(plan, config, dataset.metas)
        assert res_a.test_qwk == res_b.test_qwk
        for name, arr in arts_a["params"].as_dict().items():
            np.testing.assert_array_equal(arr, arts_b["params"].as_dict()[name])

    _report(capsys, 8, "identical config and seed give identical trained "
            "parameters and identical QWK", body)


@needs_asap
def test_criterion_9_asap_dataset_stats(capsys):
    def body():
        rows = dataset_stats(load_dataset(ASAP_PATH))
        counts = [r["count"] for r in rows]
        assert counts == [1783, 1800, 1726, 1772, 1805, 1800, 1569, 723]
        by_set = {r["essay_set"]: r for r in rows}
        assert by_set[7]["min_score_count"] == 0
        assert by_set[7]["max_score_count"] == 0
        assert by_set[8]["max_score_count"] == 1

    _report(capsys, 9, "ASAP per-set counts and extreme-score counts match "
            "the published statistics", body)


@needs_asap
@pytest.mark.skipif(os.environ.get("RUN_FULL_REPRO") != "1",
                    reason="multi-hour run; set RUN_FULL_REPRO=1 to enable")
def test_criterion_10_full_reproduction(capsys):
    def body():
        dataset = load_dataset(ASAP_PATH)
        config = RunConfig()
        _, average = run_cross_validation(dataset, config)
        assert average >= 0.60, average

        fractions = [0.1, 0.25, 0.5, 1.0]
        curve = []
        for frac in fractions:
            _, avg = run_cross_validation(
                dataset, dataclasses.replace(config, subsample=frac)
            )
            curve.append(avg)
        for lo, hi in zip(curve, curve[1:]):
            assert hi >= lo - 0.02, curve

    _report(capsys, 10, "full 8-fold average QWK >= 0.60 and the "
            "subsample curve is non-decreasing within 0.02", body)
