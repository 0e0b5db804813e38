"""Prompt-wise cross-validation: fold planning, training, evaluation.

Each fold holds one prompt's essays out entirely for testing and trains
on the remaining prompts, with a stratified 20% dev split for epoch
selection by dev QWK.  Target-prompt essays never contribute to
parameter updates; a subsample fraction controls only how many target
essays are visible for fitting the test-time normalization stats.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, Essay
from .features import (
    DEFAULT_REGISTRY,
    apply_normalization,
    assemble,
    fit_normalization,
)
from .metrics import PromptMeta, quadratic_weighted_kappa, rescale_from_unit, scale_to_unit
from .model import (
    ModelConfig,
    RmspropState,
    backward,
    clip_gradients,
    forward,
    init_params,
    mse_loss,
    rmsprop_step,
)
from .textproc import Vocabulary, encode_indices, preprocess
from .textproc.vocab import EssayTensor

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Everything that determines one training run."""

    mode: str = "pos"            # pos | word | none (features-only)
    use_features: bool = True
    seed: int = 42
    batch_size: int = 16
    epochs: int = 60
    max_sentences: int = 100
    max_tokens: int = 50
    min_word_freq: int = 2
    subsample: float = 1.0
    learning_rate: float = 0.001
    dropout: float = 0.5
    clip_norm: float = 0.0       # 0 disables clipping
    dev_fraction: float = 0.2

    def __post_init__(self):
        if self.mode not in ("pos", "word", "none"):
            raise ValueError(f"mode must be pos, word or none, got {self.mode!r}")
        if not 0.0 < self.subsample <= 1.0:
            raise ValueError("subsample fraction must be in (0, 1]")
        if self.mode == "none" and not self.use_features:
            raise ValueError("mode 'none' with features off leaves no model inputs")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FoldPlan:
    target_prompt: int
    train: list[Essay]
    dev: list[Essay]
    test: list[Essay]


@dataclass
class FoldResult:
    target_prompt: int
    dev_qwk_history: list[float]
    selected_epoch: int
    test_qwk: float
    seconds: float
    train_example_counts: dict[int, int] = field(default_factory=dict)
    predictions: list[tuple[int, int, int]] = field(default_factory=list)


def make_folds(dataset: Dataset, config: RunConfig) -> list[FoldPlan]:
    """One plan per prompt; dev is a seeded, per-source-prompt stratified
    slice of the non-target essays."""
    by_set = dataset.by_set()
    plans = []
    for target in sorted(by_set):
        rng = np.random.default_rng([config.seed, target])
        train: list[Essay] = []
        dev: list[Essay] = []
        for source in sorted(by_set):
            if source == target:
                continue
            group = list(by_set[source])
            order = rng.permutation(len(group))
            n_dev = int(round(config.dev_fraction * len(group)))
            dev.extend(group[i] for i in order[:n_dev])
            train.extend(group[i] for i in order[n_dev:])
        plans.append(FoldPlan(target, train, dev, list(by_set[target])))
    return plans


def _ensure_preprocessed(essays: list[Essay]) -> None:
    for essay in essays:
        if not essay.sentences and essay.text.strip():
            essay.sentences = preprocess(essay.text)


def _empty_tensor(config: RunConfig) -> EssayTensor:
    shape = (config.max_sentences, config.max_tokens)
    return EssayTensor(
        indices=np.zeros(shape, dtype=np.int64),
        mask=np.zeros(shape, dtype=bool),
        num_sentences=0,
    )


def build_vocab(train_essays: list[Essay], config: RunConfig) -> Vocabulary:
    if config.mode == "word":
        return Vocabulary.from_words(
            (e.sentences for e in train_essays), min_freq=config.min_word_freq
        )
    return Vocabulary.for_tags()


def encode_essays(essays: list[Essay], vocab: Vocabulary, config: RunConfig) -> None:
    for essay in essays:
        if config.mode == "none":
            essay.tensor = _empty_tensor(config)
        else:
            essay.tensor = encode_indices(
                essay.sentences, vocab, mode=config.mode,
                max_sentences=config.max_sentences, max_tokens=config.max_tokens,
            )


def compute_features(plan: FoldPlan, config: RunConfig):
    """Raw extraction plus set-wise normalization.

    Non-target sets normalize over all their (train + dev) essays.
    The target set normalizes over a seeded subsample of its essays,
    never over training data.  Returns (features by essay_id, the merged
    per-set stats actually applied).
    """
    if not config.use_features:
        empty = np.zeros(0)
        feats = {e.essay_id: empty for e in plan.train + plan.dev + plan.test}
        return feats, None
    raw = {
        e.essay_id: assemble(e.sentences, e.essay_set)
        for e in plan.train + plan.dev + plan.test
    }
    stats = fit_normalization([raw[e.essay_id] for e in plan.train + plan.dev])
    rng = np.random.default_rng([config.seed, plan.target_prompt, 7])
    n_sample = max(1, int(round(config.subsample * len(plan.test))))
    sample_idx = rng.choice(len(plan.test), size=n_sample, replace=False)
    target_stats = fit_normalization(
        [raw[plan.test[i].essay_id] for i in sample_idx]
    )
    stats.minima[plan.target_prompt] = target_stats.minima[plan.target_prompt]
    stats.maxima[plan.target_prompt] = target_stats.maxima[plan.target_prompt]
    out = {
        e.essay_id: apply_normalization(raw[e.essay_id], stats).values
        for e in plan.train + plan.dev + plan.test
    }
    return out, stats


def predict_unit(essays, feats, params, model_cfg):
    """Deterministic (dropout-off) unit-space predictions."""
    return [
        forward(e.tensor, feats[e.essay_id], params, model_cfg)[0] for e in essays
    ]


def predict_scores(essays, feats, params, model_cfg, metas) -> list[int]:
    unit = predict_unit(essays, feats, params, model_cfg)
    return [
        rescale_from_unit(y, metas[e.essay_set]) for e, y in zip(essays, unit)
    ]


def mean_promptwise_qwk(essays, predictions, metas) -> float:
    """Mean of per-prompt QWKs; essays may span several score ranges."""
    by_set: dict[int, tuple[list[int], list[int]]] = {}
    for essay, pred in zip(essays, predictions):
        gold, hyp = by_set.setdefault(essay.essay_set, ([], []))
        gold.append(essay.score)
        hyp.append(pred)
    kappas = [
        quadratic_weighted_kappa(gold, hyp, metas[s])
        for s, (gold, hyp) in sorted(by_set.items())
    ]
    return float(np.mean(kappas))


class FoldTrainer:
    """Trains one fold and selects the best-dev-QWK epoch."""

    def __init__(self, plan: FoldPlan, config: RunConfig,
                 metas: dict[int, PromptMeta]):
        self.plan = plan
        self.config = config
        self.metas = metas

    def run(self):
        plan, config = self.plan, self.config
        start = time.monotonic()
        _ensure_preprocessed(plan.train + plan.dev + plan.test)
        vocab = build_vocab(plan.train, config)
        encode_essays(plan.train + plan.dev + plan.test, vocab, config)
        feats, norm_stats = compute_features(plan, config)

        model_cfg = ModelConfig(
            vocab_size=len(vocab),
            n_features=DEFAULT_REGISTRY.total_dim if config.use_features else 0,
            dropout=config.dropout,
        )
        params = init_params(model_cfg, config.seed)
        opt = RmspropState.for_params(params, learning_rate=config.learning_rate)
        shuffle_rng = np.random.default_rng([config.seed, plan.target_prompt, 1])
        dropout_rng = np.random.default_rng([config.seed, plan.target_prompt, 2])

        targets = {
            e.essay_id: scale_to_unit(e.score, self.metas[e.essay_set])
            for e in plan.train + plan.dev + plan.test
        }
        train_counts: dict[int, int] = {}
        for essay in plan.train:
            train_counts[essay.essay_set] = train_counts.get(essay.essay_set, 0) + 1

        best_qwk = -np.inf
        best_epoch = -1
        best_params = params.copy()
        history: list[float] = []

        for epoch in range(config.epochs):
            order = shuffle_rng.permutation(len(plan.train))
            for batch_start in range(0, len(order), config.batch_size):
                batch = [plan.train[i] for i in order[batch_start : batch_start + config.batch_size]]
                self._step(batch, feats, targets, params, model_cfg, opt,
                           dropout_rng, epoch, batch_start)

            dev_pred = predict_scores(plan.dev, feats, params, model_cfg, self.metas)
            dev_qwk = mean_promptwise_qwk(plan.dev, dev_pred, self.metas)
            history.append(dev_qwk)
            if dev_qwk > best_qwk:
                best_qwk = dev_qwk
                best_epoch = epoch + 1  # epochs are reported 1-based
                best_params = params.copy()
            log.info("fold %d epoch %d: dev QWK %.4f",
                     plan.target_prompt, epoch + 1, dev_qwk)

        test_pred = predict_scores(plan.test, feats, best_params, model_cfg, self.metas)
        test_qwk = quadratic_weighted_kappa(
            [e.score for e in plan.test], test_pred, self.metas[plan.target_prompt]
        )
        result = FoldResult(
            target_prompt=plan.target_prompt,
            dev_qwk_history=history,
            selected_epoch=best_epoch,
            test_qwk=float(test_qwk),
            seconds=time.monotonic() - start,
            train_example_counts=train_counts,
            predictions=[
                (e.essay_id, e.score, p) for e, p in zip(plan.test, test_pred)
            ],
        )
        artifacts = {
            "params": best_params,
            "model_config": model_cfg,
            "vocab": vocab,
            "features": feats,
            "norm_stats": norm_stats,
        }
        return artifacts, result

    def _step(self, batch, feats, targets, params, model_cfg, opt,
              dropout_rng, epoch, batch_start):
        grads = params.zeros_like()
        n = len(batch)
        preds = []
        golds = []
        traces = []
        for essay in batch:
            yhat, trace = forward(
                essay.tensor, feats[essay.essay_id], params, model_cfg,
                dropout_rng=dropout_rng,
            )
            preds.append(yhat)
            golds.append(targets[essay.essay_id])
            traces.append(trace)
        loss = mse_loss(golds, preds)
        if not np.isfinite(loss):
            raise FloatingPointError(
                f"non-finite loss at epoch {epoch}, batch offset {batch_start} "
                f"(fold {self.plan.target_prompt})"
            )
        for yhat, gold, trace in zip(preds, golds, traces):
            backward(trace, 2.0 * (yhat - gold) / n, params, model_cfg, grads)
        if self.config.clip_norm > 0:
            clip_gradients(grads, self.config.clip_norm)
        rmsprop_step(params, grads, opt)


def train_fold(plan: FoldPlan, config: RunConfig, metas: dict[int, PromptMeta]):
    return FoldTrainer(plan, config, metas).run()


def run_cross_validation(dataset: Dataset, config: RunConfig):
    """Train every fold; returns (results, average QWK)."""
    plans = make_folds(dataset, config)
    results = []
    for plan in plans:
        _, result = train_fold(plan, config, dataset.metas)
        log.info("fold %d: test QWK %.4f (epoch %d)",
                 plan.target_prompt, result.test_qwk, result.selected_epoch)
        results.append(result)
    average = float(np.mean([r.test_qwk for r in results]))
    return results, average


def format_results_table(results: list[FoldResult], average: float) -> str:
    header = ["prompt"] + [str(r.target_prompt) for r in results] + ["avg"]
    values = ["qwk"] + [f"{r.test_qwk:.3f}" for r in results] + [f"{average:.3f}"]
    widths = [max(len(a), len(b)) for a, b in zip(header, values)]
    line1 = "  ".join(h.rjust(w) for h, w in zip(header, widths))
    line2 = "  ".join(v.rjust(w) for v, w in zip(values, widths))
    return line1 + "\n" + line2
