"""Scikit-learn style estimator facade over the training pipeline.

EssayScorer exposes fit/predict plus get_params/set_params, so the
scorer composes with sklearn tooling.  X is a sequence of raw essay
texts; an ``essay_set`` array assigns each text to a prompt whose score
range and normalization group it belongs to.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .cv import (
    RunConfig,
    build_vocab,
    encode_essays,
    mean_promptwise_qwk,
    predict_scores,
)
from .data import Essay
from .features import (
    DEFAULT_REGISTRY,
    apply_normalization,
    assemble,
    fit_normalization,
)
from .metrics import ASAP_PROMPTS, quadratic_weighted_kappa, scale_to_unit
from .model import (
    ModelConfig,
    RmspropState,
    backward,
    forward,
    init_params,
    mse_loss,
    rmsprop_step,
)
from .textproc import preprocess


class EssayScorer(BaseEstimator, RegressorMixin):
    """Cross-prompt essay scorer: POS-embedding attention network plus
    prompt-agnostic features.

    Parameters mirror RunConfig; see that class for semantics.  The
    estimator trains on whatever essays are passed to ``fit`` (no
    internal fold logic) and predicts integer scores on each essay's own
    prompt scale.
    """

    def __init__(self, mode="pos", use_features=True, seed=42, batch_size=16,
                 epochs=30, max_sentences=100, max_tokens=50,
                 learning_rate=0.001, dropout=0.5, clip_norm=0.0):
        self.mode = mode
        self.use_features = use_features
        self.seed = seed
        self.batch_size = batch_size
        self.epochs = epochs
        self.max_sentences = max_sentences
        self.max_tokens = max_tokens
        self.learning_rate = learning_rate
        self.dropout = dropout
        self.clip_norm = clip_norm

    def _run_config(self) -> RunConfig:
        return RunConfig(
            mode=self.mode, use_features=self.use_features, seed=self.seed,
            batch_size=self.batch_size, epochs=self.epochs,
            max_sentences=self.max_sentences, max_tokens=self.max_tokens,
            learning_rate=self.learning_rate, dropout=self.dropout,
            clip_norm=self.clip_norm,
        )

    def _make_essays(self, X, essay_set, y=None) -> list[Essay]:
        essay_set = np.asarray(essay_set)
        if len(essay_set) != len(X):
            raise ValueError("X and essay_set must have equal length")
        essays = []
        for i, text in enumerate(X):
            score = int(y[i]) if y is not None else 0
            essay = Essay(essay_id=i, essay_set=int(essay_set[i]),
                          text=str(text), score=score)
            essay.sentences = preprocess(essay.text)
            essays.append(essay)
        return essays

    def _featurize(self, essays, stats=None):
        if not self.use_features:
            return {e.essay_id: np.zeros(0) for e in essays}, None
        raw = [assemble(e.sentences, e.essay_set) for e in essays]
        if stats is None:
            stats = fit_normalization(raw)
        return {
            e.essay_id: apply_normalization(v, stats).values
            for e, v in zip(essays, raw)
        }, stats

    def fit(self, X, y, essay_set=None):
        """Train on raw texts X with integer gold scores y.

        essay_set defaults to prompt 1 for every essay.
        """
        if essay_set is None:
            essay_set = np.ones(len(X), dtype=int)
        config = self._run_config()
        essays = self._make_essays(X, essay_set, y)
        self.vocab_ = build_vocab(essays, config)
        encode_essays(essays, self.vocab_, config)
        feats, self.norm_stats_ = self._featurize(essays)

        self.model_config_ = ModelConfig(
            vocab_size=len(self.vocab_),
            n_features=DEFAULT_REGISTRY.total_dim if self.use_features else 0,
            dropout=self.dropout,
        )
        params = init_params(self.model_config_, self.seed)
        opt = RmspropState.for_params(params, learning_rate=self.learning_rate)
        shuffle_rng = np.random.default_rng([self.seed, 1])
        dropout_rng = np.random.default_rng([self.seed, 2])
        targets = {
            e.essay_id: scale_to_unit(e.score, ASAP_PROMPTS[e.essay_set])
            for e in essays
        }

        self.loss_history_ = []
        for _ in range(self.epochs):
            order = shuffle_rng.permutation(len(essays))
            epoch_losses = []
            for start in range(0, len(order), self.batch_size):
                batch = [essays[i] for i in order[start : start + self.batch_size]]
                grads = params.zeros_like()
                preds, golds, traces = [], [], []
                for essay in batch:
                    yhat, trace = forward(
                        essay.tensor, feats[essay.essay_id], params,
                        self.model_config_,
                        dropout_rng=dropout_rng if self.dropout > 0 else None,
                    )
                    preds.append(yhat)
                    golds.append(targets[essay.essay_id])
                    traces.append(trace)
                loss = mse_loss(golds, preds)
                if not np.isfinite(loss):
                    raise FloatingPointError("non-finite training loss")
                epoch_losses.append(loss)
                for yhat, gold, trace in zip(preds, golds, traces):
                    backward(trace, 2.0 * (yhat - gold) / len(batch), params,
                             self.model_config_, grads)
                rmsprop_step(params, grads, opt)
            self.loss_history_.append(float(np.mean(epoch_losses)))
        self.params_ = params
        return self

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError("EssayScorer is not fitted yet")

    def predict(self, X, essay_set=None):
        """Integer score predictions on each essay's own prompt scale."""
        self._check_fitted()
        if essay_set is None:
            essay_set = np.ones(len(X), dtype=int)
        config = self._run_config()
        essays = self._make_essays(X, essay_set)
        encode_essays(essays, self.vocab_, config)
        feats, _ = self._featurize(essays, stats=self.norm_stats_)
        scores = predict_scores(essays, feats, self.params_,
                                self.model_config_, ASAP_PROMPTS)
        return np.asarray(scores, dtype=int)

    def score(self, X, y, essay_set=None):
        """Mean per-prompt quadratic weighted kappa."""
        self._check_fitted()
        if essay_set is None:
            essay_set = np.ones(len(X), dtype=int)
        pred = self.predict(X, essay_set)
        essays = [
            Essay(i, int(s), "", int(gold))
            for i, (s, gold) in enumerate(zip(np.asarray(essay_set), y))
        ]
        return mean_promptwise_qwk(essays, list(pred), ASAP_PROMPTS)
