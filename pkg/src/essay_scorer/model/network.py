"""Forward and reverse-mode passes of the scoring network.

Pipeline per essay: embedding lookup -> per-sentence 1D convolution with
ReLU -> attention pooling over tokens -> LSTM over sentence vectors ->
attention pooling over hidden states -> dropout -> concatenation with
the feature vector -> sigmoid score.

All arithmetic is float64.  Gradients are hand-derived reverse-mode and
validated against central finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..textproc.vocab import PAD_INDEX, EssayTensor
from .params import ModelConfig, ModelParams


def _sigmoid(x):
    # piecewise form avoids overflow in exp for large negative inputs
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _masked_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


@dataclass
class SentenceTrace:
    idx: np.ndarray       # valid token indices [n]
    x: np.ndarray         # embeddings [n, E]
    windows: np.ndarray   # conv input windows [n, window*E]
    z: np.ndarray         # ReLU conv output [n, F]
    relu_mask: np.ndarray
    m: np.ndarray         # attention transforms [n, F]
    u: np.ndarray         # attention weights [n]
    s: np.ndarray         # pooled sentence vector [F]


@dataclass
class ForwardTrace:
    sentences: list[SentenceTrace]
    lstm: dict = field(default_factory=dict)
    alpha: np.ndarray | None = None    # sentence attention weights [T]
    a: np.ndarray | None = None        # sentence attention transforms [T, H]
    o: np.ndarray | None = None        # essay representation [H]
    dropout_mask: np.ndarray | None = None
    e: np.ndarray | None = None        # [H + n_features]
    yhat: float = 0.0


def _attention_pool(vectors, weight, bias, gate):
    """Eqs of form m=tanh(Wv+b), w=softmax(u.m), out=sum w v."""
    m = np.tanh(vectors @ weight.T + bias)
    u = _masked_softmax(m @ gate)
    pooled = u @ vectors
    return m, u, pooled


def _conv_windows(x: np.ndarray, window: int) -> np.ndarray:
    n, e = x.shape
    left = (window - 1) // 2
    right = window - 1 - left
    padded = np.vstack([np.zeros((left, e)), x, np.zeros((right, e))])
    return np.stack([padded[j : j + window].ravel() for j in range(n)])


def sentence_forward(idx, params: ModelParams, config: ModelConfig) -> SentenceTrace:
    x = params.emb[idx]
    windows = _conv_windows(x, config.window)
    pre = windows @ params.conv_w.T + params.conv_b
    relu_mask = pre > 0
    z = np.where(relu_mask, pre, 0.0)
    m, u, s = _attention_pool(z, params.wattn_w, params.wattn_b, params.wattn_v)
    return SentenceTrace(
        idx=idx, x=x, windows=windows, z=z, relu_mask=relu_mask, m=m, u=u, s=s
    )


def lstm_forward(inputs: np.ndarray, params: ModelParams) -> dict:
    """Run the gate recurrences over sentence vectors [T, F] -> cache."""
    t_steps = inputs.shape[0]
    hdim = params.lstm_bi.shape[0]
    cache = {
        "inputs": inputs,
        "i": np.zeros((t_steps, hdim)), "f": np.zeros((t_steps, hdim)),
        "cbar": np.zeros((t_steps, hdim)), "c": np.zeros((t_steps, hdim)),
        "o": np.zeros((t_steps, hdim)), "h": np.zeros((t_steps, hdim)),
    }
    h_prev = np.zeros(hdim)
    c_prev = np.zeros(hdim)
    for t in range(t_steps):
        s_t = inputs[t]
        i_t = _sigmoid(params.lstm_wi @ s_t + params.lstm_ui @ h_prev + params.lstm_bi)
        f_t = _sigmoid(params.lstm_wf @ s_t + params.lstm_uf @ h_prev + params.lstm_bf)
        cbar = np.tanh(params.lstm_wc @ s_t + params.lstm_uc @ h_prev + params.lstm_bc)
        c_t = i_t * cbar + f_t * c_prev
        o_t = _sigmoid(params.lstm_wo @ s_t + params.lstm_uo @ h_prev + params.lstm_bo)
        h_t = o_t * np.tanh(c_t)
        for key, val in (("i", i_t), ("f", f_t), ("cbar", cbar),
                         ("c", c_t), ("o", o_t), ("h", h_t)):
            cache[key][t] = val
        h_prev, c_prev = h_t, c_t
    return cache


def forward(
    tensor: EssayTensor,
    features: np.ndarray,
    params: ModelParams,
    config: ModelConfig,
    dropout_rng: np.random.Generator | None = None,
) -> tuple[float, ForwardTrace]:
    """Score one essay.  Returns the prediction in (0, 1) and the trace
    of intermediates needed for the backward pass.

    Dropout (inverted scaling) applies to the essay representation only
    when a dropout RNG is supplied.
    """
    trace = ForwardTrace(sentences=[])
    hdim = config.hidden

    for row in range(tensor.indices.shape[0]):
        valid = tensor.mask[row]
        if not valid.any():
            continue
        idx = tensor.indices[row, valid]
        trace.sentences.append(sentence_forward(idx, params, config))

    if trace.sentences:
        inputs = np.stack([st.s for st in trace.sentences])
        trace.lstm = lstm_forward(inputs, params)
        h = trace.lstm["h"]
        trace.a, trace.alpha, trace.o = _attention_pool(
            h, params.sattn_w, params.sattn_b, params.sattn_v
        )
    else:
        trace.o = np.zeros(hdim)

    if dropout_rng is not None and config.dropout > 0.0:
        keep = 1.0 - config.dropout
        trace.dropout_mask = (dropout_rng.random(hdim) < keep) / keep
    else:
        trace.dropout_mask = np.ones(hdim)

    o_dropped = trace.o * trace.dropout_mask
    trace.e = np.concatenate([o_dropped, features])
    trace.yhat = float(_sigmoid(params.out_w @ trace.e + params.out_b))
    return trace.yhat, trace


def _attention_backward(d_pooled, vectors, m, u, weight, gate, grads, prefix):
    """Backward through one attention pool.  Returns d(vectors)."""
    du = vectors @ d_pooled
    d_vectors = np.outer(u, d_pooled)
    d_scores = u * (du - u @ du)
    grads[prefix + "_v"] += m.T @ d_scores
    dm = np.outer(d_scores, gate)
    d_pre = dm * (1.0 - m**2)
    grads[prefix + "_w"] += d_pre.T @ vectors
    grads[prefix + "_b"] += d_pre.sum(axis=0)
    d_vectors += d_pre @ weight
    return d_vectors


def backward(
    trace: ForwardTrace,
    d_yhat: float,
    params: ModelParams,
    config: ModelConfig,
    grads: dict[str, np.ndarray],
) -> None:
    """Accumulate gradients of the loss into ``grads`` given dL/dyhat."""
    yhat = trace.yhat
    d_logit = d_yhat * yhat * (1.0 - yhat)

    grads["out_w"] += d_logit * trace.e
    grads["out_b"] += d_logit
    d_e = d_logit * params.out_w
    hdim = config.hidden
    d_o = d_e[:hdim] * trace.dropout_mask

    if not trace.sentences:
        return

    h = trace.lstm["h"]
    d_h = _attention_backward(
        d_o, h, trace.a, trace.alpha, params.sattn_w, params.sattn_v, grads, "sattn"
    )

    # LSTM backward through time.
    cache = trace.lstm
    t_steps = h.shape[0]
    d_inputs = np.zeros_like(cache["inputs"])
    d_h_next = np.zeros(hdim)
    d_c_next = np.zeros(hdim)
    for t in range(t_steps - 1, -1, -1):
        i_t, f_t = cache["i"][t], cache["f"][t]
        cbar, c_t = cache["cbar"][t], cache["c"][t]
        o_t = cache["o"][t]
        c_prev = cache["c"][t - 1] if t > 0 else np.zeros(hdim)
        h_prev = cache["h"][t - 1] if t > 0 else np.zeros(hdim)
        s_t = cache["inputs"][t]

        dh = d_h[t] + d_h_next
        tanh_c = np.tanh(c_t)
        d_o_gate = dh * tanh_c
        dc = d_c_next + dh * o_t * (1.0 - tanh_c**2)

        d_i = dc * cbar
        d_cbar = dc * i_t
        d_f = dc * c_prev
        d_c_next = dc * f_t

        d_i_pre = d_i * i_t * (1.0 - i_t)
        d_f_pre = d_f * f_t * (1.0 - f_t)
        d_cbar_pre = d_cbar * (1.0 - cbar**2)
        d_o_pre = d_o_gate * o_t * (1.0 - o_t)

        for name, d_pre in (("i", d_i_pre), ("f", d_f_pre),
                            ("c", d_cbar_pre), ("o", d_o_pre)):
            grads[f"lstm_w{name}"] += np.outer(d_pre, s_t)
            grads[f"lstm_u{name}"] += np.outer(d_pre, h_prev)
            grads[f"lstm_b{name}"] += d_pre

        d_inputs[t] = (
            params.lstm_wi.T @ d_i_pre
            + params.lstm_wf.T @ d_f_pre
            + params.lstm_wc.T @ d_cbar_pre
            + params.lstm_wo.T @ d_o_pre
        )
        d_h_next = (
            params.lstm_ui.T @ d_i_pre
            + params.lstm_uf.T @ d_f_pre
            + params.lstm_uc.T @ d_cbar_pre
            + params.lstm_uo.T @ d_o_pre
        )

    # Per-sentence conv + attention backward.
    window = config.window
    emb_dim = config.emb_dim
    left = (window - 1) // 2
    for t, st in enumerate(trace.sentences):
        d_z = _attention_backward(
            d_inputs[t], st.z, st.m, st.u, params.wattn_w, params.wattn_v,
            grads, "wattn",
        )
        d_pre = np.where(st.relu_mask, d_z, 0.0)
        grads["conv_w"] += d_pre.T @ st.windows
        grads["conv_b"] += d_pre.sum(axis=0)
        d_windows = (d_pre @ params.conv_w).reshape(-1, window, emb_dim)
        n = st.x.shape[0]
        d_padded = np.zeros((n + window - 1, emb_dim))
        for k in range(window):
            d_padded[k : k + n] += d_windows[:, k, :]
        d_x = d_padded[left : left + n]
        np.add.at(grads["emb"], st.idx, d_x)

    grads["emb"][PAD_INDEX] = 0.0


def mse_loss(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Mean square error over a batch; errors on empty batches."""
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.size == 0:
        raise ValueError("mse over empty batch")
    return float(np.mean((y_pred - y_true) ** 2))
