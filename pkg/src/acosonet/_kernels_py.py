"""Pure-numpy kernels for the convolution + max-over-time hot path.

Drop-in fallback for the compiled extension (_kernels_cy); both expose the
same two functions with identical semantics. Selected by acosonet.kernels
at import time.
"""

from __future__ import annotations

import numpy as np


def conv_pool_forward(emb: np.ndarray, filters: np.ndarray, bias: np.ndarray):
    """Valid 1-D convolution over token windows, relu, max-over-time.

    emb: (L, d) embedded sentence; filters: (n_f, w, d); bias: (n_f,).
    Returns (pooled, argmax): the per-filter max activation and the first
    position attaining it.
    """
    n_f, w, d = filters.shape
    t_len = emb.shape[0] - w + 1
    windows = np.lib.stride_tricks.sliding_window_view(emb, (w, d)).reshape(t_len, w * d)
    z = windows @ filters.reshape(n_f, w * d).T + bias  # (t_len, n_f)
    act = np.maximum(z, 0.0)
    pooled = act.max(axis=0)
    argmax = act.argmax(axis=0).astype(np.int64)  # first occurrence on ties
    return pooled, argmax


def conv_pool_backward(
    emb: np.ndarray,
    filters: np.ndarray,
    argmax: np.ndarray,
    grad_z: np.ndarray,
    need_emb_grad: bool,
):
    """Gradients through the pooled convolution.

    grad_z holds the upstream gradient already multiplied by the relu mask
    (zero for filters whose pooled activation was zero); max-pooling routes
    everything to the argmax window. Returns (d_filters, d_bias, d_emb)
    with d_emb None unless requested.
    """
    n_f, w, _ = filters.shape
    rows = argmax[:, None] + np.arange(w)[None, :]  # (n_f, w)
    selected = emb[rows]  # (n_f, w, d)
    d_filters = grad_z[:, None, None] * selected
    d_bias = grad_z.copy()
    d_emb = None
    if need_emb_grad:
        d_emb = np.zeros_like(emb)
        for f in range(n_f):
            g = grad_z[f]
            if g != 0.0:
                start = int(argmax[f])
                d_emb[start : start + w] += g * filters[f]
    return d_filters, d_bias, d_emb
