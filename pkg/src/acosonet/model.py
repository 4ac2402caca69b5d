"""From-scratch convolutional sentence classifier.

Architecture: embedding lookup -> parallel 1-D convolutions (one bank per
window width) -> relu -> max-over-time pooling -> single dense sigmoid
output. Training is plain mini-batch gradient descent on binary
cross-entropy, with analytic gradients that are verified against central
finite differences in the test suite.

Everything runs in float64 with fixed accumulation order, so results are
reproducible bit-for-bit for a given seed and kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .corpus import PreprocessConfig, preprocess
from .embeddings import EmbeddingMatrix
from .errors import TrainingDiverged
from .vocab import Vocabulary, encode_sequence

LOSS_EPS = 1e-7  # probability clamp inside the loss
_P_MIN = 1e-300  # forward output clamp: keeps the open interval (0, 1)
_P_MAX = 1.0 - 1e-16


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters of the classifier."""

    max_len: int
    dim: int
    filter_widths: tuple[int, ...] = (2, 3, 4)
    filters_per_width: int = 32
    learning_rate: float = 1e-3
    fine_tune_embeddings: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "filter_widths", tuple(int(w) for w in self.filter_widths))
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.filter_widths:
            raise ValueError("at least one filter width is required")
        for w in self.filter_widths:
            if not 1 <= w <= self.max_len:
                raise ValueError(f"filter width {w} must be in 1..max_len ({self.max_len})")
        if len(set(self.filter_widths)) != len(self.filter_widths):
            raise ValueError("filter widths must be distinct")
        if self.filters_per_width < 1:
            raise ValueError("filters_per_width must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")

    @property
    def n_features(self) -> int:
        return len(self.filter_widths) * self.filters_per_width


class ModelParams:
    """All trainable state plus the (possibly frozen) embedding matrix."""

    def __init__(
        self,
        config: ModelConfig,
        conv_filters: dict[int, np.ndarray],
        conv_bias: dict[int, np.ndarray],
        dense_w: np.ndarray,
        dense_b: float,
        embedding: EmbeddingMatrix,
    ):
        self.config = config
        self.conv_filters = conv_filters
        self.conv_bias = conv_bias
        self.dense_w = dense_w
        self.dense_b = float(dense_b)
        self.embedding = embedding

    def copy(self) -> "ModelParams":
        """Deep copy of every parameter array (checkpoint snapshot)."""
        return ModelParams(
            config=self.config,
            conv_filters={w: f.copy() for w, f in self.conv_filters.items()},
            conv_bias={w: b.copy() for w, b in self.conv_bias.items()},
            dense_w=self.dense_w.copy(),
            dense_b=self.dense_b,
            embedding=EmbeddingMatrix(
                rows=self.embedding.rows.copy(), coverage=self.embedding.coverage
            ),
        )

    def all_finite(self) -> bool:
        for w in self.config.filter_widths:
            if not np.all(np.isfinite(self.conv_filters[w])):
                return False
            if not np.all(np.isfinite(self.conv_bias[w])):
                return False
        return bool(np.all(np.isfinite(self.dense_w)) and math.isfinite(self.dense_b))


@dataclass
class Gradients:
    """Same shapes as ModelParams; embedding block only when fine-tuning."""

    conv_filters: dict[int, np.ndarray]
    conv_bias: dict[int, np.ndarray]
    dense_w: np.ndarray
    dense_b: float
    embedding: np.ndarray | None = None

    @classmethod
    def zeros_for(cls, params: ModelParams) -> "Gradients":
        cfg = params.config
        return cls(
            conv_filters={w: np.zeros_like(params.conv_filters[w]) for w in cfg.filter_widths},
            conv_bias={w: np.zeros_like(params.conv_bias[w]) for w in cfg.filter_widths},
            dense_w=np.zeros_like(params.dense_w),
            dense_b=0.0,
            embedding=(
                np.zeros_like(params.embedding.rows) if cfg.fine_tune_embeddings else None
            ),
        )

    def add_(self, other: "Gradients") -> None:
        for w, g in other.conv_filters.items():
            self.conv_filters[w] += g
        for w, g in other.conv_bias.items():
            self.conv_bias[w] += g
        self.dense_w += other.dense_w
        self.dense_b += other.dense_b
        if self.embedding is not None and other.embedding is not None:
            self.embedding += other.embedding

    def scale_(self, factor: float) -> None:
        for w in self.conv_filters:
            self.conv_filters[w] *= factor
            self.conv_bias[w] *= factor
        self.dense_w *= factor
        self.dense_b *= factor
        if self.embedding is not None:
            self.embedding *= factor

    def all_finite(self) -> bool:
        for g in self.conv_filters.values():
            if not np.all(np.isfinite(g)):
                return False
        for g in self.conv_bias.values():
            if not np.all(np.isfinite(g)):
                return False
        if not (np.all(np.isfinite(self.dense_w)) and math.isfinite(self.dense_b)):
            return False
        if self.embedding is not None and not np.all(np.isfinite(self.embedding)):
            return False
        return True


def init_model(config: ModelConfig, emb: EmbeddingMatrix) -> ModelParams:
    """Glorot-uniform weights, zero biases, deterministic for a fixed seed.

    Each group draws from uniform(-a, a) with a = sqrt(6 / (fan_in +
    fan_out)): conv banks use fan_in = width * dim and fan_out =
    filters_per_width; the dense head uses fan_in = total pooled features
    and fan_out = 1.
    """
    if emb.dim != config.dim:
        raise ValueError(f"embedding dim {emb.dim} != config dim {config.dim}")
    rng = np.random.default_rng(config.seed)
    n_f = config.filters_per_width
    conv_filters: dict[int, np.ndarray] = {}
    conv_bias: dict[int, np.ndarray] = {}
    for w in config.filter_widths:
        a = math.sqrt(6.0 / (w * config.dim + n_f))
        conv_filters[w] = rng.uniform(-a, a, size=(n_f, w, config.dim))
        conv_bias[w] = np.zeros(n_f)
    a = math.sqrt(6.0 / (config.n_features + 1))
    dense_w = rng.uniform(-a, a, size=config.n_features)
    if config.fine_tune_embeddings:
        emb = EmbeddingMatrix(rows=emb.rows.copy(), coverage=emb.coverage)
    return ModelParams(
        config=config,
        conv_filters=conv_filters,
        conv_bias=conv_bias,
        dense_w=dense_w,
        dense_b=0.0,
        embedding=emb,
    )


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _check_indices(params: ModelParams, x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.int64)
    if x.shape != (params.config.max_len,):
        raise ValueError(
            f"input length {x.shape} != (max_len,) = ({params.config.max_len},)"
        )
    n_rows = params.embedding.rows.shape[0]
    if np.any(x < 0) or np.any(x >= n_rows):
        raise IndexError(f"token index out of range [0, {n_rows - 1}]")
    return x


def _forward_cache(params: ModelParams, x: np.ndarray):
    x = _check_indices(params, x)
    emb_sent = np.ascontiguousarray(params.embedding.rows[x])
    pooled_parts = []
    argmax_parts = {}
    for w in params.config.filter_widths:
        pooled, argmax = kernels.conv_pool_forward(
            emb_sent, params.conv_filters[w], params.conv_bias[w]
        )
        pooled_parts.append(pooled)
        argmax_parts[w] = argmax
    pooled_all = np.concatenate(pooled_parts)
    logit = float(np.dot(params.dense_w, pooled_all)) + params.dense_b
    prob = min(max(_sigmoid(logit), _P_MIN), _P_MAX)
    return prob, x, emb_sent, pooled_all, argmax_parts


def forward(params: ModelParams, x) -> float:
    """Probability that the encoded sentence is a bullying text.

    Strictly inside (0, 1) for every input.
    """
    return _forward_cache(params, x)[0]


def forward_many(params: ModelParams, xs: np.ndarray) -> np.ndarray:
    """Row-wise forward over a (n, max_len) index matrix."""
    return np.array([forward(params, row) for row in xs], dtype=np.float64)


def bce_loss(p: float, y: int) -> float:
    """Binary cross-entropy with the probability clamped to [eps, 1-eps]."""
    p = min(max(p, LOSS_EPS), 1.0 - LOSS_EPS)
    return -(y * math.log(p) + (1 - y) * math.log(1.0 - p))


def mean_bce(probs: np.ndarray, labels: np.ndarray) -> float:
    p = np.clip(probs, LOSS_EPS, 1.0 - LOSS_EPS)
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log1p(-p))))


def backward(params: ModelParams, x, y: int) -> tuple[float, Gradients]:
    """Loss and analytic gradients for one example.

    Max-pooling routes gradient to the first maximal position; relu has
    gradient 0 at exactly 0; the loss clamp makes the gradient 0 when the
    probability saturates past [eps, 1-eps]. With frozen embeddings the
    embedding block is None; when fine-tuning, the padding row's gradient
    is pinned to zero.
    """
    prob, x, emb_sent, pooled_all, argmax_parts = _forward_cache(params, x)
    loss = bce_loss(prob, y)

    if LOSS_EPS < prob < 1.0 - LOSS_EPS:
        d_logit = prob - y
    else:
        d_logit = 0.0  # clamped: the loss is flat here

    cfg = params.config
    d_dense_w = d_logit * pooled_all
    d_dense_b = d_logit
    d_pooled = d_logit * params.dense_w

    fine_tune = cfg.fine_tune_embeddings
    conv_filter_grads: dict[int, np.ndarray] = {}
    conv_bias_grads: dict[int, np.ndarray] = {}
    d_emb_sent = np.zeros_like(emb_sent) if fine_tune else None
    offset = 0
    n_f = cfg.filters_per_width
    for w in cfg.filter_widths:
        pooled_w = pooled_all[offset : offset + n_f]
        grad_z = np.where(pooled_w > 0.0, d_pooled[offset : offset + n_f], 0.0)
        d_filt, d_bias, d_emb_w = kernels.conv_pool_backward(
            emb_sent, params.conv_filters[w], argmax_parts[w], grad_z, fine_tune
        )
        conv_filter_grads[w] = d_filt
        conv_bias_grads[w] = d_bias
        if fine_tune:
            d_emb_sent += d_emb_w
        offset += n_f

    d_embedding = None
    if fine_tune:
        d_embedding = np.zeros_like(params.embedding.rows)
        np.add.at(d_embedding, x, d_emb_sent)
        d_embedding[0, :] = 0.0  # padding row is never trained

    return loss, Gradients(
        conv_filters=conv_filter_grads,
        conv_bias=conv_bias_grads,
        dense_w=d_dense_w,
        dense_b=d_dense_b,
        embedding=d_embedding,
    )


def numerical_gradient(params: ModelParams, x, y: int, step: float = 1e-4) -> Gradients:
    """Central-difference gradients: (L(p+h) - L(p-h)) / 2h per component.

    The verification oracle for ``backward``. Mirrors its conventions: the
    embedding block is computed only when fine-tuning, and the padding row
    is skipped (left zero).
    """
    if step <= 0:
        raise ValueError("step must be positive")

    def loss_now() -> float:
        return bce_loss(forward(params, x), y)

    def diff_inplace(arr: np.ndarray, out: np.ndarray, skip_rows=()):
        flat = arr.reshape(-1)
        out_flat = out.reshape(-1)
        for i in range(flat.size):
            if skip_rows and arr.ndim > 1 and (i // int(np.prod(arr.shape[1:]))) in skip_rows:
                continue
            orig = flat[i]
            flat[i] = orig + step
            up = loss_now()
            flat[i] = orig - step
            down = loss_now()
            flat[i] = orig
            out_flat[i] = (up - down) / (2.0 * step)

    grads = Gradients.zeros_for(params)
    for w in params.config.filter_widths:
        diff_inplace(params.conv_filters[w], grads.conv_filters[w])
        diff_inplace(params.conv_bias[w], grads.conv_bias[w])
    diff_inplace(params.dense_w, grads.dense_w)

    orig = params.dense_b
    params.dense_b = orig + step
    up = loss_now()
    params.dense_b = orig - step
    down = loss_now()
    params.dense_b = orig
    grads.dense_b = (up - down) / (2.0 * step)

    if params.config.fine_tune_embeddings:
        diff_inplace(params.embedding.rows, grads.embedding, skip_rows=(0,))
    return grads


def train_step(
    params: ModelParams, batch: list[tuple[np.ndarray, int]], config: ModelConfig
) -> tuple[ModelParams, float]:
    """One plain gradient-descent step on the batch-mean loss.

    Per-example gradients are accumulated left to right in the given batch
    order, averaged, and applied in place: theta <- theta - lr * grad. The
    padding embedding row is never modified. Raises TrainingDiverged on a
    non-finite loss or gradient.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    total = Gradients.zeros_for(params)
    loss_sum = 0.0
    for x, y in batch:
        loss, grad = backward(params, x, y)
        loss_sum += loss
        total.add_(grad)
    mean_loss = loss_sum / len(batch)
    total.scale_(1.0 / len(batch))
    if not math.isfinite(mean_loss) or not total.all_finite():
        raise TrainingDiverged(f"non-finite loss or gradient (mean loss {mean_loss!r})")

    lr = config.learning_rate
    for w in config.filter_widths:
        params.conv_filters[w] -= lr * total.conv_filters[w]
        params.conv_bias[w] -= lr * total.conv_bias[w]
    params.dense_w -= lr * total.dense_w
    params.dense_b -= lr * total.dense_b
    if config.fine_tune_embeddings and total.embedding is not None:
        total.embedding[0, :] = 0.0  # belt-and-braces: padding row stays put
        rows = params.embedding.rows
        rows -= lr * total.embedding
    if not params.all_finite():
        raise TrainingDiverged("parameters became non-finite after the update")
    return params, mean_loss


def predict(
    params: ModelParams,
    text: str,
    config: PreprocessConfig,
    vocab: Vocabulary,
    max_len: int | None = None,
) -> tuple[int, float]:
    """Classify a raw text: (label, probability). 0.5 ties go to label 1."""
    if max_len is None:
        max_len = params.config.max_len
    x = encode_sequence(preprocess(text, config), vocab, max_len)
    prob = forward(params, x)
    return (1 if prob >= 0.5 else 0), prob
