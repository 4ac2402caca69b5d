"""Validation harness: random 90/10 splits, multi-epoch training runs with
per-epoch checkpoints, best-model selection, and success/failure reporting.

"Cross-validation" here means independent random re-splits per iteration
(not disjoint k-fold partitioning): each iteration draws its own train/test
split and trains a fresh model for a fixed number of epochs, storing a
checkpoint after every epoch. The checkpoint with the best training metrics
is then scored on the held-out split.

Everything is driven by a single master seed: per-iteration split and
training seeds are derived through numpy's SeedSequence, so a full run is
reproducible bit-for-bit.
"""

from __future__ import annotations

import json
import math
import struct
import zlib
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import CheckpointFormatError
from .io_utils import atomic_open
from .model import (
    ModelConfig,
    ModelParams,
    forward_many,
    init_model,
    mean_bce,
    train_step,
)
from .vocab import EncodedDataset

CHECKPOINT_MAGIC = b"ACNCHKPT"
CHECKPOINT_VERSION = 1

SELECTION_HEADER = ("iteration", "selected_epoch", "accuracy", "loss")
SUCCESS_HEADER = ("iteration", "success_pct", "fail_pct")


@dataclass(frozen=True)
class TrainConfig:
    """Harness-level knobs (model hyperparameters live in ModelConfig)."""

    iterations: int = 4
    epochs: int = 8
    train_fraction: float = 0.9
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class Checkpoint:
    """Parameter snapshot plus the end-of-epoch training metrics."""

    iteration: int  # 1-based
    epoch: int  # 1-based
    params: ModelParams
    train_accuracy: float
    train_loss: float

    def __post_init__(self):
        if self.iteration < 1 or self.epoch < 1:
            raise ValueError("iteration and epoch are 1-based")
        if not 0.0 <= self.train_accuracy <= 1.0:
            raise ValueError("train_accuracy must be in [0, 1]")
        if not (self.train_loss >= 0.0 and math.isfinite(self.train_loss)):
            raise ValueError("train_loss must be finite and >= 0")


@dataclass(frozen=True)
class IterationReport:
    selected: Checkpoint
    test_success_pct: float
    test_fail_pct: float


@dataclass(frozen=True)
class CrossValReport:
    per_iteration: tuple[IterationReport, ...]
    average_success_pct: float


def split_train_test(
    dataset: EncodedDataset, fraction: float, seed: int
) -> tuple[EncodedDataset, EncodedDataset]:
    """Random disjoint split; train size is floor(n * fraction).

    The permutation is drawn from the seed alone, so the same (dataset,
    fraction, seed) triple always yields the same partition.
    """
    n = len(dataset)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_train = math.floor(fraction * n)
    return dataset.subset(perm[:n_train]), dataset.subset(perm[n_train:])


def train_metrics(params: ModelParams, data: EncodedDataset) -> tuple[float, float]:
    """(accuracy, mean loss) of a parameter snapshot over a dataset."""
    probs = forward_many(params, data.tweets)
    preds = (probs >= 0.5).astype(np.int64)
    accuracy = float(np.mean(preds == data.labels))
    return accuracy, mean_bce(probs, data.labels)


def fit(
    train: EncodedDataset,
    model_config: ModelConfig,
    emb: EmbeddingMatrix,
    epochs: int,
    seed: int,
    batch_size: int = 32,
    iteration: int = 1,
) -> list[Checkpoint]:
    """Train from a fresh init, storing one checkpoint per epoch.

    The seed is stretched into an init seed and a shuffle stream; accuracy
    and loss are measured over the whole training set at the end of each
    epoch, against that epoch's frozen parameters.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if len(train) == 0:
        raise ValueError("training set must be non-empty")
    init_seed, shuffle_seed = (int(s) for s in np.random.SeedSequence(seed).generate_state(2))
    params = init_model(replace(model_config, seed=init_seed), emb)
    shuffle_rng = np.random.default_rng(shuffle_seed)

    checkpoints: list[Checkpoint] = []
    n = len(train)
    for epoch in range(1, epochs + 1):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            batch = [(train.tweets[j], int(train.labels[j])) for j in idx]
            params, _ = train_step(params, batch, model_config)
        accuracy, loss = train_metrics(params, train)
        checkpoints.append(
            Checkpoint(
                iteration=iteration,
                epoch=epoch,
                params=params.copy(),
                train_accuracy=accuracy,
                train_loss=loss,
            )
        )
    return checkpoints


def run_iteration(
    train: EncodedDataset,
    test: EncodedDataset,
    model_config: ModelConfig,
    emb: EmbeddingMatrix,
    epochs: int,
    seed: int,
    batch_size: int = 32,
    iteration: int = 1,
) -> tuple[list[Checkpoint], IterationReport]:
    """One full iteration: fit on the train split, select, score on test."""
    if len(test) == 0:
        raise ValueError("test set must be non-empty")
    checkpoints = fit(
        train, model_config, emb, epochs, seed, batch_size=batch_size, iteration=iteration
    )
    best = select_best_checkpoint(checkpoints)
    success, fail = evaluate(best.params, test)
    report = IterationReport(selected=best, test_success_pct=success, test_fail_pct=fail)
    return checkpoints, report


def select_best_checkpoint(checkpoints: list[Checkpoint]) -> Checkpoint:
    """Highest training accuracy; ties -> lowest loss, then latest epoch."""
    if not checkpoints:
        raise ValueError("no checkpoints to select from")
    return max(checkpoints, key=lambda cp: (cp.train_accuracy, -cp.train_loss, cp.epoch))


def evaluate(params: ModelParams, test: EncodedDataset) -> tuple[float, float]:
    """Success/failure percentages on the test set; the pair sums to 100.

    success = 100 * correct / n. The failure percentage is the exact
    complement; success is then re-derived from it so that in float
    arithmetic success + fail == 100.0 holds identically.
    """
    n = len(test)
    if n == 0:
        raise ValueError("test set is empty")
    probs = forward_many(params, test.tweets)
    preds = (probs >= 0.5).astype(np.int64)
    correct = int(np.sum(preds == test.labels))
    success = 100.0 * correct / n
    fail = 100.0 - success
    success = 100.0 - fail
    return success, fail


def cross_validate(
    dataset: EncodedDataset,
    emb: EmbeddingMatrix,
    model_config: ModelConfig,
    train_config: TrainConfig,
    checkpoint_dir: Path | str | None = None,
    on_iteration=None,
) -> CrossValReport:
    """Run the full protocol: iterations x (split, train, select, score).

    Iteration i derives a split seed and a training seed from (master seed,
    i), so every iteration re-splits the corpus independently and the whole
    run is a pure function of the master seed. When checkpoint_dir is
    given, every epoch's checkpoint is saved as iter<I>_epoch<E>.ckpt.
    on_iteration, if given, is called with each finished IterationReport.
    """
    out_dir = None
    if checkpoint_dir is not None:
        out_dir = Path(checkpoint_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

    reports: list[IterationReport] = []
    for i in range(1, train_config.iterations + 1):
        ss = np.random.SeedSequence((train_config.seed, i))
        split_seed, iter_seed = (int(s) for s in ss.generate_state(2))
        train, test = split_train_test(dataset, train_config.train_fraction, split_seed)
        checkpoints, report = run_iteration(
            train,
            test,
            model_config,
            emb,
            epochs=train_config.epochs,
            seed=iter_seed,
            batch_size=train_config.batch_size,
            iteration=i,
        )
        if out_dir is not None:
            for cp in checkpoints:
                save_checkpoint(cp, out_dir / f"iter{cp.iteration}_epoch{cp.epoch}.ckpt")
        reports.append(report)
        if on_iteration is not None:
            on_iteration(report)

    average = sum(r.test_success_pct for r in reports) / len(reports)
    return CrossValReport(per_iteration=tuple(reports), average_success_pct=average)


# --- checkpoint container -------------------------------------------------
#
# Layout: MAGIC (8 bytes) | version u32 LE | header_len u32 LE | header JSON
# (UTF-8) | raw little-endian float64 blocks in manifest order | crc32 u32 LE
# over everything before the trailer. The JSON header carries the model
# config, metrics, embedding coverage and the array manifest (name + shape),
# making the file self-describing; floats in the header use repr() and so
# round-trip exactly.


def _array_blocks(params: ModelParams) -> list[tuple[str, np.ndarray]]:
    blocks: list[tuple[str, np.ndarray]] = []
    for w in params.config.filter_widths:
        blocks.append((f"conv_filters/{w}", params.conv_filters[w]))
        blocks.append((f"conv_bias/{w}", params.conv_bias[w]))
    blocks.append(("dense_w", params.dense_w))
    blocks.append(("dense_b", np.array([params.dense_b])))
    blocks.append(("embedding", params.embedding.rows))
    return blocks


def save_checkpoint(cp: Checkpoint, path: Path | str) -> None:
    """Serialize to the self-describing binary container (atomic write)."""
    blocks = _array_blocks(cp.params)
    cfg = cp.params.config
    header = {
        "iteration": cp.iteration,
        "epoch": cp.epoch,
        "train_accuracy": cp.train_accuracy,
        "train_loss": cp.train_loss,
        "coverage": cp.params.embedding.coverage,
        "config": {
            "max_len": cfg.max_len,
            "dim": cfg.dim,
            "filter_widths": list(cfg.filter_widths),
            "filters_per_width": cfg.filters_per_width,
            "learning_rate": cfg.learning_rate,
            "fine_tune_embeddings": cfg.fine_tune_embeddings,
            "seed": cfg.seed,
        },
        "arrays": [{"name": name, "shape": list(arr.shape)} for name, arr in blocks],
    }
    header_bytes = json.dumps(header, ensure_ascii=False).encode("utf-8")
    payload = bytearray()
    payload += CHECKPOINT_MAGIC
    payload += struct.pack("<I", CHECKPOINT_VERSION)
    payload += struct.pack("<I", len(header_bytes))
    payload += header_bytes
    for _, arr in blocks:
        payload += np.ascontiguousarray(arr, dtype="<f8").tobytes()
    crc = zlib.crc32(bytes(payload)) & 0xFFFFFFFF
    with atomic_open(Path(path), binary=True) as fh:
        fh.write(bytes(payload))
        fh.write(struct.pack("<I", crc))


def load_checkpoint(path: Path | str) -> Checkpoint:
    """Parse and verify a checkpoint file; bit-exact inverse of save."""
    data = Path(path).read_bytes()
    if len(data) < len(CHECKPOINT_MAGIC) + 12:
        raise CheckpointFormatError(f"{path}: truncated file")
    if data[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CheckpointFormatError(f"{path}: not a checkpoint file (bad magic)")
    stored_crc = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
        raise CheckpointFormatError(f"{path}: checksum mismatch")
    off = len(CHECKPOINT_MAGIC)
    version = struct.unpack_from("<I", data, off)[0]
    if version != CHECKPOINT_VERSION:
        raise CheckpointFormatError(f"{path}: unsupported format version {version}")
    off += 4
    header_len = struct.unpack_from("<I", data, off)[0]
    off += 4
    if off + header_len > len(data) - 4:
        raise CheckpointFormatError(f"{path}: truncated header")
    try:
        header = json.loads(data[off : off + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f"{path}: malformed header ({exc})") from exc
    off += header_len

    try:
        cfg_block = header["config"]
        config = ModelConfig(
            max_len=cfg_block["max_len"],
            dim=cfg_block["dim"],
            filter_widths=tuple(cfg_block["filter_widths"]),
            filters_per_width=cfg_block["filters_per_width"],
            learning_rate=cfg_block["learning_rate"],
            fine_tune_embeddings=cfg_block["fine_tune_embeddings"],
            seed=cfg_block["seed"],
        )
        manifest = header["arrays"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointFormatError(f"{path}: invalid header contents ({exc})") from exc

    arrays: dict[str, np.ndarray] = {}
    for entry in manifest:
        shape = tuple(int(s) for s in entry["shape"])
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        end = off + count * 8
        if end > len(data) - 4:
            raise CheckpointFormatError(f"{path}: truncated array block {entry['name']!r}")
        arrays[entry["name"]] = (
            np.frombuffer(data[off:end], dtype="<f8").reshape(shape).copy()
        )
        off = end
    if off != len(data) - 4:
        raise CheckpointFormatError(f"{path}: trailing data after array blocks")

    try:
        conv_filters = {w: arrays[f"conv_filters/{w}"] for w in config.filter_widths}
        conv_bias = {w: arrays[f"conv_bias/{w}"] for w in config.filter_widths}
        params = ModelParams(
            config=config,
            conv_filters=conv_filters,
            conv_bias=conv_bias,
            dense_w=arrays["dense_w"],
            dense_b=float(arrays["dense_b"][0]),
            embedding=EmbeddingMatrix(rows=arrays["embedding"], coverage=header["coverage"]),
        )
        return Checkpoint(
            iteration=header["iteration"],
            epoch=header["epoch"],
            params=params,
            train_accuracy=header["train_accuracy"],
            train_loss=header["train_loss"],
        )
    except (KeyError, IndexError, ValueError) as exc:
        raise CheckpointFormatError(f"{path}: inconsistent checkpoint contents ({exc})") from exc


# --- report files ---------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def write_selection_report(report: CrossValReport, path: Path | str) -> None:
    """CSV of the selected checkpoint per iteration (Table 3 shape)."""
    with atomic_open(Path(path)) as fh:
        fh.write(",".join(SELECTION_HEADER) + "\n")
        for rep in report.per_iteration:
            cp = rep.selected
            fh.write(
                f"{cp.iteration},{cp.epoch},{_fmt(cp.train_accuracy)},{_fmt(cp.train_loss)}\n"
            )


def write_success_report(report: CrossValReport, path: Path | str) -> None:
    """CSV of test success/failure per iteration plus an average row."""
    with atomic_open(Path(path)) as fh:
        fh.write(",".join(SUCCESS_HEADER) + "\n")
        for rep in report.per_iteration:
            fh.write(
                f"{rep.selected.iteration},{_fmt(rep.test_success_pct)},"
                f"{_fmt(rep.test_fail_pct)}\n"
            )
        avg = report.average_success_pct
        fh.write(f"average,{_fmt(avg)},{_fmt(100.0 - avg)}\n")
