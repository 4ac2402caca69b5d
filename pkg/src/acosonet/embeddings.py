"""Pretrained word vectors: word2vec text-format loading and the
vocabulary-aligned embedding matrix.

The matrix has V+2 rows: row 0 is the all-zero padding vector, rows 1..V
follow the vocabulary index order, and row V+1 is the out-of-vocabulary
vector (the mean of the vectors that matched the vocabulary).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmbeddingFormatError
from .vocab import Vocabulary


@dataclass(frozen=True)
class WordVectorStore:
    dim: int
    vectors: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors


def load_word_vectors(path: str | Path, expected_dim: int) -> WordVectorStore:
    """Stream a word2vec text file into a store.

    Format: an optional first header line of two integers ("count dim"),
    then one ``token v1 v2 ... v_dim`` line per word. Duplicate tokens keep
    the first occurrence. Malformed lines are reported with their line
    number.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        first = True
        for line_num, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if first:
                first = False
                if len(parts) == 2 and _is_int(parts[0]) and _is_int(parts[1]):
                    if int(parts[1]) != expected_dim:
                        raise EmbeddingFormatError(
                            f"{path}: line {line_num}: header declares dimension "
                            f"{parts[1]}, expected {expected_dim}"
                        )
                    continue
            token, components = parts[0], parts[1:]
            if len(components) != expected_dim:
                raise EmbeddingFormatError(
                    f"{path}: line {line_num}: {len(components)} components, "
                    f"expected {expected_dim}"
                )
            try:
                vec = np.array([float(c) for c in components], dtype=np.float64)
            except ValueError:
                raise EmbeddingFormatError(
                    f"{path}: line {line_num}: non-numeric vector component"
                ) from None
            if not np.all(np.isfinite(vec)):
                raise EmbeddingFormatError(
                    f"{path}: line {line_num}: non-finite vector component"
                )
            if token not in vectors:
                vectors[token] = vec
    if not vectors:
        raise EmbeddingFormatError(f"{path}: no word vectors found")
    return WordVectorStore(dim=expected_dim, vectors=vectors)


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


@dataclass(frozen=True)
class EmbeddingMatrix:
    """(V+2) x dim float64 matrix aligned with a vocabulary.

    Row 0 is the padding row and must be all zeros; the last row is OOV.
    """

    rows: np.ndarray
    coverage: float

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[0] < 2 or self.rows.shape[1] < 1:
            raise ValueError(f"embedding matrix must be (V+2) x dim, got {self.rows.shape}")
        if np.any(self.rows[0] != 0.0):
            raise ValueError("padding row (index 0) must be all zeros")
        if not 0.0 <= self.coverage <= 1.0:
            raise ValueError(f"coverage must be in [0, 1], got {self.coverage!r}")

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.rows.shape[0] - 2

    @property
    def oov_index(self) -> int:
        return self.rows.shape[0] - 1


def build_embedding_matrix(vocab: Vocabulary, store: WordVectorStore) -> EmbeddingMatrix:
    """Assemble the vocabulary-aligned matrix.

    Vocabulary tokens found in the store take their stored vector; missing
    tokens share the OOV vector, the component-wise mean of the matched
    vectors (all zeros when nothing matched). Row 0 stays all zeros.
    """
    if store.dim < 1:
        raise ValueError("store dimension must be >= 1")
    v = vocab.size
    rows = np.zeros((v + 2, store.dim), dtype=np.float64)
    matched: list[int] = []
    for i in range(1, v + 1):
        vec = store.vectors.get(vocab.token_at(i))
        if vec is not None:
            rows[i] = vec
            matched.append(i)
    if matched:
        # fixed accumulation order: vocabulary index order
        oov = np.zeros(store.dim, dtype=np.float64)
        for i in matched:
            oov += rows[i]
        oov /= len(matched)
        rows[v + 1] = oov
        matched_set = set(matched)
        for i in range(1, v + 1):
            if i not in matched_set:
                rows[i] = oov
    coverage = len(matched) / v if v else 0.0
    return EmbeddingMatrix(rows=rows, coverage=coverage)
