"""Shared test helpers and fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from acosonet.corpus import PreprocessConfig, preprocess
from acosonet.embeddings import EmbeddingMatrix
from acosonet.model import ModelConfig, init_model
from acosonet.vocab import Vocabulary, build_frequency, build_vocabulary


def write_word2vec(path, tokens, dim, seed=0, header=False, scale=0.5):
    """Write a word2vec text-format fixture with random vectors."""
    rng = np.random.default_rng(seed)
    lines = []
    if header:
        lines.append(f"{len(tokens)} {dim}")
    for tok in tokens:
        vec = rng.standard_normal(dim) * scale
        lines.append(tok + " " + " ".join(repr(float(v)) for v in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def random_embedding_matrix(vocab_size, dim, seed=0, scale=0.5):
    """Dense random embedding block with the zero padding row in place."""
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((vocab_size + 2, dim)) * scale
    rows[0] = 0.0
    return EmbeddingMatrix(rows=np.ascontiguousarray(rows), coverage=1.0)


def vocab_from_texts(texts, config=None):
    config = config or PreprocessConfig()
    freq = build_frequency([preprocess(t, config) for t in texts])
    return build_vocabulary(freq)


@pytest.fixture
def toy_config():
    return ModelConfig(max_len=6, dim=4, filter_widths=(2, 3), filters_per_width=3, seed=0)


@pytest.fixture
def toy_model(toy_config):
    emb = random_embedding_matrix(vocab_size=10, dim=4, seed=99)
    return init_model(toy_config, emb)


@pytest.fixture
def small_vocab():
    return Vocabulary(["uno", "dos", "tres", "cuatro"], [9, 7, 7, 2])
