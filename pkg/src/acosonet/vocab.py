"""Frequency-ranked vocabulary and fixed-length index encoding.

Real token indices run 1..V, most frequent first. Index 0 is reserved for
padding, index V+1 for out-of-vocabulary tokens; neither ever maps to a
token.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import LabeledText, PreprocessConfig, preprocess
from .errors import CorpusFormatError
from .io_utils import atomic_open

PADDING_INDEX = 0
DEFAULT_MAX_LEN = 50


@dataclass(frozen=True)
class FrequencyTable:
    """Exact multiset counts of token occurrences over a token corpus."""

    counts: dict[str, int]

    def total(self) -> int:
        return sum(self.counts.values())

    def __len__(self) -> int:
        return len(self.counts)


def build_frequency(token_corpus: list[list[str]]) -> FrequencyTable:
    counter: Counter[str] = Counter()
    for tokens in token_corpus:
        counter.update(tokens)
    return FrequencyTable(counts=dict(counter))


class Vocabulary:
    """Token -> index map ranked by frequency (index 1 = most frequent).

    Ties are broken lexicographically. ``index()`` maps unknown tokens to
    the reserved OOV index V+1.
    """

    def __init__(self, tokens: list[str], counts: list[int]):
        if len(tokens) != len(counts):
            raise ValueError("tokens and counts must have equal length")
        self.tokens = list(tokens)  # rank order: tokens[0] has index 1
        self.counts = [int(c) for c in counts]
        self.index_of = {tok: i + 1 for i, tok in enumerate(self.tokens)}
        if len(self.index_of) != len(self.tokens):
            raise ValueError("duplicate token in vocabulary")

    @property
    def size(self) -> int:
        return len(self.tokens)

    @property
    def oov_index(self) -> int:
        return self.size + 1

    def index(self, token: str) -> int:
        return self.index_of.get(token, self.oov_index)

    def token_at(self, index: int) -> str:
        """Token for a real index in 1..V; padding/OOV indices have none."""
        if not 1 <= index <= self.size:
            raise KeyError(f"index {index} does not map to a token (V={self.size})")
        return self.tokens[index - 1]

    def __contains__(self, token: str) -> bool:
        return token in self.index_of

    def __len__(self) -> int:
        return self.size

    def save(self, path) -> None:
        """One ``token<TAB>index<TAB>count`` line per token, index order."""
        with atomic_open(path) as fh:
            for i, (tok, count) in enumerate(zip(self.tokens, self.counts), start=1):
                fh.write(f"{tok}\t{i}\t{count}\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        tokens: list[str] = []
        counts: list[int] = []
        with open(path, encoding="utf-8") as fh:
            for line_num, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise CorpusFormatError(
                        f"{path}: line {line_num}: expected token<TAB>index<TAB>count"
                    )
                tok, index_str, count_str = parts
                try:
                    index, count = int(index_str), int(count_str)
                except ValueError:
                    raise CorpusFormatError(
                        f"{path}: line {line_num}: non-integer index or count"
                    ) from None
                if index != len(tokens) + 1:
                    raise CorpusFormatError(
                        f"{path}: line {line_num}: index {index} out of order, expected {len(tokens) + 1}"
                    )
                tokens.append(tok)
                counts.append(count)
        return cls(tokens, counts)


def build_vocabulary(freq: FrequencyTable, max_size: int | None = None) -> Vocabulary:
    """Rank tokens by (count desc, token asc), keep the top max_size."""
    ranked = sorted(freq.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if max_size is not None:
        ranked = ranked[:max_size]
    return Vocabulary([tok for tok, _ in ranked], [c for _, c in ranked])


def encode_sequence(tokens: list[str], vocab: Vocabulary, max_len: int) -> np.ndarray:
    """Fixed-length int64 index vector: truncate at the tail, pad with 0."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    out = np.zeros(max_len, dtype=np.int64)
    for i, tok in enumerate(tokens[:max_len]):
        out[i] = vocab.index(tok)
    return out


def decode_sequence(indices, vocab: Vocabulary) -> list[str]:
    """Inverse of encode_sequence for in-vocabulary content; drops padding."""
    out = []
    for idx in indices:
        idx = int(idx)
        if idx == PADDING_INDEX:
            continue
        out.append(vocab.token_at(idx))
    return out


@dataclass(frozen=True)
class EncodedDataset:
    """The three parallel vectors: index matrix, labels, and record ids."""

    tweets: np.ndarray  # (n, max_len) int64
    labels: np.ndarray  # (n,) int64
    ids: tuple[str, ...]
    max_len: int

    def __post_init__(self):
        if not (len(self.tweets) == len(self.labels) == len(self.ids)):
            raise ValueError("tweets, labels, and ids must have equal length")

    def __len__(self) -> int:
        return len(self.ids)

    def subset(self, indices) -> "EncodedDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return EncodedDataset(
            tweets=self.tweets[indices],
            labels=self.labels[indices],
            ids=tuple(self.ids[i] for i in indices),
            max_len=self.max_len,
        )


def encode_dataset(
    corpus: list[LabeledText],
    config: PreprocessConfig,
    vocab: Vocabulary,
    max_len: int = DEFAULT_MAX_LEN,
) -> EncodedDataset:
    """Preprocess and encode every record; rows stay aligned with ids.

    Records whose text preprocesses to nothing are kept as all-padding rows.
    """
    n = len(corpus)
    tweets = np.zeros((n, max_len), dtype=np.int64)
    labels = np.zeros(n, dtype=np.int64)
    ids = []
    for i, record in enumerate(corpus):
        tweets[i] = encode_sequence(preprocess(record.text, config), vocab, max_len)
        labels[i] = record.label
        ids.append(record.id)
    return EncodedDataset(tweets=tweets, labels=labels, ids=tuple(ids), max_len=max_len)
