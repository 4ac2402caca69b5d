"""Zipf-law corpus validation: rank/frequency tables and power-law fitting.

The classic empirical law says a token's frequency is inversely proportional
to a power of its frequency rank, with exponent near 1 for natural language.
The fit here is ordinary least squares on (ln rank, ln count) with a free
scale constant; the exponent alone is reported.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .io_utils import atomic_open
from .vocab import FrequencyTable


class RankEntry(NamedTuple):
    rank: int
    token: str
    count: int


@dataclass(frozen=True)
class RankFrequency:
    """Tokens ordered by descending count; ranks are exactly 1..K."""

    entries: tuple[RankEntry, ...]

    def counts(self) -> np.ndarray:
        return np.array([e.count for e in self.entries], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ZipfFit:
    """Result of the log-log linear fit."""

    alpha: float
    log_log_r2: float
    n_points: int


def rank_frequency(freq: FrequencyTable) -> RankFrequency:
    """Rank tokens by (count desc, token asc), same tie rule as the vocabulary."""
    if not freq.counts:
        raise ValueError("cannot rank an empty frequency table")
    ranked = sorted(freq.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = tuple(
        RankEntry(rank=i, token=tok, count=count)
        for i, (tok, count) in enumerate(ranked, start=1)
    )
    return RankFrequency(entries=entries)


def zipf_expected(rank: int, alpha: float, scale: float) -> float:
    """Expected frequency at a rank: scale / rank**alpha."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    return scale / rank**alpha


def fit_zipf(rf: RankFrequency, max_rank: int | None = None) -> ZipfFit:
    """OLS on (ln rank, ln count) over ranks 1..min(K, max_rank).

    alpha is the negated slope; r2 the coefficient of determination of that
    regression. Requires at least two points with distinct counts.
    """
    entries = rf.entries
    if max_rank is not None:
        entries = entries[:max_rank]
    if len(entries) < 2:
        raise ValueError("need at least 2 ranks to fit")
    counts = np.array([e.count for e in entries], dtype=np.float64)
    if np.any(counts <= 0):
        raise ValueError("all counts must be positive")
    if np.all(counts == counts[0]):
        raise ValueError("need at least 2 distinct counts to fit")

    log_r = np.log(np.arange(1, len(entries) + 1, dtype=np.float64))
    log_c = np.log(counts)
    slope, intercept = np.polyfit(log_r, log_c, deg=1)
    residuals = log_c - (slope * log_r + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((log_c - log_c.mean()) ** 2))
    r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return ZipfFit(alpha=float(-slope), log_log_r2=r2, n_points=len(entries))


def export_plot_data(
    rf: RankFrequency, fit: ZipfFit, path, top_n: int
) -> None:
    """Write the observed-vs-expected CSV behind the rank/frequency plots.

    Columns: rank, token, observed_count, zipf_expected_count, for the first
    top_n ranks. The expected curve uses the fitted exponent with the scale
    anchored so that expected equals observed at rank 1.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    entries = rf.entries[:top_n]
    scale = float(entries[0].count)
    with atomic_open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "token", "observed_count", "zipf_expected_count"])
        for entry in entries:
            expected = zipf_expected(entry.rank, fit.alpha, scale)
            writer.writerow([entry.rank, entry.token, entry.count, repr(expected)])
