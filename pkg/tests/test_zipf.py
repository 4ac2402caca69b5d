"""Rank/frequency tables and power-law fitting."""

import csv
import math

import numpy as np
import pytest

from acosonet.vocab import build_frequency
from acosonet.zipf import (
    RankEntry,
    RankFrequency,
    ZipfFit,
    export_plot_data,
    fit_zipf,
    rank_frequency,
    zipf_expected,
)


def exact_power_law(alpha, n_ranks, scale=1e6):
    entries = tuple(
        RankEntry(rank=r, token=f"w{r}", count=scale / r**alpha)
        for r in range(1, n_ranks + 1)
    )
    return RankFrequency(entries=entries)


class TestRankFrequency:
    def test_ordering_and_tie_break(self):
        freq = build_frequency([["b"] * 4 + ["d"] * 4 + ["a"] * 9 + ["c"]])
        rf = rank_frequency(freq)
        assert [(e.rank, e.token, e.count) for e in rf.entries] == [
            (1, "a", 9),
            (2, "b", 4),
            (3, "d", 4),
            (4, "c", 1),
        ]

    def test_counts_non_increasing(self):
        rng = np.random.default_rng(3)
        tokens = [f"t{i}" for i in rng.integers(0, 40, size=500)]
        rf = rank_frequency(build_frequency([tokens]))
        counts = rf.counts()
        assert np.all(counts[:-1] >= counts[1:])
        assert [e.rank for e in rf.entries] == list(range(1, len(rf) + 1))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rank_frequency(build_frequency([]))


class TestFit:
    def test_recovers_exact_exponent(self):
        for alpha in (0.5, 1.0, 1.7):
            fit = fit_zipf(exact_power_law(alpha, 60))
            assert fit.alpha == pytest.approx(alpha, abs=1e-10)
            assert fit.log_log_r2 == pytest.approx(1.0, abs=1e-12)
            assert fit.n_points == 60

    def test_max_rank_truncates(self):
        rf = exact_power_law(1.0, 60)
        fit = fit_zipf(rf, max_rank=10)
        assert fit.n_points == 10

    def test_r2_degrades_on_noise_but_stays_in_range(self):
        rng = np.random.default_rng(0)
        entries = tuple(
            RankEntry(rank=r, token=f"w{r}", count=float(c))
            for r, c in enumerate(
                sorted(rng.integers(1, 1000, size=50), reverse=True), start=1
            )
        )
        fit = fit_zipf(RankFrequency(entries=entries))
        assert 0.0 <= fit.log_log_r2 <= 1.0

    def test_degenerate_inputs_rejected(self):
        one = RankFrequency(entries=(RankEntry(1, "a", 5),))
        with pytest.raises(ValueError):
            fit_zipf(one)
        flat = RankFrequency(
            entries=tuple(RankEntry(r, f"w{r}", 7) for r in range(1, 5))
        )
        with pytest.raises(ValueError, match="distinct"):
            fit_zipf(flat)
        zero = RankFrequency(entries=(RankEntry(1, "a", 5), RankEntry(2, "b", 0)))
        with pytest.raises(ValueError, match="positive"):
            fit_zipf(zero)

    def test_zipf_expected(self):
        assert zipf_expected(1, 1.0, 100.0) == 100.0
        assert zipf_expected(4, 1.0, 100.0) == 25.0
        assert zipf_expected(2, 2.0, 100.0) == 25.0
        with pytest.raises(ValueError):
            zipf_expected(0, 1.0, 100.0)


class TestExport:
    def test_csv_schema_and_anchor(self, tmp_path):
        freq = build_frequency([["a"] * 50 + ["b"] * 25 + ["c"] * 10 + ["d"] * 5])
        rf = rank_frequency(freq)
        fit = fit_zipf(rf)
        path = tmp_path / "zipf.csv"
        export_plot_data(rf, fit, path, top_n=3)
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["rank", "token", "observed_count", "zipf_expected_count"]
        assert len(rows) == 4
        assert rows[1][:3] == ["1", "a", "50"]
        # expected curve is anchored at rank 1
        assert float(rows[1][3]) == 50.0
        for row in rows[1:]:
            r = int(row[0])
            assert float(row[3]) == pytest.approx(
                zipf_expected(r, fit.alpha, 50.0), rel=1e-12
            )

    def test_top_n_validation(self, tmp_path):
        rf = exact_power_law(1.0, 5)
        fit = ZipfFit(alpha=1.0, log_log_r2=1.0, n_points=5)
        with pytest.raises(ValueError):
            export_plot_data(rf, fit, tmp_path / "x.csv", top_n=0)


class TestEndToEnd:
    def test_sampled_corpus_alpha_close(self):
        # moderate-size check; the tight sweep lives in the acceptance suite
        from acosonet.corpus import filler_vocabulary, sample_zipf_tokens

        rng = np.random.default_rng(7)
        vocab = filler_vocabulary(150, rng)
        tokens = sample_zipf_tokens(30_000, vocab, 1.0, rng)
        fit = fit_zipf(rank_frequency(build_frequency([tokens])))
        assert math.isfinite(fit.alpha)
        assert abs(fit.alpha - 1.0) < 0.15
