"""Word-vector file parsing and embedding matrix construction."""

import numpy as np
import pytest

from acosonet.embeddings import build_embedding_matrix, load_word_vectors
from acosonet.errors import EmbeddingFormatError
from acosonet.vocab import Vocabulary


class TestLoader:
    def test_plain_file(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("uno 1.0 2.0\ndos -0.5 0.25\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=2)
        assert len(store) == 2
        assert store.dim == 2
        assert np.array_equal(store.vectors["uno"], [1.0, 2.0])
        assert np.array_equal(store.vectors["dos"], [-0.5, 0.25])

    def test_header_file(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("2 3\nuno 1 2 3\ndos 4 5 6\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=3)
        assert len(store) == 2
        assert "2" not in store  # header line is not a word

    def test_header_dimension_mismatch(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("10 300\nuno 1 2\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match="line 1"):
            load_word_vectors(path, expected_dim=2)

    def test_body_dimension_mismatch_reports_line(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("uno 1 2\ndos 3 4\ntres 5\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match="line 3"):
            load_word_vectors(path, expected_dim=2)

    def test_non_numeric_component(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("uno 1 x\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match="line 1"):
            load_word_vectors(path, expected_dim=2)

    def test_non_finite_component(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("uno 1 inf\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match="non-finite"):
            load_word_vectors(path, expected_dim=2)

    def test_duplicates_keep_first(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("uno 1 1\nuno 9 9\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=2)
        assert np.array_equal(store.vectors["uno"], [1.0, 1.0])

    def test_empty_and_blank_lines(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match="no word vectors"):
            load_word_vectors(path, expected_dim=2)
        path.write_text("\nuno 1 2\n\ndos 3 4\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=2)
        assert len(store) == 2


class TestMatrix:
    def vocab(self):
        return Vocabulary(["alto", "bajo", "medio"], [5, 3, 2])

    def store(self, tmp_path):
        path = tmp_path / "vecs.txt"
        # "medio" is deliberately missing from the vector file
        path.write_text("alto 1 2\nbajo 3 4\notros 9 9\n", encoding="utf-8")
        return load_word_vectors(path, expected_dim=2)

    def test_shape_and_reserved_rows(self, tmp_path):
        matrix = build_embedding_matrix(self.vocab(), self.store(tmp_path))
        assert matrix.rows.shape == (5, 2)  # V + padding + OOV
        assert matrix.dim == 2
        assert matrix.vocab_size == 3
        assert matrix.oov_index == 4
        assert np.array_equal(matrix.rows[0], [0.0, 0.0])

    def test_matched_rows_and_oov_mean(self, tmp_path):
        matrix = build_embedding_matrix(self.vocab(), self.store(tmp_path))
        assert np.array_equal(matrix.rows[1], [1.0, 2.0])  # alto
        assert np.array_equal(matrix.rows[2], [3.0, 4.0])  # bajo
        oov = matrix.rows[4]
        assert np.allclose(oov, [2.0, 3.0])  # mean of matched vectors
        assert np.array_equal(matrix.rows[3], oov)  # missing token gets OOV row

    def test_coverage(self, tmp_path):
        matrix = build_embedding_matrix(self.vocab(), self.store(tmp_path))
        assert matrix.coverage == pytest.approx(2 / 3)

    def test_no_matches_gives_zero_oov(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("ajeno 7 7\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=2)
        matrix = build_embedding_matrix(self.vocab(), store)
        assert matrix.coverage == 0.0
        assert np.array_equal(matrix.rows, np.zeros((5, 2)))

    def test_empty_vocabulary(self, tmp_path):
        path = tmp_path / "vecs.txt"
        path.write_text("ajeno 7 7\n", encoding="utf-8")
        store = load_word_vectors(path, expected_dim=2)
        matrix = build_embedding_matrix(Vocabulary([], []), store)
        assert matrix.rows.shape == (2, 2)
        assert matrix.coverage == 0.0

    def test_dim_mismatch_rejected(self, tmp_path):
        store = self.store(tmp_path)
        with pytest.raises(ValueError):
            from acosonet.embeddings import EmbeddingMatrix

            EmbeddingMatrix(rows=np.zeros((3, 2)), coverage=2.0)
        assert store.dim == 2
