"""Corpus loading, preprocessing, keyword matching, and synthesis."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acosonet.corpus import (
    BULLYING,
    CLEAN,
    KeywordSet,
    LabeledText,
    PreprocessConfig,
    default_bullying_keywords,
    default_clean_keywords,
    default_stopwords,
    filler_vocabulary,
    generate_synthetic_corpus,
    keyword_filter,
    load_corpus,
    load_keywords,
    load_stopwords,
    match_tokens,
    preprocess,
    sample_zipf_tokens,
    save_corpus,
    strip_accents,
    zipf_rank_probabilities,
)
from acosonet.errors import CorpusFormatError

PLAIN = PreprocessConfig()
STOP = PreprocessConfig(stopwords=frozenset({"que", "de", "la", "el"}))


class TestPreprocess:
    def test_lowercases_and_splits(self):
        assert preprocess("Hola Mundo", PLAIN) == ["hola", "mundo"]

    def test_drops_urls_and_mentions(self):
        assert preprocess("mira https://t.co/abc @juan ya", PLAIN) == ["mira", "ya"]
        assert preprocess("www.ejemplo.com texto", PLAIN) == ["texto"]
        assert preprocess("http sin nada", PLAIN) == ["sin", "nada"]

    def test_non_letters_become_separators(self):
        assert preprocess("hola,mundo!123bien", PLAIN) == ["hola", "mundo", "bien"]

    def test_keeps_spanish_letters(self):
        assert preprocess("niño añejo", PLAIN) == ["niño", "añejo"]
        assert preprocess("CAFÉ", PLAIN) == ["café"]

    def test_accent_folding(self):
        config = PreprocessConfig(fold_accents=True)
        assert preprocess("CAFÉ niño", config) == ["cafe", "nino"]

    def test_stopword_removal_after_cleaning(self):
        assert preprocess("¡QUE pasa!", STOP) == ["pasa"]

    def test_digit_only_input_empty(self):
        assert preprocess("123 456 !!!", PLAIN) == []

    def test_url_fragments_minted_by_cleaning_still_die(self):
        # "0http" survives the token-level URL rule, but the punctuation
        # pass splits off a bare "http"; a second URL pass must remove it
        # or preprocessing would not be idempotent.
        assert preprocess("0http sigue", PLAIN) == ["sigue"]
        # the split leaves "www" as its own token, which then dies; "bar"
        # no longer starts with it and survives
        assert preprocess("foo.www.bar x", PLAIN) == ["foo", "bar", "x"]

    @given(st.text(alphabet=st.characters(codec="utf-8"), max_size=80))
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, text):
        for config in (PLAIN, STOP, PreprocessConfig(fold_accents=True)):
            once = preprocess(text, config)
            again = preprocess(" ".join(once), config)
            assert again == once

    @given(st.text(alphabet=st.characters(codec="utf-8"), max_size=80))
    @settings(max_examples=200, deadline=None)
    def test_output_tokens_are_clean(self, text):
        for token in preprocess(text, STOP):
            assert token
            assert token == token.lower()
            assert token.isalpha()
            assert token not in STOP.stopwords

    def test_strip_accents(self):
        assert strip_accents("áéíóúüñ") == "aeiouun"
        assert strip_accents("ya") == "ya"


class TestKeywordMatching:
    def test_match_tokens_ignores_punctuation_and_case(self):
        assert match_tokens("¡Te ODIO!!") == ["te", "odio"]

    def test_filter_finds_contiguous_phrase(self):
        kws = KeywordSet(phrases=("te odio",), label=BULLYING)
        corpus = [
            LabeledText("a", "pues te odio mucho", 1),
            LabeledText("b", "te lo digo: odio esto", 0),
            LabeledText("c", "TE ODIO", 1),
        ]
        assert [r.id for r in keyword_filter(corpus, kws)] == ["a", "c"]

    def test_filter_single_token_phrase(self):
        kws = KeywordSet(phrases=("gay",), label=BULLYING)
        corpus = [
            LabeledText("a", "eso es gay", 1),
            LabeledText("b", "gaya ciencia", 0),
        ]
        assert [r.id for r in keyword_filter(corpus, kws)] == ["a"]

    def test_filter_empty_keyword_set_rejected(self):
        with pytest.raises(ValueError):
            keyword_filter([], KeywordSet(phrases=(), label=BULLYING))

    def test_keyword_set_validation(self):
        with pytest.raises(ValueError):
            KeywordSet(phrases=("Mayus",), label=1)
        with pytest.raises(ValueError):
            KeywordSet(phrases=("dup", "dup"), label=1)
        with pytest.raises(ValueError):
            KeywordSet(phrases=("",), label=1)


class TestCorpusIO:
    def test_round_trip_with_awkward_text(self, tmp_path):
        records = [
            LabeledText("t1", 'dijo "hola, tú" y se fue', 0),
            LabeledText("t2", "linea\ncon salto", 1),
            LabeledText("t3", "", 0),
        ]
        path = tmp_path / "corpus.csv"
        save_corpus(records, path)
        assert load_corpus(path) == records

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,text,label\na,hola,0\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="header"):
            load_corpus(path)

    def test_rejects_wrong_column_count_with_row_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,label,text\na,0,hola\nb,1\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="row 3"):
            load_corpus(path)

    def test_rejects_bad_label_and_duplicate_id(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,label,text\na,2,hola\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="label"):
            load_corpus(path)
        path.write_text("id,label,text\na,0,hola\na,1,otra\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="duplicate"):
            load_corpus(path)

    def test_rejects_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="empty"):
            load_corpus(path)

    def test_list_files_skip_comments_and_blanks(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("# comment\n\nuno\ndos palabras\n", encoding="utf-8")
        kws = load_keywords(path, label=1)
        assert kws.phrases == ("uno", "dos palabras")

    def test_stopword_file_is_single_tokens(self, tmp_path):
        path = tmp_path / "stops.txt"
        path.write_text("# comment\nuno\n\ndos\n", encoding="utf-8")
        assert load_stopwords(path) == frozenset({"uno", "dos"})
        path.write_text("dos palabras\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="whitespace"):
            load_stopwords(path)


class TestBundledData:
    def test_keyword_sets_load(self):
        pos = default_bullying_keywords()
        neg = default_clean_keywords()
        assert len(pos.phrases) == 30
        assert len(neg.phrases) == 21
        assert pos.label == BULLYING and neg.label == CLEAN

    def test_stopwords_do_not_swallow_keywords(self):
        # Removing a stop word that appears inside a keyword phrase would
        # make planted phrases undetectable after preprocessing.
        stops = default_stopwords()
        keyword_tokens = default_bullying_keywords().tokens() | default_clean_keywords().tokens()
        assert stops.isdisjoint(keyword_tokens)
        assert len(stops) > 100

    def test_keyword_phrases_survive_preprocessing(self):
        config = PreprocessConfig(stopwords=default_stopwords())
        for kws in (default_bullying_keywords(), default_clean_keywords()):
            for phrase in kws.phrases:
                assert preprocess(phrase, config) == phrase.split()


class TestSynthesis:
    def test_zipf_rank_probabilities(self):
        probs = zipf_rank_probabilities(4, 1.0)
        expected = np.array([1, 1 / 2, 1 / 3, 1 / 4])
        assert np.allclose(probs, expected / expected.sum())
        assert probs[0] > probs[1] > probs[2] > probs[3]

    def test_filler_vocabulary_distinct_and_excludes(self):
        rng = np.random.default_rng(0)
        words = filler_vocabulary(200, rng, exclude=frozenset({"gato"}))
        assert len(set(words)) == 200
        assert "gato" not in words
        assert all(w.isalpha() and w == w.lower() for w in words)

    def test_sample_zipf_tokens_deterministic(self):
        vocab = ["a", "b", "c"]
        t1 = sample_zipf_tokens(50, vocab, 1.0, np.random.default_rng(5))
        t2 = sample_zipf_tokens(50, vocab, 1.0, np.random.default_rng(5))
        assert t1 == t2

    def test_generate_deterministic_and_structured(self):
        pos, neg = default_bullying_keywords(), default_clean_keywords()
        a = generate_synthetic_corpus(20, 30, pos, neg, seed=4)
        b = generate_synthetic_corpus(20, 30, pos, neg, seed=4)
        assert a == b
        assert len(a) == 50
        assert [r.label for r in a] == [1] * 20 + [0] * 30
        assert [r.id for r in a] == [f"syn{i:06d}" for i in range(50)]
        c = generate_synthetic_corpus(20, 30, pos, neg, seed=5)
        assert c != a

    def test_generated_records_carry_their_class_phrase(self):
        pos, neg = default_bullying_keywords(), default_clean_keywords()
        records = generate_synthetic_corpus(40, 60, pos, neg, seed=11)
        hits_pos = {r.id for r in keyword_filter(records, pos)}
        hits_neg = {r.id for r in keyword_filter(records, neg)}
        assert hits_pos == {r.id for r in records if r.label == 1}
        assert hits_neg == {r.id for r in records if r.label == 0}

    def test_empty_request(self):
        pos, neg = default_bullying_keywords(), default_clean_keywords()
        assert generate_synthetic_corpus(0, 0, pos, neg) == []
        with pytest.raises(ValueError):
            generate_synthetic_corpus(-1, 0, pos, neg)
