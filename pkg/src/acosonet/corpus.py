"""Corpus ingestion, keyword filtering, normalization, and synthesis.

The interchange format for labeled corpora is a UTF-8 CSV with header
``id,label,text`` (label 1 = bullying, 0 = harmless). Keyword and stop-word
lists are plain UTF-8 text, one entry per line, ``#`` comments allowed.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import CorpusFormatError
from .io_utils import atomic_open

BULLYING = 1
CLEAN = 0

CORPUS_HEADER = ("id", "label", "text")


@dataclass(frozen=True)
class LabeledText:
    """One corpus record: a short text with a binary bullying label."""

    id: str
    text: str
    label: int

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class KeywordSet:
    """Ordered list of lowercase keyword phrases targeting one class."""

    phrases: tuple[str, ...]
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"keyword set label must be 0 or 1, got {self.label!r}")
        seen = set()
        for phrase in self.phrases:
            if not phrase or not phrase.strip():
                raise ValueError("keyword phrases must be non-empty")
            if phrase != phrase.lower():
                raise ValueError(f"keyword phrase must be lowercase: {phrase!r}")
            if phrase in seen:
                raise ValueError(f"duplicate keyword phrase: {phrase!r}")
            seen.add(phrase)

    def token_phrases(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(p.split()) for p in self.phrases)

    def tokens(self) -> frozenset[str]:
        """Every individual token appearing in any phrase."""
        return frozenset(tok for p in self.phrases for tok in p.split())


@dataclass(frozen=True)
class PreprocessConfig:
    """Knobs for the text normalization pipeline."""

    stopwords: frozenset[str] = frozenset()
    fold_accents: bool = False
    keep_letters_only: bool = True

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        for word in self.stopwords:
            if any(ch.isspace() for ch in word):
                raise ValueError(f"stop words must not contain whitespace: {word!r}")


def strip_accents(text: str) -> str:
    """Remove combining marks: 'patético' -> 'patetico', 'ñ' -> 'n'."""
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _is_url_token(token: str) -> bool:
    # "https" is covered by the "http" prefix.
    return token.startswith("http") or token.startswith("www")


def preprocess(text: str, config: PreprocessConfig) -> list[str]:
    """Normalize a raw text into a clean token sequence.

    Steps, in order: lowercase; drop whole tokens that start with "http"/
    "www" (links) or "@" (mentions); replace every non-letter character with
    a space (Spanish letters survive); optionally fold accents; split on
    whitespace; drop stop words. The link-token rule is applied once more
    after the punctuation pass so the output is stable: stripping "0http"
    down to "http" must not resurrect a link token, and
    ``preprocess(" ".join(preprocess(t)))`` always equals ``preprocess(t)``.
    """
    text = text.lower()
    kept = [
        tok
        for tok in text.split()
        if not (_is_url_token(tok) or tok.startswith("@"))
    ]
    text = " ".join(kept)
    if config.keep_letters_only:
        text = "".join(ch if ch.isalpha() else " " for ch in text)
    if config.fold_accents:
        text = strip_accents(text)
        if config.keep_letters_only:
            # folding cannot normally introduce non-letters, but keep the
            # letters-only contract airtight for exotic code points
            text = "".join(ch if ch.isalpha() else " " for ch in text)
    return [
        tok
        for tok in text.split()
        if not _is_url_token(tok) and tok not in config.stopwords
    ]


def match_tokens(text: str) -> list[str]:
    """Tokenize a raw text the way the keyword matcher sees it.

    Lowercase, punctuation replaced by spaces, whitespace split. No link,
    mention, or stop-word handling: keyword matching runs on the raw text.
    """
    text = text.lower()
    text = "".join(ch if ch.isalpha() else " " for ch in text)
    return text.split()


def _contains_phrase(tokens: list[str], phrase: tuple[str, ...]) -> bool:
    n, m = len(tokens), len(phrase)
    for start in range(n - m + 1):
        if tuple(tokens[start : start + m]) == phrase:
            return True
    return False


def keyword_filter(corpus: list[LabeledText], keywords: KeywordSet) -> list[LabeledText]:
    """Keep the records containing at least one keyword phrase.

    A phrase matches when it appears as a contiguous run of tokens in the
    lowercased, punctuation-stripped text. Input order is preserved.
    """
    if not keywords.phrases:
        raise ValueError("keyword set must contain at least one phrase")
    phrases = keywords.token_phrases()
    out = []
    for record in corpus:
        tokens = match_tokens(record.text)
        if any(_contains_phrase(tokens, p) for p in phrases):
            out.append(record)
    return out


# ---------------------------------------------------------------------------
# file I/O


def load_corpus(path: str | Path) -> list[LabeledText]:
    """Read a corpus CSV (header ``id,label,text``). Errors name the row."""
    path = Path(path)
    records: list[LabeledText] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusFormatError(f"{path}: empty file, expected header id,label,text")
        if tuple(header) != CORPUS_HEADER:
            raise CorpusFormatError(
                f"{path}: bad header {header!r}, expected id,label,text"
            )
        for row_num, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise CorpusFormatError(
                    f"{path}: row {row_num}: expected 3 columns, got {len(row)}"
                )
            rec_id, label_str, text = row
            if not rec_id:
                raise CorpusFormatError(f"{path}: row {row_num}: empty id")
            if label_str not in ("0", "1"):
                raise CorpusFormatError(
                    f"{path}: row {row_num}: label must be 0 or 1, got {label_str!r}"
                )
            if rec_id in seen_ids:
                raise CorpusFormatError(f"{path}: row {row_num}: duplicate id {rec_id!r}")
            seen_ids.add(rec_id)
            records.append(LabeledText(id=rec_id, text=text, label=int(label_str)))
    return records


def save_corpus(records: list[LabeledText], path: str | Path) -> None:
    """Write a corpus CSV atomically (temp file + rename)."""
    with atomic_open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CORPUS_HEADER)
        for rec in records:
            writer.writerow([rec.id, str(rec.label), rec.text])


def _read_list_file(path: str | Path) -> list[str]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return entries


def load_keywords(path: str | Path, label: int) -> KeywordSet:
    """Read a keyword file: one phrase per line, ``#`` comments allowed."""
    phrases = tuple(_read_list_file(path))
    try:
        return KeywordSet(phrases=phrases, label=label)
    except ValueError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from exc


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: one token per line, ``#`` comments allowed."""
    words = _read_list_file(path)
    for word in words:
        if any(ch.isspace() for ch in word):
            raise CorpusFormatError(f"{path}: stop word contains whitespace: {word!r}")
    return frozenset(words)


def _data_path(name: str) -> Path:
    return Path(resources.files("acosonet").joinpath("data", name))


def default_bullying_keywords() -> KeywordSet:
    return load_keywords(_data_path("keywords_bullying.txt"), label=BULLYING)


def default_clean_keywords() -> KeywordSet:
    return load_keywords(_data_path("keywords_no_bullying.txt"), label=CLEAN)


def default_stopwords() -> frozenset[str]:
    return load_stopwords(_data_path("stopwords_es.txt"))


# ---------------------------------------------------------------------------
# synthetic corpus generation

_CONSONANTS = "bcdfglmnprstvz"
_VOWELS = "aeiou"


def filler_vocabulary(
    size: int, rng: np.random.Generator, exclude: frozenset[str] = frozenset()
) -> list[str]:
    """Generate ``size`` distinct pseudo-Spanish filler words.

    Words are 2-4 consonant+vowel syllables, so they survive preprocessing
    unchanged. Anything in ``exclude`` (e.g. keyword tokens) is skipped.
    """
    words: list[str] = []
    seen: set[str] = set(exclude)
    while len(words) < size:
        n_syll = int(rng.integers(2, 5))
        cons = rng.integers(0, len(_CONSONANTS), size=n_syll)
        vows = rng.integers(0, len(_VOWELS), size=n_syll)
        word = "".join(_CONSONANTS[c] + _VOWELS[v] for c, v in zip(cons, vows))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def zipf_rank_probabilities(size: int, alpha: float) -> np.ndarray:
    """P(rank r) proportional to 1/r^alpha over ranks 1..size."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    weights = np.arange(1, size + 1, dtype=np.float64) ** -alpha
    return weights / weights.sum()


def sample_zipf_tokens(
    n_draws: int, vocabulary: list[str], alpha: float, rng: np.random.Generator
) -> list[str]:
    """Draw tokens from ``vocabulary`` with rank-Zipf(alpha) probabilities.

    Rank 1 is the first vocabulary entry.
    """
    probs = zipf_rank_probabilities(len(vocabulary), alpha)
    picks = rng.choice(len(vocabulary), size=n_draws, p=probs)
    return [vocabulary[i] for i in picks]


def generate_synthetic_corpus(
    n_bullying: int,
    n_clean: int,
    keywords_pos: KeywordSet,
    keywords_neg: KeywordSet,
    filler_vocab_size: int = 400,
    zipf_alpha: float = 1.0,
    seed: int = 0,
) -> list[LabeledText]:
    """Build a labeled corpus with planted keyword phrases and Zipf filler.

    Each text is one phrase from the class-matching keyword set inserted at
    a random position among 3-12 filler tokens drawn rank-Zipf(zipf_alpha)
    from a generated filler vocabulary. Bit-identical for a fixed seed.
    """
    if n_bullying < 0 or n_clean < 0:
        raise ValueError("record counts must be >= 0")
    if n_bullying > 0 and not keywords_pos.phrases:
        raise ValueError("bullying keyword set is empty but n_bullying > 0")
    if n_clean > 0 and not keywords_neg.phrases:
        raise ValueError("clean keyword set is empty but n_clean > 0")
    if n_bullying + n_clean == 0:
        return []

    rng = np.random.default_rng(seed)
    exclude = keywords_pos.tokens() | keywords_neg.tokens()
    fillers = filler_vocabulary(filler_vocab_size, rng, exclude=exclude)
    probs = zipf_rank_probabilities(filler_vocab_size, zipf_alpha)

    records: list[LabeledText] = []

    def emit(count: int, keywords: KeywordSet, label: int) -> None:
        for _ in range(count):
            n_fill = int(rng.integers(3, 13))
            fill_idx = rng.choice(filler_vocab_size, size=n_fill, p=probs)
            tokens = [fillers[i] for i in fill_idx]
            phrase = keywords.phrases[int(rng.integers(0, len(keywords.phrases)))]
            pos = int(rng.integers(0, n_fill + 1))
            tokens[pos:pos] = phrase.split()
            records.append(
                LabeledText(id=f"syn{len(records):06d}", text=" ".join(tokens), label=label)
            )

    emit(n_bullying, keywords_pos, BULLYING)
    emit(n_clean, keywords_neg, CLEAN)
    return records
