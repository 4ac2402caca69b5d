"""Spanish cyberbullying text classification.

Corpus tooling (ingestion, normalization, keyword-based synthesis),
frequency-ranked vocabularies with Zipf-law validation, pretrained
word-embedding loading, and a from-scratch convolutional sentence
classifier with a reproducible cross-validation harness.
"""

from .corpus import (
    BULLYING,
    CLEAN,
    KeywordSet,
    LabeledText,
    PreprocessConfig,
    default_bullying_keywords,
    default_clean_keywords,
    default_stopwords,
    generate_synthetic_corpus,
    keyword_filter,
    load_corpus,
    preprocess,
    save_corpus,
)
from .crossval import (
    Checkpoint,
    CrossValReport,
    IterationReport,
    TrainConfig,
    cross_validate,
    evaluate,
    fit,
    load_checkpoint,
    run_iteration,
    save_checkpoint,
    select_best_checkpoint,
    split_train_test,
    write_selection_report,
    write_success_report,
)
from .embeddings import EmbeddingMatrix, WordVectorStore, build_embedding_matrix, load_word_vectors
from .errors import (
    CheckpointFormatError,
    CorpusFormatError,
    EmbeddingFormatError,
    PipelineError,
    TrainingDiverged,
)
from .kernels import BACKEND
from .model import (
    ModelConfig,
    ModelParams,
    backward,
    bce_loss,
    forward,
    init_model,
    numerical_gradient,
    predict,
    train_step,
)
from .vocab import (
    EncodedDataset,
    FrequencyTable,
    Vocabulary,
    build_frequency,
    build_vocabulary,
    encode_dataset,
    encode_sequence,
)
from .zipf import RankFrequency, ZipfFit, fit_zipf, rank_frequency

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BULLYING",
    "CLEAN",
    "Checkpoint",
    "CheckpointFormatError",
    "CorpusFormatError",
    "CrossValReport",
    "EmbeddingFormatError",
    "EmbeddingMatrix",
    "EncodedDataset",
    "FrequencyTable",
    "IterationReport",
    "KeywordSet",
    "LabeledText",
    "ModelConfig",
    "ModelParams",
    "PipelineError",
    "PreprocessConfig",
    "RankFrequency",
    "TrainConfig",
    "TrainingDiverged",
    "Vocabulary",
    "WordVectorStore",
    "ZipfFit",
    "backward",
    "bce_loss",
    "build_embedding_matrix",
    "build_frequency",
    "build_vocabulary",
    "cross_validate",
    "default_bullying_keywords",
    "default_clean_keywords",
    "default_stopwords",
    "encode_dataset",
    "encode_sequence",
    "evaluate",
    "fit",
    "fit_zipf",
    "forward",
    "generate_synthetic_corpus",
    "init_model",
    "keyword_filter",
    "load_checkpoint",
    "load_corpus",
    "load_word_vectors",
    "numerical_gradient",
    "predict",
    "preprocess",
    "rank_frequency",
    "run_iteration",
    "save_checkpoint",
    "save_corpus",
    "select_best_checkpoint",
    "split_train_test",
    "train_step",
    "write_selection_report",
    "write_success_report",
]
