"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for domain errors raised by this package."""


class CorpusFormatError(PipelineError):
    """A corpus, keyword, or stop-word file violates its format contract."""


class EmbeddingFormatError(PipelineError):
    """A word-vector file violates the word2vec text format contract."""


class CheckpointFormatError(PipelineError):
    """A checkpoint file is corrupt, truncated, or has the wrong version."""


class TrainingDiverged(PipelineError):
    """Training produced a non-finite loss or gradient."""
