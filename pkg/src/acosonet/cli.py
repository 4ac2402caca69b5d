"""Command-line front door for the pipeline.

One subcommand per phase: corpus synthesis, preprocessing, vocabulary
construction, rank/frequency analysis, training, cross-validation, and
batch prediction. Every artifact is written to a file (atomically) or to
stdout; diagnostics go to stderr. Exit codes: 0 success, 1 domain error,
2 usage error. All configuration travels through flags, never environment
variables, so identical invocations are reproducible.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from .corpus import (
    LabeledText,
    PreprocessConfig,
    default_bullying_keywords,
    default_clean_keywords,
    default_stopwords,
    generate_synthetic_corpus,
    load_corpus,
    load_stopwords,
    preprocess,
    save_corpus,
)
from .crossval import (
    TrainConfig,
    cross_validate,
    fit,
    load_checkpoint,
    save_checkpoint,
    select_best_checkpoint,
    write_selection_report,
    write_success_report,
)
from .embeddings import build_embedding_matrix, load_word_vectors
from .errors import PipelineError
from .io_utils import atomic_open
from .model import ModelConfig, forward
from .vocab import (
    DEFAULT_MAX_LEN,
    Vocabulary,
    build_frequency,
    build_vocabulary,
    encode_dataset,
    encode_sequence,
)
from .zipf import export_plot_data, fit_zipf, rank_frequency


def _widths(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad width list {text!r}, expected e.g. 2,3,4")
    if not parts:
        raise argparse.ArgumentTypeError("width list must be non-empty")
    return parts


def _add_preprocess_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--fold-accents",
        action="store_true",
        help="strip diacritics after cleaning (default: keep them)",
    )
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--stopwords",
        metavar="FILE",
        help="stop word list, one per line (default: bundled Spanish list)",
    )
    group.add_argument(
        "--no-stopwords", action="store_true", help="disable stop word removal"
    )


def _preprocess_config(args: argparse.Namespace) -> PreprocessConfig:
    if args.no_stopwords:
        stop = frozenset()
    elif args.stopwords:
        stop = load_stopwords(args.stopwords)
    else:
        stop = default_stopwords()
    return PreprocessConfig(stopwords=stop, fold_accents=args.fold_accents)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=300, help="embedding dimension (default: 300)")
    p.add_argument(
        "--max-len",
        type=int,
        default=DEFAULT_MAX_LEN,
        help=f"tokens kept per text (default: {DEFAULT_MAX_LEN})",
    )
    p.add_argument(
        "--widths",
        type=_widths,
        default=(2, 3, 4),
        metavar="W1,W2,...",
        help="convolution window widths (default: 2,3,4)",
    )
    p.add_argument(
        "--filters", type=int, default=32, help="filters per window width (default: 32)"
    )
    p.add_argument("--lr", type=float, default=1e-3, help="learning rate (default: 0.001)")
    p.add_argument("--batch-size", type=int, default=32, help="mini-batch size (default: 32)")
    p.add_argument(
        "--fine-tune-embeddings",
        action="store_true",
        help="update embedding rows during training (default: frozen)",
    )


def _model_config(args: argparse.Namespace, seed: int = 0) -> ModelConfig:
    return ModelConfig(
        max_len=args.max_len,
        dim=args.dim,
        filter_widths=args.widths,
        filters_per_width=args.filters,
        learning_rate=args.lr,
        fine_tune_embeddings=args.fine_tune_embeddings,
        seed=seed,
    )


def _load_embedding_matrix(args: argparse.Namespace, vocab: Vocabulary):
    store = load_word_vectors(args.embeddings, args.dim)
    matrix = build_embedding_matrix(vocab, store)
    print(
        f"embeddings: {len(store)} vectors, vocabulary coverage {matrix.coverage:.1%}",
        file=sys.stderr,
    )
    return matrix


def _out_stream(path: str | None):
    """Context manager for --out PATH with stdout fallback."""
    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdout)
    return atomic_open(Path(path))


# --- subcommands ----------------------------------------------------------


def _cmd_synth(args: argparse.Namespace) -> int:
    records = generate_synthetic_corpus(
        args.bullying,
        args.clean,
        default_bullying_keywords(),
        default_clean_keywords(),
        filler_vocab_size=args.filler_vocab,
        zipf_alpha=args.alpha,
        seed=args.seed,
    )
    save_corpus(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


def _cmd_preprocess(args: argparse.Namespace) -> int:
    config = _preprocess_config(args)
    records = load_corpus(args.corpus)
    cleaned = [
        LabeledText(id=r.id, text=" ".join(preprocess(r.text, config)), label=r.label)
        for r in records
    ]
    if args.out:
        save_corpus(cleaned, args.out)
        print(f"wrote {len(cleaned)} records to {args.out}", file=sys.stderr)
    else:
        for rec in cleaned:
            sys.stdout.write(f"{rec.id}\t{rec.label}\t{rec.text}\n")
    return 0


def _cmd_vocab(args: argparse.Namespace) -> int:
    config = _preprocess_config(args)
    records = load_corpus(args.corpus)
    freq = build_frequency([preprocess(r.text, config) for r in records])
    vocab = build_vocabulary(freq, max_size=args.max_vocab)
    vocab.save(args.out)
    print(f"vocabulary: {vocab.size} types from {len(records)} records", file=sys.stderr)
    return 0


def _cmd_zipf(args: argparse.Namespace) -> int:
    config = _preprocess_config(args)
    records = load_corpus(args.corpus)
    freq = build_frequency([preprocess(r.text, config) for r in records])
    rf = rank_frequency(freq)
    zfit = fit_zipf(rf, max_rank=args.max_rank)
    export_plot_data(rf, zfit, args.out, top_n=min(args.top, len(rf)))
    print(
        f"alpha={zfit.alpha:.6f} log_log_r2={zfit.log_log_r2:.6f} n_points={zfit.n_points}"
    )
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    pre_config = _preprocess_config(args)
    records = load_corpus(args.corpus)
    vocab = Vocabulary.load(args.vocab)
    dataset = encode_dataset(records, pre_config, vocab, max_len=args.max_len)
    model_config = _model_config(args)
    emb = _load_embedding_matrix(args, vocab)
    checkpoints = fit(
        dataset,
        model_config,
        emb,
        epochs=args.epochs,
        seed=args.seed,
        batch_size=args.batch_size,
    )
    for cp in checkpoints:
        print(
            f"epoch {cp.epoch}/{args.epochs}: accuracy={cp.train_accuracy:.4f} "
            f"loss={cp.train_loss:.6f}",
            file=sys.stderr,
        )
    best = select_best_checkpoint(checkpoints)
    save_checkpoint(best, args.out)
    print(
        f"saved epoch-{best.epoch} model (accuracy={best.train_accuracy:.4f}) to {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_crossval(args: argparse.Namespace) -> int:
    pre_config = _preprocess_config(args)
    records = load_corpus(args.corpus)
    freq = build_frequency([preprocess(r.text, pre_config) for r in records])
    vocab = build_vocabulary(freq, max_size=args.max_vocab)
    dataset = encode_dataset(records, pre_config, vocab, max_len=args.max_len)
    model_config = _model_config(args)
    emb = _load_embedding_matrix(args, vocab)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_config = TrainConfig(
        iterations=args.iterations,
        epochs=args.epochs,
        train_fraction=args.train_fraction,
        batch_size=args.batch_size,
        seed=args.seed,
    )

    def progress(rep):
        cp = rep.selected
        print(
            f"iteration {cp.iteration}: selected epoch {cp.epoch} "
            f"(accuracy={cp.train_accuracy:.4f}, loss={cp.train_loss:.6f}), "
            f"test success {rep.test_success_pct:.2f}%",
            file=sys.stderr,
        )

    report = cross_validate(
        dataset,
        emb,
        model_config,
        train_config,
        checkpoint_dir=out_dir,
        on_iteration=progress,
    )
    write_selection_report(report, out_dir / "selection.csv")
    write_success_report(report, out_dir / "success.csv")
    print(f"average test success: {report.average_success_pct:.2f}%")
    print(f"reports and checkpoints in {out_dir}", file=sys.stderr)
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    pre_config = _preprocess_config(args)
    vocab = Vocabulary.load(args.vocab)
    cp = load_checkpoint(args.checkpoint)
    params = cp.params
    if args.input and args.input != "-":
        lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    else:
        lines = sys.stdin.read().splitlines()
    with _out_stream(args.out) as fh:
        for line in lines:
            x = encode_sequence(
                preprocess(line, pre_config), vocab, params.config.max_len
            )
            prob = forward(params, x)
            label = 1 if prob >= 0.5 else 0
            fh.write(f"{label},{prob!r}\n")
    return 0


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acosonet",
        description="Spanish cyberbullying text classification pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("synth", help="generate a labeled synthetic corpus")
    p.add_argument("--bullying", type=int, required=True, help="number of bullying records")
    p.add_argument("--clean", type=int, required=True, help="number of clean records")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default: 0)")
    p.add_argument("--out", required=True, metavar="FILE", help="corpus CSV to write")
    p.add_argument(
        "--filler-vocab",
        type=int,
        default=400,
        help="size of the generated filler vocabulary (default: 400)",
    )
    p.add_argument(
        "--alpha", type=float, default=1.0, help="Zipf exponent for filler (default: 1.0)"
    )
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("preprocess", help="normalize and tokenize a corpus")
    p.add_argument("--corpus", required=True, metavar="FILE", help="corpus CSV to read")
    p.add_argument(
        "--out", metavar="FILE", help="cleaned corpus CSV (default: TSV to stdout)"
    )
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("vocab", help="build a frequency-ranked vocabulary")
    p.add_argument("--corpus", required=True, metavar="FILE", help="corpus CSV to read")
    p.add_argument("--out", required=True, metavar="FILE", help="vocabulary TSV to write")
    p.add_argument(
        "--max-vocab", type=int, default=None, help="cap on vocabulary size (default: none)"
    )
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_vocab)

    p = sub.add_parser("zipf", help="fit a rank/frequency power law and export plot data")
    p.add_argument("--corpus", required=True, metavar="FILE", help="corpus CSV to read")
    p.add_argument("--out", required=True, metavar="FILE", help="plot-data CSV to write")
    p.add_argument("--top", type=int, default=100, help="ranks to export (default: 100)")
    p.add_argument(
        "--max-rank",
        type=int,
        default=None,
        help="fit only the first N ranks (default: all)",
    )
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_zipf)

    p = sub.add_parser("train", help="train on a full corpus and save the best model")
    p.add_argument("--corpus", required=True, metavar="FILE", help="corpus CSV to read")
    p.add_argument("--vocab", required=True, metavar="FILE", help="vocabulary TSV to read")
    p.add_argument(
        "--embeddings", required=True, metavar="FILE", help="word2vec text-format vectors"
    )
    p.add_argument("--out", required=True, metavar="FILE", help="checkpoint file to write")
    p.add_argument("--epochs", type=int, default=8, help="training epochs (default: 8)")
    p.add_argument("--seed", type=int, default=0, help="training seed (default: 0)")
    _add_model_flags(p)
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser(
        "crossval", help="multi-iteration split/train/evaluate with reports"
    )
    p.add_argument("--corpus", required=True, metavar="FILE", help="corpus CSV to read")
    p.add_argument(
        "--embeddings", required=True, metavar="FILE", help="word2vec text-format vectors"
    )
    p.add_argument("--iterations", type=int, default=4, help="iterations (default: 4)")
    p.add_argument("--epochs", type=int, default=8, help="epochs per iteration (default: 8)")
    p.add_argument(
        "--train-fraction",
        type=float,
        default=0.9,
        help="fraction of data used for training (default: 0.9)",
    )
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument(
        "--out-dir",
        default="crossval_out",
        metavar="DIR",
        help="directory for reports and checkpoints (default: crossval_out)",
    )
    p.add_argument(
        "--max-vocab", type=int, default=None, help="cap on vocabulary size (default: none)"
    )
    _add_model_flags(p)
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_crossval)

    p = sub.add_parser("predict", help="score texts with a saved model")
    p.add_argument("--checkpoint", required=True, metavar="FILE", help="model checkpoint")
    p.add_argument("--vocab", required=True, metavar="FILE", help="vocabulary TSV to read")
    p.add_argument(
        "--input", metavar="FILE", help="texts, one per line (default: stdin)"
    )
    p.add_argument(
        "--out", metavar="FILE", help="label,probability lines (default: stdout)"
    )
    _add_preprocess_flags(p)
    p.set_defaults(func=_cmd_predict)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
