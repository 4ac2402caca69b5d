"""Benchmark the compiled convolution kernels against the numpy fallback.

Runs the forward and backward kernels on realistic shapes (default: 50
tokens, 300-dim embeddings, 32 filters per width) and prints per-call
timings for whichever backends are importable.

Usage: python benchmarks/bench_kernels.py [--len N] [--dim N] [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from acosonet import _kernels_py

try:
    from acosonet import _kernels_cy
except ImportError:
    _kernels_cy = None


def bench_backend(mod, name: str, args) -> list[tuple[str, str, float]]:
    rng = np.random.default_rng(0)
    emb = rng.standard_normal((args.len, args.dim))
    rows = []
    for w in args.widths:
        filters = rng.standard_normal((args.filters, w, args.dim))
        bias = rng.standard_normal(args.filters)
        pooled, argmax = mod.conv_pool_forward(emb, filters, bias)
        grad_z = np.where(pooled > 0, rng.standard_normal(args.filters), 0.0)

        start = time.perf_counter()
        for _ in range(args.repeats):
            mod.conv_pool_forward(emb, filters, bias)
        fwd = (time.perf_counter() - start) / args.repeats

        start = time.perf_counter()
        for _ in range(args.repeats):
            mod.conv_pool_backward(emb, filters, argmax, grad_z, True)
        bwd = (time.perf_counter() - start) / args.repeats

        rows.append((name, f"forward w={w}", fwd))
        rows.append((name, f"backward w={w}", bwd))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--len", type=int, default=50, help="sentence length (default: 50)")
    parser.add_argument("--dim", type=int, default=300, help="embedding dim (default: 300)")
    parser.add_argument("--filters", type=int, default=32, help="filters per width")
    parser.add_argument(
        "--widths", type=int, nargs="+", default=[2, 3, 4], help="window widths"
    )
    parser.add_argument("--repeats", type=int, default=2000, help="calls per measurement")
    args = parser.parse_args()

    print(
        f"shapes: len={args.len} dim={args.dim} filters={args.filters} "
        f"widths={args.widths} ({args.repeats} calls each)\n"
    )
    results = {"python": bench_backend(_kernels_py, "python", args)}
    if _kernels_cy is not None:
        results["cython"] = bench_backend(_kernels_cy, "cython", args)
    else:
        print("cython backend not built; showing numpy fallback only\n")

    print(f"{'kernel':<16}", end="")
    for name in results:
        print(f"{name + ' (us)':>14}", end="")
    if len(results) == 2:
        print(f"{'speedup':>10}", end="")
    print()

    n_rows = len(next(iter(results.values())))
    for i in range(n_rows):
        label = next(iter(results.values()))[i][1]
        print(f"{label:<16}", end="")
        times = []
        for name in results:
            t = results[name][i][2]
            times.append(t)
            print(f"{t * 1e6:>14.1f}", end="")
        if len(times) == 2:
            print(f"{times[0] / times[1]:>9.2f}x", end="")
        print()


if __name__ == "__main__":
    main()
