#!/usr/bin/env python3
"""Throughput comparison of the compiled and pure-NumPy Monte-Carlo kernels.

Runs the same deterministic cells on both backends, checks the error counts
agree, and prints trials/second. Usage:

    python benchmarks/compare_backends.py [--trials N] [--threads T]
"""

import argparse
import time

from gkpdec.montecarlo import available_backends, estimate_pl

CELLS = (
    ("square", "med", 0.004),
    ("square", "cor-med", 0.004),
    ("d4", "med", 0.008),
    ("d4", "cor-med", 0.008),
)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}   trials/cell: {args.trials}")
    header = f"{'code':10s} {'decoder':8s} {'sigma2/2pi':>10s}"
    for b in backends:
        header += f" {b + ' trials/s':>18s}"
    header += f" {'speedup':>8s} {'agree':>6s}"
    print(header)

    for code, decoder, s2 in CELLS:
        rates = {}
        counts = {}
        for backend in backends:
            t0 = time.perf_counter()
            est = estimate_pl(code, decoder, s2, args.trials, 12345,
                              backend=backend, threads=args.threads)
            dt = time.perf_counter() - t0
            rates[backend] = args.trials / dt
            counts[backend] = est.errors
        line = f"{code:10s} {decoder:8s} {s2:10.4f}"
        for b in backends:
            line += f" {rates[b]:18.0f}"
        if len(backends) == 2:
            line += f" {rates['compiled'] / rates['python']:8.1f}x"
            line += f" {str(len(set(counts.values())) == 1):>6s}"
        print(line)


if __name__ == "__main__":
    main()
