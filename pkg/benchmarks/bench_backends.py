#!/usr/bin/env python3
"""Time the numba and numpy stepping backends against each other.

Covers the two hot shapes: one long trajectory (simulation/export) and a
batch of 256 endpoint runs sharing parameters (one codebook build). Bitwise
equality between the backends is asserted while timing, since the protocol
depends on it.

Usage: python benchmarks/bench_backends.py [--steps N] [--batch-steps N]
       [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rosslercrypt import kernels

PARAMS = (0.2, 0.2, 5.7)
INIT = (0.0001, 0.0001, 0.0001)
BYTE_X0S = np.array([(b + 1) / 1024.0 for b in range(256)])


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--steps", type=int, default=100_000,
                        help="steps in the single-trajectory benchmark")
    parser.add_argument("--batch-steps", type=int, default=1000,
                        help="steps per entry in the 256-entry batch benchmark")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    names = kernels.available_backends()
    backends = [kernels.get_backend(name) for name in names]
    if len(backends) < 2:
        print("only one backend available; timing it alone")

    # Warm up (JIT compilation happens here, outside the timed region).
    for be in backends:
        be.run_endpoint(*PARAMS, *INIT, 0.1, 10)
        be.run_trajectory(*PARAMS, *INIT, 0.1, 10)
        be.run_batch(*PARAMS, BYTE_X0S, 0.0001, 0.0001, 0.1, 10)

    print(f"{'benchmark':<34}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")

    rows = [
        (
            f"endpoint, {args.steps} steps",
            lambda be: be.run_endpoint(*PARAMS, *INIT, 0.1, args.steps),
        ),
        (
            f"trajectory, {args.steps} steps",
            lambda be: be.run_trajectory(*PARAMS, *INIT, 0.1, args.steps),
        ),
        (
            f"batch 256 x {args.batch_steps} steps",
            lambda be: be.run_batch(
                *PARAMS, BYTE_X0S, 0.0001, 0.0001, 0.1, args.batch_steps
            ),
        ),
    ]
    for label, runner in rows:
        timings = []
        results = []
        for be in backends:
            t, result = best_of(args.repeats, lambda be=be: runner(be))
            timings.append(t)
            results.append(result)
        if len(results) == 2:
            first, second = results
            if isinstance(first, tuple) and isinstance(first[0], np.ndarray):
                assert first[0].tobytes() == second[0].tobytes(), "backend mismatch"
            elif isinstance(first, tuple):
                assert first == second, "backend mismatch"
        line = f"{label:<34}" + "".join(f"{t * 1e3:>10.2f}ms" for t in timings)
        if len(timings) == 2:
            line += f"{timings[1] / timings[0]:>9.1f}x"
        print(line)

    if len(backends) == 2:
        print("\nbitwise equality between backends verified on every row")


if __name__ == "__main__":
    main()
