"""Timing comparison of the compiled kernels against their numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from mcqmap import generate_random_circuit, kernels, make_grid, slice_circuit
from mcqmap.blackbox import PriorityProblem


def timeit(fn, args, repeat):
    fn(*args)  # warm-up (includes JIT compilation)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    topo = make_grid(2, 5, 10)
    dist = topo.distances

    print(f"numba enabled: {kernels.NUMBA_ENABLED}")
    rows = []

    assign = rng.integers(0, 10, size=(500, 100))
    rows.append((
        "transfer_cost (500x100)",
        timeit(kernels.transfer_cost, (assign, dist), args.repeat),
        timeit(kernels.transfer_cost_numpy, (assign, dist), args.repeat),
    ))

    a = rng.integers(0, 10, size=(200, 100))
    b = rng.integers(0, 10, size=(200, 100))
    rows.append((
        "transition_matrix (200x200x100)",
        timeit(kernels.transition_matrix, (a, b, dist), args.repeat),
        timeit(kernels.transition_matrix_numpy, (a, b, dist), args.repeat),
    ))

    sliced = slice_circuit(generate_random_circuit(100, 30, (1, 50), seed=1))
    problem = PriorityProblem(sliced, topo)
    genome = rng.standard_normal(problem.shape)
    decode_args = (genome, problem._friends, topo.num_cores, 10)
    rows.append((
        "decode_priorities (30x100)",
        timeit(kernels.decode_priorities_raw, decode_args, args.repeat),
        timeit(kernels.decode_priorities_numpy, decode_args, args.repeat),
    ))

    print(f"{'kernel':<34}{'active':>12}{'fallback':>12}{'speedup':>10}")
    for name, active, fallback in rows:
        print(f"{name:<34}{active * 1e3:>10.3f}ms{fallback * 1e3:>10.3f}ms"
              f"{fallback / active:>9.1f}x")


if __name__ == "__main__":
    main()
