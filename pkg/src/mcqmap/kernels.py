"""Hot numeric kernels with optional numba acceleration.

Every kernel has a pure-numpy implementation; when numba is importable
and ``MCQMAP_NO_NUMBA`` is unset, the loop variants are JIT-compiled and
used instead.  ``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MCQMAP_NO_NUMBA", "") not in ("", "0")
HAVE_NUMBA = False
if not _DISABLED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dep in practice
        pass

NUMBA_ENABLED = HAVE_NUMBA and not _DISABLED


# ---------------------------------------------------------------- transfer cost


def transfer_cost_numpy(assignment: np.ndarray, distances: np.ndarray) -> int:
    """Sum of hop distances moved by each qubit between consecutive slices."""
    if assignment.shape[0] <= 1:
        return 0
    return int(distances[assignment[:-1], assignment[1:]].sum())


def _transfer_cost_loop(assignment, distances):
    total = 0
    for t in range(1, assignment.shape[0]):
        for q in range(assignment.shape[1]):
            total += distances[assignment[t - 1, q], assignment[t, q]]
    return total


# ------------------------------------------------- slice-to-slice cost matrix


def transition_matrix_numpy(a_from: np.ndarray, a_to: np.ndarray,
                            distances: np.ndarray) -> np.ndarray:
    """Cost of moving from every row of ``a_from`` to every row of ``a_to``."""
    return distances[a_from[:, None, :], a_to[None, :, :]].sum(axis=2)


def _transition_matrix_loop(a_from, a_to, distances):
    n1, q = a_from.shape
    n2 = a_to.shape[0]
    out = np.zeros((n1, n2), dtype=np.int64)
    for i in range(n1):
        for j in range(n2):
            c = 0
            for k in range(q):
                c += distances[a_from[i, k], a_to[j, k]]
            out[i, j] = c
    return out


# ------------------------------------------------------- priority decoding


def _decode_priorities_loop(priorities, friends, num_cores, capacity):
    """Fill cores in index order by descending priority, pulling gate partners.

    ``priorities`` is (T, P); ``friends[t, p]`` is p's gate partner in
    slice t or -1.  A core slot is left unfilled when only qubits with a
    still-unallocated partner remain and a single slot is free.
    Returns (T, P) core indices with -1 marking undecodable positions.
    """
    num_slices, num_phys = priorities.shape
    out = np.full((num_slices, num_phys), -1, dtype=np.int64)
    for t in range(num_slices):
        pr = priorities[t]
        alloc = out[t]
        for c in range(num_cores):
            r = capacity
            while r > 0:
                best = -1
                for p in range(num_phys):
                    if alloc[p] >= 0:
                        continue
                    f = friends[t, p]
                    if r == 1 and f >= 0 and alloc[f] < 0:
                        continue
                    if best < 0 or pr[p] > pr[best]:
                        best = p
                if best < 0:
                    break
                alloc[best] = c
                r -= 1
                f = friends[t, best]
                if f >= 0 and alloc[f] < 0:
                    alloc[f] = c
                    r -= 1
    return out


decode_priorities_numpy = _decode_priorities_loop

if NUMBA_ENABLED:
    transfer_cost = njit(cache=True)(_transfer_cost_loop)
    transition_matrix = njit(cache=True)(_transition_matrix_loop)
    decode_priorities_raw = njit(cache=True)(_decode_priorities_loop)
else:
    transfer_cost = transfer_cost_numpy
    transition_matrix = transition_matrix_numpy
    decode_priorities_raw = _decode_priorities_loop
