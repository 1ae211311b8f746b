"""Exact minimum-transfer solver for tiny instances.

Enumerates every capacity- and colocation-valid per-slice assignment,
then runs dynamic programming over slices with hop-distance transition
costs.  Guarded: per-slice assignment counts above the limit or more
than MAX_SLICES slices are rejected.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .allocation import Allocation
from .circuit import SlicedCircuit
from .errors import InfeasibleError, OracleGuardError
from .topology import Topology

MAX_ASSIGNMENTS = 100_000
MAX_SLICES = 6


def enumerate_valid_slice_assignments(
    slice_gates, num_qubits: int, topo: Topology, guard: int = MAX_ASSIGNMENTS
) -> np.ndarray:
    """All qubit->core maps satisfying capacity and colocation for one slice.

    Returned as an (n, Q) int array in lexicographic row order.
    """
    friends: dict[int, int] = {}
    for q1, q2 in slice_gates:
        friends[q1] = q2
        friends[q2] = q1

    caps = list(topo.capacities)
    num_cores = topo.num_cores
    current = np.zeros(num_qubits, dtype=np.int64)
    out: list[np.ndarray] = []

    def rec(q: int):
        if q == num_qubits:
            out.append(current.copy())
            if len(out) > guard:
                raise OracleGuardError(
                    f"more than {guard} valid assignments in one slice"
                )
            return
        partner = friends.get(q)
        if partner is not None and partner < q:
            c = current[partner]
            if caps[c] >= 1:
                caps[c] -= 1
                current[q] = c
                rec(q + 1)
                caps[c] += 1
            return
        for c in range(num_cores):
            if caps[c] >= 1:
                caps[c] -= 1
                current[q] = c
                rec(q + 1)
                caps[c] += 1

    rec(0)
    return np.asarray(out, dtype=np.int64).reshape(len(out), num_qubits)


def solve_optimal(sliced: SlicedCircuit, topo: Topology) -> tuple[Allocation, int]:
    """Globally optimal allocation by DP over per-slice assignments.

    Ties are broken toward the lexicographically smallest allocation.
    """
    if sliced.num_slices > MAX_SLICES:
        raise OracleGuardError(
            f"{sliced.num_slices} slices exceed the guard of {MAX_SLICES}"
        )
    q = sliced.num_qubits
    if sliced.num_slices == 0:
        return Allocation(np.zeros((0, q), dtype=np.int64)), 0

    layers = [
        enumerate_valid_slice_assignments(sl, q, topo) for sl in sliced.slices
    ]
    for t, layer in enumerate(layers):
        if layer.shape[0] == 0:
            raise InfeasibleError(f"slice {t} admits no valid assignment")

    num_slices = sliced.num_slices
    dist = topo.distances
    # cost-to-go from each assignment of slice t to the end
    togo = [None] * num_slices
    togo[-1] = np.zeros(layers[-1].shape[0], dtype=np.int64)
    for t in range(num_slices - 2, -1, -1):
        trans = kernels.transition_matrix(layers[t], layers[t + 1], dist)
        togo[t] = (trans + togo[t + 1][None, :]).min(axis=1)

    optimum = int(togo[0].min())
    # forward pass: smallest assignment index achieving the optimum at
    # each step gives the lexicographically smallest allocation
    assignment = np.zeros((num_slices, q), dtype=np.int64)
    idx = int(np.flatnonzero(togo[0] == optimum)[0])
    assignment[0] = layers[0][idx]
    remaining = optimum
    for t in range(1, num_slices):
        trans = kernels.transition_matrix(
            layers[t - 1][idx : idx + 1], layers[t], dist
        )[0]
        totals = trans + togo[t]
        idx = int(np.flatnonzero(totals == remaining)[0])
        assignment[t] = layers[t][idx]
        remaining -= int(trans[idx])
    return Allocation(assignment), optimum
