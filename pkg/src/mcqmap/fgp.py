"""Lookahead-weighted partitioning baseline (fine-grained OEE / relaxed OEE).

Each slice gets an interaction-affinity graph: pairs gated in the slice
itself have infinite weight, future interactions contribute 2**(t - m).
A pairwise-exchange refinement (Kernighan-Lin style, best cumulative
exchange prefix per pass) is run per slice starting from the previous
slice's partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import Allocation
from .circuit import SlicedCircuit
from .errors import InfeasibleError, InvalidInputError
from .topology import Topology


@dataclass(frozen=True, eq=False)
class LookaheadGraph:
    """Symmetric qubit-affinity graph for one slice.

    ``finite`` holds the decaying future-interaction weights; ``infinite``
    flags same-slice gate pairs, which dominate every finite weight.
    """

    finite: np.ndarray
    infinite: np.ndarray

    @property
    def num_qubits(self) -> int:
        return self.finite.shape[0]


def finite_lookahead_matrices(sliced: SlicedCircuit) -> list[np.ndarray]:
    """Finite lookahead weights for every slice, via the backward recurrence
    W_t = (W_{t+1} + A_{t+1}) / 2 where A is the slice adjacency matrix."""
    q = sliced.num_qubits
    mats: list[np.ndarray] = [None] * sliced.num_slices
    nxt = np.zeros((q, q))
    for t in range(sliced.num_slices - 1, -1, -1):
        mats[t] = nxt
        adj = np.zeros((q, q))
        for q1, q2 in sliced.slices[t]:
            adj[q1, q2] = adj[q2, q1] = 1.0
        nxt = 0.5 * (nxt + adj)
    return mats


def lookahead_weights(sliced: SlicedCircuit, t: int) -> LookaheadGraph:
    """Affinity graph of slice ``t``: infinite for same-slice partners,
    sum of 2**(t-m) over future interactions otherwise."""
    if not 0 <= t < sliced.num_slices:
        raise InvalidInputError(f"slice index {t} out of range")
    finite = finite_lookahead_matrices(sliced)[t].copy()
    infinite = np.zeros((sliced.num_qubits, sliced.num_qubits), dtype=bool)
    for q1, q2 in sliced.slices[t]:
        infinite[q1, q2] = infinite[q2, q1] = True
    return LookaheadGraph(finite, infinite)


def _cut_metrics(graph: LookaheadGraph, membership: np.ndarray) -> tuple[int, float]:
    diff = membership[:, None] != membership[None, :]
    inf_cut = int(np.count_nonzero(graph.infinite & diff)) // 2
    fin_cut = float(graph.finite[diff].sum()) / 2.0
    return inf_cut, fin_cut


def _gain_matrices(graph: LookaheadGraph, membership: np.ndarray, num_blocks: int):
    """conn[v, b] = total (finite / infinite) weight from v into block b."""
    onehot = np.zeros((membership.shape[0], num_blocks))
    onehot[np.arange(membership.shape[0]), membership] = 1.0
    fin_conn = graph.finite @ onehot
    inf_conn = graph.infinite.astype(np.float64) @ onehot
    return fin_conn, inf_conn


def _one_pass(graph: LookaheadGraph, membership: np.ndarray, num_blocks: int):
    """One exchange pass: greedy best-swap sequence with locking, returns
    the best cumulative-gain prefix of swaps (possibly empty)."""
    n = membership.shape[0]
    work = membership.copy()
    fin_w = graph.finite
    inf_w = graph.infinite.astype(np.float64)
    fin_conn, inf_conn = _gain_matrices(graph, work, num_blocks)
    locked = np.zeros(n, dtype=bool)
    swaps: list[tuple[int, int]] = []
    cum_inf: list[float] = []
    cum_fin: list[float] = []
    run_inf = 0.0
    run_fin = 0.0
    for _ in range(n // 2):
        best = None
        best_gain = None
        for i in range(n):
            if locked[i]:
                continue
            bi = work[i]
            for j in range(i + 1, n):
                if locked[j] or work[j] == bi:
                    continue
                bj = work[j]
                g_inf = (
                    inf_conn[i, bj] - inf_conn[i, bi]
                    + inf_conn[j, bi] - inf_conn[j, bj]
                    - 2.0 * inf_w[i, j]
                )
                g_fin = (
                    fin_conn[i, bj] - fin_conn[i, bi]
                    + fin_conn[j, bi] - fin_conn[j, bj]
                    - 2.0 * fin_w[i, j]
                )
                gain = (g_inf, g_fin)
                if best_gain is None or gain > best_gain:
                    best_gain = gain
                    best = (i, j)
        if best is None:
            break
        i, j = best
        bi, bj = work[i], work[j]
        # update block connections for the swap
        fin_conn[:, bi] += fin_w[:, j] - fin_w[:, i]
        fin_conn[:, bj] += fin_w[:, i] - fin_w[:, j]
        inf_conn[:, bi] += inf_w[:, j] - inf_w[:, i]
        inf_conn[:, bj] += inf_w[:, i] - inf_w[:, j]
        work[i], work[j] = bj, bi
        locked[i] = locked[j] = True
        run_inf += best_gain[0]
        run_fin += best_gain[1]
        swaps.append((i, j))
        cum_inf.append(run_inf)
        cum_fin.append(run_fin)
    if not swaps:
        return []
    best_k = max(range(len(swaps)), key=lambda k: (cum_inf[k], cum_fin[k]))
    if (cum_inf[best_k], cum_fin[best_k]) <= (0.0, 0.0):
        return []
    return swaps[: best_k + 1]


def oee_partition(
    graph: LookaheadGraph,
    initial: np.ndarray,
    block_sizes,
    relaxed: bool = False,
    max_passes: int | None = None,
) -> np.ndarray:
    """Refine ``initial`` (vertex -> block) by pairwise exchanges.

    Full mode runs passes until no positive cumulative gain remains and
    requires the result to uncut every infinite edge.  Relaxed mode stops
    as soon as no infinite edge is cut.  Block sizes are preserved.
    """
    membership = np.asarray(initial, dtype=np.int64).copy()
    n = membership.shape[0]
    sizes = np.asarray(block_sizes, dtype=np.int64)
    if graph.num_qubits != n:
        raise InvalidInputError("partition size does not match graph")
    if not np.array_equal(np.bincount(membership, minlength=sizes.shape[0]), sizes):
        raise InvalidInputError("initial partition violates block sizes")
    if max_passes is None:
        max_passes = max(n * n, 1)

    num_blocks = sizes.shape[0]
    inf_cut, _ = _cut_metrics(graph, membership)
    if relaxed and inf_cut == 0:
        return membership
    for _ in range(max_passes):
        swaps = _one_pass(graph, membership, num_blocks)
        if not swaps:
            break
        for i, j in swaps:
            membership[i], membership[j] = membership[j], membership[i]
            if relaxed:
                inf_cut, _ = _cut_metrics(graph, membership)
                if inf_cut == 0:
                    return membership
    inf_cut, _ = _cut_metrics(graph, membership)
    if inf_cut > 0:
        raise InfeasibleError(
            "pairwise-exchange refinement could not colocate all gate pairs"
        )
    return membership


def random_valid_partition(
    sliced: SlicedCircuit, t: int, topo: Topology, rng: np.random.Generator
) -> np.ndarray:
    """Seeded random slice partition: gate pairs first (two slots each),
    then the remaining qubits into whatever capacity is left."""
    caps = topo.capacities_array().copy()
    membership = np.full(sliced.num_qubits, -1, dtype=np.int64)
    pairs = list(sliced.slices[t])
    rng.shuffle(pairs)
    for q1, q2 in pairs:
        options = np.flatnonzero(caps >= 2)
        if options.size == 0:
            raise InfeasibleError("cannot place a gate pair in any core")
        c = int(rng.choice(options))
        membership[q1] = membership[q2] = c
        caps[c] -= 2
    singles = np.flatnonzero(membership < 0)
    rng.shuffle(singles)
    for q in singles:
        options = np.flatnonzero(caps >= 1)
        if options.size == 0:
            raise InfeasibleError("cores are full before all qubits are placed")
        c = int(rng.choice(options))
        membership[q] = c
        caps[c] -= 1
    return membership


def fgp_map(
    sliced: SlicedCircuit, topo: Topology, relaxed: bool = False, seed=None
) -> Allocation:
    """Map a sliced circuit: random valid start, then per-slice exchange
    refinement of the previous partition under lookahead weights."""
    if topo.total_capacity < sliced.num_qubits:
        raise InfeasibleError("total capacity below qubit count")
    rng = np.random.default_rng(seed)
    num_slices, q = sliced.num_slices, sliced.num_qubits
    assignment = np.zeros((num_slices, q), dtype=np.int64)
    if num_slices == 0:
        return Allocation(assignment.reshape(0, q))

    # pad with idle placeholder vertices so blocks exactly match capacities
    n = topo.total_capacity
    sizes = topo.capacities_array()
    finite_all = finite_lookahead_matrices(sliced)

    membership = np.full(n, -1, dtype=np.int64)
    first = random_valid_partition(sliced, 0, topo, rng)
    membership[:q] = first
    free = sizes - np.bincount(first, minlength=topo.num_cores)
    placeholder = q
    for c in range(topo.num_cores):
        for _ in range(int(free[c])):
            membership[placeholder] = c
            placeholder += 1
    assignment[0] = membership[:q]

    for t in range(1, num_slices):
        finite = np.zeros((n, n))
        finite[:q, :q] = finite_all[t]
        infinite = np.zeros((n, n), dtype=bool)
        for q1, q2 in sliced.slices[t]:
            infinite[q1, q2] = infinite[q2, q1] = True
        graph = LookaheadGraph(finite, infinite)
        membership = oee_partition(graph, membership, sizes, relaxed=relaxed)
        assignment[t] = membership[:q]
    return Allocation(assignment)
