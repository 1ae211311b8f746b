"""Masked autoregressive allocation constructor with pluggable core scorers.

Qubits are decoded slice by slice in ascending index order.  Per-step
action masks enforce core capacity, gate colocation (with capacity
reservation for the partner qubit), and a pairing-feasibility test
sum_c floor(capacity_c / 2) >= remaining pairs, so every rollout that
starts from a feasible instance completes into a valid allocation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocation import Allocation
from .circuit import SlicedCircuit
from .errors import InfeasibleError, InvalidInputError
from .fgp import finite_lookahead_matrices
from .topology import Topology


@dataclass
class DecoderState:
    """Mutable per-step context of a construction rollout."""

    slice_index: int
    qubit_index: int
    remaining_capacity: np.ndarray
    pending_friend: dict[int, int]
    remaining_pairs: int
    previous_assignment: np.ndarray | None
    current_row: np.ndarray
    friends: dict[int, int] = field(default_factory=dict)


class CoreScorer:
    """Scores cores for the qubit under decode; higher is better.

    Masked entries of the returned vector are ignored by the caller.
    """

    def score(self, state: DecoderState, mask: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def valid_cores(state: DecoderState, sliced: SlicedCircuit, topo: Topology) -> np.ndarray:
    """Boolean mask of cores where allocating the current qubit keeps the
    partial solution completable."""
    caps = state.remaining_capacity
    q = state.qubit_index
    g = state.remaining_pairs

    if q in state.pending_friend:
        # second gate endpoint: pinned to its partner's core, capacity
        # was already reserved when the first endpoint was placed
        mask = np.zeros(topo.num_cores, dtype=bool)
        mask[state.pending_friend[q]] = True
        return mask

    friend = state.friends.get(q)
    need = 2 if friend is not None else 1
    g_after = g - 1 if friend is not None else g

    mask = caps >= need
    if mask.any():
        floors = caps // 2
        total_floor = int(floors.sum())
        # pairing feasibility after hypothetically allocating here
        floor_after = total_floor - floors + (caps - need) // 2
        mask &= floor_after >= g_after
    if not mask.any():
        raise InfeasibleError(
            f"no valid core for qubit {q} in slice {state.slice_index}"
        )
    return mask


def _commit(state: DecoderState, core: int) -> None:
    q = state.qubit_index
    if q in state.pending_friend:
        del state.pending_friend[q]
        return
    friend = state.friends.get(q)
    if friend is not None:
        state.remaining_capacity[core] -= 2
        state.pending_friend[friend] = core
        state.remaining_pairs -= 1
    else:
        state.remaining_capacity[core] -= 1


def check_precondition(sliced: SlicedCircuit, topo: Topology) -> None:
    caps = topo.capacities_array()
    if topo.total_capacity < sliced.num_qubits:
        raise InfeasibleError(
            f"{sliced.num_qubits} qubits exceed total capacity {topo.total_capacity}"
        )
    pair_slots = int((caps // 2).sum())
    max_pairs = sliced.max_gates_per_slice()
    if pair_slots < max_pairs:
        raise InfeasibleError(
            f"a slice holds {max_pairs} gates but cores fit only {pair_slots} pairs"
        )


def construct(
    sliced: SlicedCircuit,
    topo: Topology,
    scorer: CoreScorer,
    mode: str = "greedy",
    seed=None,
) -> Allocation:
    """Build a valid allocation slice by slice with the given scorer.

    ``greedy`` picks the argmax score among unmasked cores (ties to the
    lowest core index); ``sample`` draws from a softmax over unmasked
    scores.
    """
    if mode not in ("greedy", "sample"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    check_precondition(sliced, topo)
    rng = np.random.default_rng(seed)

    num_slices, num_qubits = sliced.num_slices, sliced.num_qubits
    assignment = np.zeros((num_slices, num_qubits), dtype=np.int64)
    prev_row: np.ndarray | None = None
    for t in range(num_slices):
        state = DecoderState(
            slice_index=t,
            qubit_index=0,
            remaining_capacity=topo.capacities_array(),
            pending_friend={},
            remaining_pairs=len(sliced.slices[t]),
            previous_assignment=prev_row,
            current_row=np.full(num_qubits, -1, dtype=np.int64),
            friends=sliced.friend_map(t),
        )
        for q in range(num_qubits):
            state.qubit_index = q
            mask = valid_cores(state, sliced, topo)
            scores = np.asarray(scorer.score(state, mask), dtype=np.float64)
            if mode == "greedy":
                scores = np.where(mask, scores, -np.inf)
                core = int(np.argmax(scores))
            else:
                logits = np.where(mask, scores, -np.inf)
                logits = logits - logits.max()
                probs = np.exp(logits)
                probs /= probs.sum()
                core = int(rng.choice(topo.num_cores, p=probs))
            _commit(state, core)
            state.current_row[q] = core
        assignment[t] = state.current_row
        prev_row = assignment[t]
    return Allocation(assignment)


def replay_masks(sliced: SlicedCircuit, topo: Topology, alloc: Allocation) -> list[dict]:
    """Re-derive the per-step action mask along a recorded allocation.

    Used to cross-check external policy implementations against this
    module's masking rules.  Raises if the recorded action was masked.
    """
    if alloc.assignment.shape != (sliced.num_slices, sliced.num_qubits):
        raise InvalidInputError("allocation shape does not match circuit")
    steps = []
    prev_row = None
    for t in range(sliced.num_slices):
        state = DecoderState(
            slice_index=t,
            qubit_index=0,
            remaining_capacity=topo.capacities_array(),
            pending_friend={},
            remaining_pairs=len(sliced.slices[t]),
            previous_assignment=prev_row,
            current_row=np.full(sliced.num_qubits, -1, dtype=np.int64),
            friends=sliced.friend_map(t),
        )
        for q in range(sliced.num_qubits):
            state.qubit_index = q
            mask = valid_cores(state, sliced, topo)
            core = int(alloc.assignment[t, q])
            if not mask[core]:
                raise InvalidInputError(
                    f"recorded action {core} is masked at slice {t}, qubit {q}"
                )
            steps.append({"t": t, "q": q, "mask": mask.astype(int).tolist(),
                          "action": core})
            _commit(state, core)
            state.current_row[q] = core
        prev_row = alloc.assignment[t]
    return steps


class RandomScorer(CoreScorer):
    """Uniform random scores; greedy mode turns this into a uniform pick
    among unmasked cores."""

    def __init__(self, seed=None):
        self._rng = np.random.default_rng(seed)

    def score(self, state: DecoderState, mask: np.ndarray) -> np.ndarray:
        return self._rng.random(mask.shape[0])


class NearestScorer(CoreScorer):
    """Prefers the core closest to the qubit's previous location."""

    def __init__(self, topo: Topology):
        self._dist = topo.distances

    def score(self, state: DecoderState, mask: np.ndarray) -> np.ndarray:
        if state.previous_assignment is None:
            return np.zeros(mask.shape[0])
        prev = state.previous_assignment[state.qubit_index]
        return -self._dist[prev].astype(np.float64)


class LookaheadScorer(CoreScorer):
    """Distance term plus affinity to cores holding near-future partners.

    score(c) = -D[prev(q), c] + lam * sum over qubits already placed in c
    this slice of the exponentially decaying future-interaction weight.
    """

    def __init__(self, topo: Topology, sliced: SlicedCircuit, lam: float = 1.0):
        self._dist = topo.distances
        self._num_cores = topo.num_cores
        self._lam = float(lam)
        self._weights = finite_lookahead_matrices(sliced)

    def score(self, state: DecoderState, mask: np.ndarray) -> np.ndarray:
        scores = np.zeros(self._num_cores)
        if state.previous_assignment is not None:
            prev = state.previous_assignment[state.qubit_index]
            scores -= self._dist[prev]
        if self._lam != 0.0:
            w_row = self._weights[state.slice_index][state.qubit_index]
            placed = np.flatnonzero(state.current_row >= 0)
            if placed.size:
                scores += self._lam * np.bincount(
                    state.current_row[placed],
                    weights=w_row[placed],
                    minlength=self._num_cores,
                )
        return scores


def scorer_random(seed=None) -> RandomScorer:
    return RandomScorer(seed)


def scorer_nearest(topo: Topology) -> NearestScorer:
    return NearestScorer(topo)


def scorer_lookahead(topo: Topology, sliced: SlicedCircuit, lam: float = 1.0) -> LookaheadScorer:
    return LookaheadScorer(topo, sliced, lam)
