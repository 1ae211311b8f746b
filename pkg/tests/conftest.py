import itertools

import numpy as np
import pytest

from mcqmap import Circuit


def random_circuit_raw(rng, max_qubits=12, max_gates=40):
    """Unstructured random gate list (no slice-count guarantees)."""
    q = int(rng.integers(2, max_qubits + 1))
    n = int(rng.integers(0, max_gates + 1))
    gates = []
    for _ in range(n):
        a, b = rng.choice(q, size=2, replace=False)
        gates.append((int(a), int(b)))
    return Circuit(q, tuple(gates))


def brute_force_slices(circuit):
    """Literal transcription of the backward-scan slicing procedure,
    independent of the production implementation."""
    slices = []
    for q1, q2 in circuit.gates:
        placed = False
        for t in range(len(slices) - 1, -2, -1):
            if t == -1 or any(q1 in g or q2 in g for g in slices[t]):
                target = t + 1
                if target == len(slices):
                    slices.append([])
                slices[target].append((q1, q2))
                placed = True
                break
        assert placed
    return [tuple(s) for s in slices]


def brute_force_valid(assignment, sliced, topo):
    """Direct check of the capacity and colocation constraints."""
    caps = topo.capacities
    for t in range(sliced.num_slices):
        loads = [0] * topo.num_cores
        for q in range(sliced.num_qubits):
            loads[assignment[t][q]] += 1
        if any(loads[c] > caps[c] for c in range(topo.num_cores)):
            return False
        for q1, q2 in sliced.slices[t]:
            if assignment[t][q1] != assignment[t][q2]:
                return False
    return True


def all_assignment_rows(num_qubits, num_cores):
    return itertools.product(range(num_cores), repeat=num_qubits)


def enumerate_matchings(num_qubits):
    """All non-empty sets of pairwise-disjoint qubit pairs."""
    pairs = list(itertools.combinations(range(num_qubits), 2))
    results = []

    def rec(start, used, chosen):
        for i in range(start, len(pairs)):
            a, b = pairs[i]
            if a in used or b in used:
                continue
            nxt = chosen + [pairs[i]]
            results.append(tuple(nxt))
            rec(i + 1, used | {a, b}, nxt)

    rec(0, set(), [])
    return results


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
