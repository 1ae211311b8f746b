"""Circuit representation, time slicing, and workload generators.

A circuit is an ordered list of 2-qubit gates over a declared number of
logical qubits.  Slicing groups gates into maximal parallel sets: each
slice contains gates acting on pairwise-disjoint qubits, and every gate
is placed as early as possible given program order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

Gate = tuple[int, int]


def _check_gate(gate, num_qubits: int) -> Gate:
    if len(gate) != 2:
        raise InvalidInputError(f"gate {gate!r} must act on exactly 2 qubits")
    q1, q2 = int(gate[0]), int(gate[1])
    if q1 == q2:
        raise InvalidInputError(f"gate {gate!r} uses the same qubit twice")
    if not (0 <= q1 < num_qubits and 0 <= q2 < num_qubits):
        raise InvalidInputError(
            f"gate {gate!r} out of range for {num_qubits} qubits"
        )
    return (q1, q2)


@dataclass(frozen=True)
class Circuit:
    """Ordered 2-qubit gate list over ``num_qubits`` logical qubits.

    Qubit indices are 0-based.  Gate order is program order and is
    preserved by every transformation in the toolkit.
    """

    num_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidInputError("num_qubits must be positive")
        checked = tuple(_check_gate(g, self.num_qubits) for g in self.gates)
        object.__setattr__(self, "gates", checked)

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "gates": [list(g) for g in self.gates],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        try:
            return cls(int(data["num_qubits"]), tuple(map(tuple, data["gates"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad circuit payload: {exc}") from exc


@dataclass(frozen=True)
class SlicedCircuit:
    """A circuit partitioned into parallel time slices.

    Within a slice no qubit appears in more than one gate, and no slice
    is empty.  Concatenating the slices in order restores each qubit's
    gate order from the source circuit.
    """

    num_qubits: int
    slices: tuple[tuple[Gate, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidInputError("num_qubits must be positive")
        normed = []
        for t, sl in enumerate(self.slices):
            if len(sl) == 0:
                raise InvalidInputError(f"slice {t} is empty")
            seen: set[int] = set()
            gates = []
            for g in sl:
                q1, q2 = _check_gate(g, self.num_qubits)
                if q1 in seen or q2 in seen:
                    raise InvalidInputError(
                        f"slice {t} reuses a qubit in gate {g!r}"
                    )
                seen.update((q1, q2))
                gates.append((q1, q2))
            normed.append(tuple(gates))
        object.__setattr__(self, "slices", tuple(normed))

    @property
    def num_slices(self) -> int:
        return len(self.slices)

    @property
    def num_gates(self) -> int:
        return sum(len(s) for s in self.slices)

    def max_gates_per_slice(self) -> int:
        return max((len(s) for s in self.slices), default=0)

    def flatten(self) -> Circuit:
        """Concatenate the slices back into a plain gate list."""
        gates = tuple(g for sl in self.slices for g in sl)
        return Circuit(self.num_qubits, gates)

    def friend_map(self, t: int) -> dict[int, int]:
        """Qubit -> gate partner for slice ``t``."""
        friends: dict[int, int] = {}
        for q1, q2 in self.slices[t]:
            friends[q1] = q2
            friends[q2] = q1
        return friends

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "slices": [[list(g) for g in sl] for sl in self.slices],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SlicedCircuit":
        try:
            slices = tuple(tuple(map(tuple, sl)) for sl in data["slices"])
            return cls(int(data["num_qubits"]), slices)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad sliced-circuit payload: {exc}") from exc


def slice_circuit(circuit: Circuit) -> SlicedCircuit:
    """Group gates into as-soon-as-possible parallel slices.

    Each gate lands one slice after the latest earlier slice that uses
    either of its qubits (slice 0 if no such slice exists).
    """
    last_use = np.full(circuit.num_qubits, -1, dtype=np.int64)
    slices: list[list[Gate]] = []
    for q1, q2 in circuit.gates:
        t = int(max(last_use[q1], last_use[q2])) + 1
        if t == len(slices):
            slices.append([])
        slices[t].append((q1, q2))
        last_use[q1] = t
        last_use[q2] = t
    return SlicedCircuit(circuit.num_qubits, tuple(map(tuple, slices)))


def generate_random_circuit(
    num_qubits: int,
    num_slices: int,
    gates_per_slice: tuple[int, int] = (1, None),
    seed=None,
) -> Circuit:
    """Random circuit whose slicing yields exactly ``num_slices`` slices.

    Built slice by slice: every gate of slice t > 0 shares a qubit with
    slice t-1, so re-slicing reproduces the construction.  The per-slice
    gate count is drawn from ``gates_per_slice`` (upper bound defaults
    to floor(Q/2)) and clamped to what the anchoring rule allows.
    """
    if num_qubits < 2:
        raise InvalidInputError("need at least 2 qubits")
    if num_slices < 0:
        raise InvalidInputError("num_slices must be non-negative")
    lo, hi = gates_per_slice
    if hi is None:
        hi = num_qubits // 2
    if lo < 1 or hi < lo:
        raise InvalidInputError(f"bad gates_per_slice range ({lo}, {hi})")
    if lo > num_qubits // 2:
        raise InvalidInputError(
            f"{lo} disjoint gates impossible with {num_qubits} qubits"
        )
    hi = min(hi, num_qubits // 2)

    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    prev_used: list[int] = []
    for t in range(num_slices):
        k = int(rng.integers(lo, hi + 1))
        if t > 0:
            # each gate anchors on one qubit from the previous slice
            k = min(k, len(prev_used))
        k = max(k, 1)
        if t == 0:
            chosen = rng.choice(num_qubits, size=2 * k, replace=False)
            pairs = [(int(chosen[2 * i]), int(chosen[2 * i + 1])) for i in range(k)]
        else:
            anchors = rng.choice(prev_used, size=k, replace=False)
            free = np.setdiff1d(np.arange(num_qubits), anchors)
            partners = rng.choice(free, size=k, replace=False)
            pairs = [(int(a), int(b)) for a, b in zip(anchors, partners)]
        rng.shuffle(pairs)
        gates.extend(pairs)
        prev_used = sorted({q for g in pairs for q in g})
    return Circuit(num_qubits, tuple(gates))


def generate_all_pairs_circuit(num_qubits: int) -> Circuit:
    """One gate for every qubit pair (i, j), i < j, in lexicographic order.

    Matches the interaction pattern of a QFT-style circuit before
    decomposition: Q(Q-1)/2 gates.
    """
    if num_qubits < 2:
        raise InvalidInputError("need at least 2 qubits")
    gates = tuple(
        (i, j) for i in range(num_qubits) for j in range(i + 1, num_qubits)
    )
    return Circuit(num_qubits, gates)


def generate_chain_circuit(num_qubits: int, rounds: int = 1) -> Circuit:
    """Nearest-neighbor chain (i, i+1) repeated ``rounds`` times."""
    if num_qubits < 2:
        raise InvalidInputError("need at least 2 qubits")
    if rounds < 1:
        raise InvalidInputError("rounds must be >= 1")
    chain = [(i, i + 1) for i in range(num_qubits - 1)]
    return Circuit(num_qubits, tuple(chain * rounds))


def read_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return Circuit.from_dict(json.load(fh))


def write_circuit(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(circuit.to_dict(), fh)


def read_sliced(path) -> SlicedCircuit:
    with open(path, encoding="utf-8") as fh:
        return SlicedCircuit.from_dict(json.load(fh))


def write_sliced(sliced: SlicedCircuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sliced.to_dict(), fh)
