"""Allocation matrix, constraint checking, cost, and analytic bounds."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import SlicedCircuit
from .errors import InvalidInputError
from .topology import Topology


@dataclass(frozen=True, eq=False)
class Allocation:
    """T x Q matrix: entry (t, q) is the core of qubit q during slice t."""

    assignment: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int64)
        if arr.ndim != 2:
            raise InvalidInputError("assignment must be a 2-D matrix")
        if arr.size and arr.min() < 0:
            raise InvalidInputError("core indices must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)

    @property
    def num_slices(self) -> int:
        return self.assignment.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.assignment.shape[1]

    def to_dict(self) -> dict:
        return {"assignment": self.assignment.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Allocation":
        try:
            return cls(np.asarray(data["assignment"], dtype=np.int64))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad allocation payload: {exc}") from exc


@dataclass(frozen=True)
class ValidityReport:
    """Every capacity and gate-colocation violation of an allocation."""

    capacity_violations: tuple = ()
    friendship_violations: tuple = ()

    @property
    def is_valid(self) -> bool:
        return not self.capacity_violations and not self.friendship_violations


def validate(alloc: Allocation, sliced: SlicedCircuit, topo: Topology) -> ValidityReport:
    """Check core capacities and gate colocation for every slice."""
    arr = alloc.assignment
    if arr.shape != (sliced.num_slices, sliced.num_qubits):
        raise InvalidInputError(
            f"allocation shape {arr.shape} does not match circuit "
            f"({sliced.num_slices} slices, {sliced.num_qubits} qubits)"
        )
    if arr.size and arr.max() >= topo.num_cores:
        raise InvalidInputError("allocation references a core outside the topology")

    caps = topo.capacities_array()
    cap_viol = []
    friend_viol = []
    for t in range(sliced.num_slices):
        loads = np.bincount(arr[t], minlength=topo.num_cores)
        for c in np.flatnonzero(loads > caps):
            cap_viol.append((t, int(c), int(loads[c]), int(caps[c])))
        for q1, q2 in sliced.slices[t]:
            if arr[t, q1] != arr[t, q2]:
                friend_viol.append((t, (q1, q2)))
    return ValidityReport(tuple(cap_viol), tuple(friend_viol))


def cost(alloc: Allocation, topo: Topology) -> int:
    """Total hop-weighted state transfers between consecutive slices."""
    if alloc.assignment.size and alloc.assignment.max() >= topo.num_cores:
        raise InvalidInputError("allocation references a core outside the topology")
    if alloc.num_slices <= 1:
        return 0
    return int(kernels.transfer_cost(alloc.assignment, topo.distances))


def upper_bound(num_slices: int, num_qubits: int, topo: Topology) -> int:
    """Worst case: every qubit hops to the farthest core at every slice."""
    if num_slices < 1:
        raise InvalidInputError("num_slices must be >= 1")
    return (num_slices - 1) * num_qubits * topo.max_distance


def chunking_overhead_bound(num_chunks: int, num_qubits: int, topo: Topology) -> int:
    """Worst-case junction overhead of mapping a circuit in ``num_chunks`` pieces."""
    return upper_bound(num_chunks, num_qubits, topo)


def transfer_trace(alloc: Allocation, topo: Topology) -> list[tuple[int, int, int, int, int]]:
    """All nonzero qubit moves as (slice_transition, qubit, src, dst, hops).

    The hop column sums to ``cost(alloc, topo)``.
    """
    arr = alloc.assignment
    rows = []
    for t in range(1, alloc.num_slices):
        moved = np.flatnonzero(arr[t] != arr[t - 1])
        for q in moved:
            src, dst = int(arr[t - 1, q]), int(arr[t, q])
            rows.append((t, int(q), src, dst, int(topo.distances[src, dst])))
    return rows


def write_trace_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "q", "src", "dst", "hops"])
        writer.writerows(rows)


def read_allocation(path) -> Allocation:
    with open(path, encoding="utf-8") as fh:
        return Allocation.from_dict(json.load(fh))


def write_allocation(alloc: Allocation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(alloc.to_dict(), fh)
