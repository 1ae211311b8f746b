"""Multi-core architecture model: capacities, connectivity, hop distances."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


def distances_from_adjacency(adjacency) -> np.ndarray:
    """All-pairs shortest hop counts of an undirected connected graph.

    Plain BFS from every source; rejects asymmetric or disconnected
    inputs.
    """
    adj = np.asarray(adjacency, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise InvalidInputError("adjacency must be a square matrix")
    if not np.array_equal(adj, adj.T):
        raise InvalidInputError("adjacency must be symmetric")
    n = adj.shape[0]
    neighbors = [np.flatnonzero(adj[i]) for i in range(n)]
    dist = np.full((n, n), -1, dtype=np.int64)
    for src in range(n):
        dist[src, src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in neighbors[u]:
                if dist[src, v] < 0:
                    dist[src, v] = dist[src, u] + 1
                    queue.append(v)
    if (dist < 0).any():
        raise InvalidInputError("core graph is disconnected")
    return dist


@dataclass(frozen=True, eq=False)
class Topology:
    """C cores with per-core capacities and an inter-core hop-distance matrix."""

    capacities: tuple[int, ...]
    distances: np.ndarray
    adjacency: np.ndarray | None = None
    name: str = "custom"

    def __post_init__(self):
        caps = tuple(int(p) for p in self.capacities)
        if len(caps) < 1 or any(p < 1 for p in caps):
            raise InvalidInputError("capacities must be positive")
        object.__setattr__(self, "capacities", caps)
        dist = np.asarray(self.distances, dtype=np.int64)
        c = len(caps)
        if dist.shape != (c, c):
            raise InvalidInputError("distance matrix shape mismatch")
        if not np.array_equal(dist, dist.T):
            raise InvalidInputError("distance matrix must be symmetric")
        if (np.diag(dist) != 0).any():
            raise InvalidInputError("distance matrix diagonal must be zero")
        off = dist[~np.eye(c, dtype=bool)]
        if off.size and (off <= 0).any():
            raise InvalidInputError("off-diagonal distances must be positive")
        dist.setflags(write=False)
        object.__setattr__(self, "distances", dist)
        if self.adjacency is not None:
            adj = np.asarray(self.adjacency, dtype=bool)
            adj.setflags(write=False)
            object.__setattr__(self, "adjacency", adj)

    @property
    def num_cores(self) -> int:
        return len(self.capacities)

    @property
    def total_capacity(self) -> int:
        return sum(self.capacities)

    @property
    def max_distance(self) -> int:
        return int(self.distances.max())

    def capacities_array(self) -> np.ndarray:
        return np.asarray(self.capacities, dtype=np.int64)

    def to_dict(self) -> dict:
        data = {
            "capacities": list(self.capacities),
            "distances": self.distances.tolist(),
        }
        if self.adjacency is not None:
            data["adjacency"] = self.adjacency.astype(int).tolist()
        return data

    @classmethod
    def from_dict(cls, data: dict, name: str = "custom") -> "Topology":
        try:
            caps = tuple(int(p) for p in data["capacities"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad topology payload: {exc}") from exc
        adjacency = None
        if "distances" in data:
            distances = np.asarray(data["distances"], dtype=np.int64)
            if "adjacency" in data:
                adjacency = np.asarray(data["adjacency"], dtype=bool)
        elif "adjacency" in data:
            adjacency = np.asarray(data["adjacency"], dtype=bool)
            distances = distances_from_adjacency(adjacency)
        else:
            raise InvalidInputError(
                "topology needs either 'distances' or 'adjacency'"
            )
        return cls(caps, distances, adjacency, name=name)


def make_a2a(num_cores: int, capacity: int) -> Topology:
    """All-to-all connected cores with uniform capacity."""
    if num_cores < 1 or capacity < 1:
        raise InvalidInputError("num_cores and capacity must be positive")
    dist = np.ones((num_cores, num_cores), dtype=np.int64) - np.eye(
        num_cores, dtype=np.int64
    )
    adj = dist.astype(bool)
    return Topology(
        (capacity,) * num_cores, dist, adj, name=f"a2a:{num_cores}:{capacity}"
    )


def make_grid(rows: int, cols: int, capacity: int) -> Topology:
    """4-neighbor mesh of cores with uniform capacity; BFS hop distances."""
    if rows < 1 or cols < 1 or capacity < 1:
        raise InvalidInputError("rows, cols and capacity must be positive")
    n = rows * cols
    adj = np.zeros((n, n), dtype=bool)
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                adj[i, i + 1] = adj[i + 1, i] = True
            if r + 1 < rows:
                adj[i, i + cols] = adj[i + cols, i] = True
    if n == 1:
        dist = np.zeros((1, 1), dtype=np.int64)
    else:
        dist = distances_from_adjacency(adj)
    return Topology(
        (capacity,) * n, dist, adj, name=f"grid:{rows}x{cols}:{capacity}"
    )


def parse_topology_spec(spec: str) -> Topology:
    """Parse a CLI preset (``a2a:C:P`` or ``grid:RxK:P``) or a JSON file path."""
    parts = spec.split(":")
    if parts[0] == "a2a" and len(parts) == 3:
        try:
            return make_a2a(int(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise InvalidInputError(f"bad a2a spec {spec!r}") from exc
    if parts[0] == "grid" and len(parts) == 3:
        try:
            rows, cols = (int(x) for x in parts[1].split("x"))
            return make_grid(rows, cols, int(parts[2]))
        except ValueError as exc:
            raise InvalidInputError(f"bad grid spec {spec!r}") from exc
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(
            f"{spec!r} is neither a topology preset nor a readable file"
        ) from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad topology JSON in {spec!r}: {exc}") from exc
    return Topology.from_dict(data, name=spec)
