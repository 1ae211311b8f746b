import numpy as np
import pytest
from scipy.sparse.csgraph import floyd_warshall

from mcqmap import (
    InvalidInputError,
    Topology,
    distances_from_adjacency,
    make_a2a,
    make_grid,
)
from mcqmap.topology import parse_topology_spec


def random_connected_adjacency(rng, n):
    adj = np.zeros((n, n), dtype=bool)
    order = rng.permutation(n)
    for i in range(1, n):  # random spanning tree keeps it connected
        j = order[int(rng.integers(0, i))]
        adj[order[i], j] = adj[j, order[i]] = True
    extra = rng.random((n, n)) < 0.3
    extra = np.triu(extra, 1)
    adj |= extra | extra.T
    return adj


class TestDistances:
    def test_path_graph(self):
        adj = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)
        assert distances_from_adjacency(adj)[0, 2] == 2

    def test_complete_graph(self):
        adj = ~np.eye(4, dtype=bool)
        d = distances_from_adjacency(adj)
        assert (d[~np.eye(4, dtype=bool)] == 1).all()

    def test_disconnected_rejected(self):
        with pytest.raises(InvalidInputError):
            distances_from_adjacency(np.zeros((3, 3), dtype=bool))

    def test_asymmetric_rejected(self):
        adj = np.zeros((2, 2), dtype=bool)
        adj[0, 1] = True
        with pytest.raises(InvalidInputError):
            distances_from_adjacency(adj)

    def test_matches_floyd_warshall(self, rng):
        for n in range(2, 13):
            adj = random_connected_adjacency(rng, n)
            expected = floyd_warshall(adj.astype(float), unweighted=True)
            got = distances_from_adjacency(adj)
            assert np.array_equal(got, expected.astype(np.int64))


class TestPresets:
    def test_a2a_basic(self):
        t = make_a2a(10, 10)
        assert t.num_cores == 10
        off = t.distances[~np.eye(10, dtype=bool)]
        assert (off == 1).all()
        assert t.capacities == (10,) * 10

    def test_a2a_single_core(self):
        assert make_a2a(1, 5).distances.tolist() == [[0]]

    def test_a2a_small(self):
        t = make_a2a(3, 2)
        assert (t.distances[~np.eye(3, dtype=bool)] == 1).all()

    def test_grid_2x5_max_distance(self):
        assert make_grid(2, 5, 10).max_distance == 5

    def test_grid_1x1(self):
        assert make_grid(1, 1, 3).distances.tolist() == [[0]]

    def test_grid_2x2_diagonal(self):
        assert make_grid(2, 2, 1).distances[0, 3] == 2

    def test_grid_matches_adjacency_distances(self):
        t = make_grid(2, 5, 10)
        assert np.array_equal(t.distances, distances_from_adjacency(t.adjacency))

    def test_grid_row_is_path_graph(self):
        t = make_grid(1, 6, 2)
        i, j = np.indices((6, 6))
        assert np.array_equal(t.distances, np.abs(i - j))


class TestSpecsAndValidation:
    def test_parse_a2a(self):
        assert parse_topology_spec("a2a:4:3").capacities == (3, 3, 3, 3)

    def test_parse_grid(self):
        t = parse_topology_spec("grid:2x5:10")
        assert t.num_cores == 10

    def test_parse_bad_spec(self):
        with pytest.raises(InvalidInputError):
            parse_topology_spec("a2a:x:1")

    def test_from_dict_with_adjacency(self):
        t = Topology.from_dict(
            {"capacities": [1, 1, 1], "adjacency": [[0, 1, 0], [1, 0, 1], [0, 1, 0]]}
        )
        assert t.distances[0, 2] == 2

    def test_from_dict_with_distances(self):
        t = Topology.from_dict(
            {"capacities": [2, 2], "distances": [[0, 3], [3, 0]]}
        )
        assert t.max_distance == 3

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(InvalidInputError):
            Topology((1, 1), np.array([[1, 1], [1, 0]]))

    def test_rejects_nonpositive_capacity(self):
        with pytest.raises(InvalidInputError):
            Topology((0,), np.zeros((1, 1), dtype=np.int64))
