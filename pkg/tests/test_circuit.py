import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcqmap import (
    Circuit,
    InvalidInputError,
    SlicedCircuit,
    generate_all_pairs_circuit,
    generate_chain_circuit,
    generate_random_circuit,
    slice_circuit,
)
from conftest import brute_force_slices, random_circuit_raw


class TestCircuitValidation:
    def test_rejects_equal_qubits(self):
        with pytest.raises(InvalidInputError):
            Circuit(3, ((1, 1),))

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            Circuit(3, ((0, 3),))

    def test_rejects_wide_gates(self):
        with pytest.raises(InvalidInputError):
            Circuit(4, ((0, 1, 2),))

    def test_rejects_single_qubit_gates(self):
        with pytest.raises(InvalidInputError):
            Circuit(4, ((0,),))

    def test_json_round_trip(self):
        c = Circuit(4, ((0, 1), (2, 3), (1, 2)))
        assert Circuit.from_dict(json.loads(json.dumps(c.to_dict()))) == c


class TestSlicedInvariants:
    def test_rejects_qubit_reuse_in_slice(self):
        with pytest.raises(InvalidInputError):
            SlicedCircuit(3, (((0, 1), (1, 2)),))

    def test_rejects_empty_slice(self):
        with pytest.raises(InvalidInputError):
            SlicedCircuit(3, (((0, 1),), ()))


class TestSliceCircuit:
    def test_empty_circuit(self):
        assert slice_circuit(Circuit(2, ())).slices == ()

    def test_disjoint_gates_share_slice(self):
        sliced = slice_circuit(Circuit(4, ((0, 1), (2, 3))))
        assert sliced.slices == (((0, 1), (2, 3)),)

    def test_blocking_pushes_to_next_slice(self):
        sliced = slice_circuit(Circuit(4, ((0, 1), (1, 2), (0, 3))))
        assert sliced.slices == (((0, 1),), ((1, 2), (0, 3)))

    def test_matches_backward_scan_reference(self, rng):
        for _ in range(100):
            c = random_circuit_raw(rng)
            assert list(slice_circuit(c).slices) == brute_force_slices(c)

    def test_idempotent_under_flattening(self, rng):
        for _ in range(50):
            sliced = slice_circuit(random_circuit_raw(rng))
            assert slice_circuit(sliced.flatten()).slices == sliced.slices

    def test_per_qubit_order_preserved(self, rng):
        for _ in range(50):
            c = random_circuit_raw(rng)
            sliced = slice_circuit(c)
            flat = sliced.flatten().gates
            for q in range(c.num_qubits):
                orig = [g for g in c.gates if q in g]
                resliced = [g for g in flat if q in g]
                assert orig == resliced

    def test_asap_minimality(self, rng):
        for _ in range(50):
            sliced = slice_circuit(random_circuit_raw(rng))
            for t in range(1, sliced.num_slices):
                prev_qubits = {q for g in sliced.slices[t - 1] for q in g}
                for q1, q2 in sliced.slices[t]:
                    assert q1 in prev_qubits or q2 in prev_qubits

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_invariants_hold_for_any_seed(self, seed):
        rng = np.random.default_rng(seed)
        sliced = slice_circuit(random_circuit_raw(rng))
        # constructor re-checks all invariants
        SlicedCircuit(sliced.num_qubits, sliced.slices)


class TestGenerators:
    def test_random_single_slice(self):
        c = generate_random_circuit(4, 1, (2, 2), seed=7)
        assert c.num_gates == 2
        assert slice_circuit(c).num_slices == 1

    def test_random_exact_slice_count(self):
        c = generate_random_circuit(50, 30, (1, 25), seed=11)
        assert slice_circuit(c).num_slices == 30

    def test_random_deterministic(self):
        a = generate_random_circuit(20, 10, (1, 8), seed=5)
        b = generate_random_circuit(20, 10, (1, 8), seed=5)
        assert a == b

    def test_random_infeasible_range_rejected(self):
        with pytest.raises(InvalidInputError):
            generate_random_circuit(4, 3, (3, 3), seed=0)

    @pytest.mark.parametrize("q,expected", [(2, 1), (50, 1225), (100, 4950)])
    def test_all_pairs_gate_count(self, q, expected):
        c = generate_all_pairs_circuit(q)
        assert c.num_gates == expected

    def test_all_pairs_smallest(self):
        assert generate_all_pairs_circuit(2).gates == ((0, 1),)

    def test_chain_basic(self):
        assert generate_chain_circuit(3, 1).gates == ((0, 1), (1, 2))

    def test_chain_slices(self):
        assert slice_circuit(generate_chain_circuit(3, 1)).num_slices == 2

    def test_chain_count(self):
        assert generate_chain_circuit(4, 2).num_gates == 6
