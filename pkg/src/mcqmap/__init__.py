"""Time-sliced qubit allocation toolkit for multi-core quantum architectures."""

from .allocation import (
    Allocation,
    ValidityReport,
    chunking_overhead_bound,
    cost,
    transfer_trace,
    upper_bound,
    validate,
)
from .circuit import (
    Circuit,
    SlicedCircuit,
    generate_all_pairs_circuit,
    generate_chain_circuit,
    generate_random_circuit,
    slice_circuit,
)
from .constructor import (
    construct,
    scorer_lookahead,
    scorer_nearest,
    scorer_random,
    valid_cores,
)
from .errors import (
    InfeasibleError,
    InvalidInputError,
    MapperError,
    OracleGuardError,
)
from .topology import Topology, distances_from_adjacency, make_a2a, make_grid

__all__ = [
    "Allocation",
    "Circuit",
    "InfeasibleError",
    "InvalidInputError",
    "MapperError",
    "OracleGuardError",
    "SlicedCircuit",
    "Topology",
    "ValidityReport",
    "chunking_overhead_bound",
    "construct",
    "cost",
    "distances_from_adjacency",
    "generate_all_pairs_circuit",
    "generate_chain_circuit",
    "generate_random_circuit",
    "make_a2a",
    "make_grid",
    "scorer_lookahead",
    "scorer_nearest",
    "scorer_random",
    "slice_circuit",
    "transfer_trace",
    "upper_bound",
    "valid_cores",
    "validate",
]

__version__ = "0.1.0"
