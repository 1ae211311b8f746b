"""Priority-based genome encoding and derivative-free optimizers.

A solution is a real matrix of shape (T, P) where P is the total number
of physical qubits.  Per slice, qubits are sorted by descending priority
and fill cores in index order; placing the higher-priority endpoint of a
gate immediately pulls its partner into the same core, so any real
genome decodes to a capacity- and colocation-valid allocation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .allocation import Allocation, cost
from .circuit import SlicedCircuit
from .errors import InfeasibleError, InvalidInputError
from .topology import Topology


@dataclass(frozen=True, eq=False)
class OptimizerTrace:
    """Best-so-far fitness per evaluation plus the winning genome."""

    best_history: np.ndarray
    best_genome: np.ndarray
    best_fitness: int
    evaluations: int


class PriorityProblem:
    """Fitness wrapper binding a sliced circuit to a uniform-capacity topology."""

    def __init__(self, sliced: SlicedCircuit, topo: Topology):
        caps = set(topo.capacities)
        if len(caps) != 1:
            raise InvalidInputError(
                "priority decoding requires uniform core capacities"
            )
        if topo.total_capacity < sliced.num_qubits:
            raise InfeasibleError("total capacity below qubit count")
        self.sliced = sliced
        self.topo = topo
        self.capacity = topo.capacities[0]
        self.num_phys = topo.total_capacity
        self.shape = (sliced.num_slices, self.num_phys)
        self.size = self.shape[0] * self.shape[1]
        # friends[t, p]: gate partner of p in slice t, -1 if unpaired
        self._friends = np.full(self.shape, -1, dtype=np.int64)
        for t in range(sliced.num_slices):
            for q1, q2 in sliced.slices[t]:
                self._friends[t, q1] = q2
                self._friends[t, q2] = q1

    def decode(self, genome: np.ndarray) -> Allocation:
        genome = np.asarray(genome, dtype=np.float64)
        if genome.shape != self.shape:
            raise InvalidInputError(
                f"genome shape {genome.shape} != expected {self.shape}"
            )
        if not np.isfinite(genome).all():
            raise InvalidInputError("genome entries must be finite")
        full = kernels.decode_priorities_raw(
            np.ascontiguousarray(genome),
            self._friends,
            self.topo.num_cores,
            self.capacity,
        )
        used = full[:, : self.sliced.num_qubits]
        if used.size and used.min() < 0:
            raise InfeasibleError("priority decoding left a qubit unallocated")
        return Allocation(used)

    def fitness(self, genome: np.ndarray) -> int:
        return cost(self.decode(genome), self.topo)


def decode_priorities(genome, sliced: SlicedCircuit, topo: Topology) -> Allocation:
    return PriorityProblem(sliced, topo).decode(np.asarray(genome, dtype=np.float64))


def fitness(genome, sliced: SlicedCircuit, topo: Topology) -> int:
    return PriorityProblem(sliced, topo).fitness(np.asarray(genome, dtype=np.float64))


def _run_trace(problem: PriorityProblem, genomes) -> OptimizerTrace:
    """Evaluate a genome stream, tracking the best-so-far curve."""
    history = []
    best_f = None
    best_g = None
    for genome in genomes:
        f = problem.fitness(genome)
        if best_f is None or f < best_f:
            best_f = f
            best_g = genome.copy()
        history.append(best_f)
    return OptimizerTrace(
        np.asarray(history, dtype=np.int64), best_g, int(best_f), len(history)
    )


def _check_budget(budget: int, minimum: int = 1) -> None:
    if budget < minimum:
        raise InvalidInputError(f"budget must be >= {minimum}")


def optimize_random_search(budget: int, seed, problem: PriorityProblem) -> OptimizerTrace:
    """Independent standard-normal genomes."""
    _check_budget(budget)
    rng = np.random.default_rng(seed)
    return _run_trace(
        problem, (rng.standard_normal(problem.shape) for _ in range(budget))
    )


def optimize_one_plus_one(
    budget: int, seed, problem: PriorityProblem, mutation_sigma: float = 1.0
) -> OptimizerTrace:
    """(1+1) EA: Gaussian mutation, accept on <=, 1/5th-rule step adaptation."""
    _check_budget(budget)
    rng = np.random.default_rng(seed)
    sigma = float(mutation_sigma)
    parent = rng.standard_normal(problem.shape)
    parent_f = problem.fitness(parent)
    history = [parent_f]
    best_g = parent.copy()
    for _ in range(budget - 1):
        child = parent + sigma * rng.standard_normal(problem.shape)
        child_f = problem.fitness(child)
        if child_f <= parent_f:
            parent, parent_f = child, child_f
            sigma *= 1.5
        else:
            sigma *= 1.5 ** -0.25
        sigma = min(max(sigma, 1e-9), 1e3)
        if parent_f < history[-1]:
            best_g = parent.copy()
        history.append(min(history[-1], parent_f))
    return OptimizerTrace(
        np.asarray(history, dtype=np.int64), best_g, int(history[-1]), len(history)
    )


def optimize_differential_evolution(
    budget: int,
    seed,
    problem: PriorityProblem,
    population: int = 30,
    weight: float = 0.5,
) -> OptimizerTrace:
    """DE/rand/1 with two-point crossover on the flattened genome."""
    if population < 4:
        raise InvalidInputError("DE needs a population of at least 4")
    if budget < population:
        raise InvalidInputError("budget must cover the initial population")
    rng = np.random.default_rng(seed)
    n = problem.size
    pop = rng.standard_normal((population, n))
    fit = np.empty(population, dtype=np.int64)
    history = []
    best_f = None
    best_g = None
    for i in range(population):
        fit[i] = problem.fitness(pop[i].reshape(problem.shape))
        if best_f is None or fit[i] < best_f:
            best_f = int(fit[i])
            best_g = pop[i].copy()
        history.append(best_f)
    evals = population
    i = 0
    while evals < budget:
        choices = [k for k in range(population) if k != i]
        a, b, c = rng.choice(choices, size=3, replace=False)
        mutant = pop[a] + weight * (pop[b] - pop[c])
        lo, hi = sorted(rng.integers(0, n + 1, size=2))
        trial = pop[i].copy()
        trial[lo:hi] = mutant[lo:hi]
        f = problem.fitness(trial.reshape(problem.shape))
        if f <= fit[i]:
            pop[i] = trial
            fit[i] = f
            if f < best_f:
                best_f = int(f)
                best_g = trial.copy()
        history.append(best_f)
        evals += 1
        i = (i + 1) % population
    return OptimizerTrace(
        np.asarray(history, dtype=np.int64),
        best_g.reshape(problem.shape),
        int(best_f),
        evals,
    )


def optimize_compact_ga(
    budget: int,
    seed,
    problem: PriorityProblem,
    virtual_population: int = 50,
    jitter: float = 0.25,
) -> OptimizerTrace:
    """Compact GA over a sign-bit discretization of the real genome.

    Each dimension carries a probability of being +1; sampled genomes are
    the signs plus Gaussian jitter (which breaks priority ties).  The
    winner of each pairwise competition shifts the probability vector by
    1/virtual_population on differing bits.
    """
    _check_budget(budget, minimum=2)
    rng = np.random.default_rng(seed)
    n = problem.size
    prob = np.full(n, 0.5)
    step = 1.0 / float(virtual_population)
    history = []
    best_f = None
    best_g = None

    def sample():
        signs = np.where(rng.random(n) < prob, 1.0, -1.0)
        genome = signs + jitter * rng.standard_normal(n)
        return signs, genome

    evals = 0
    while evals + 2 <= budget:
        s1, g1 = sample()
        s2, g2 = sample()
        f1 = problem.fitness(g1.reshape(problem.shape))
        f2 = problem.fitness(g2.reshape(problem.shape))
        for f, g in ((f1, g1), (f2, g2)):
            if best_f is None or f < best_f:
                best_f = int(f)
                best_g = g.copy()
            history.append(best_f)
        evals += 2
        if f1 == f2:
            continue
        win, lose = (s1, s2) if f1 < f2 else (s2, s1)
        differ = win != lose
        prob[differ] += step * win[differ]
        np.clip(prob, 0.0, 1.0, out=prob)
    if evals < budget:
        _, g = sample()
        f = problem.fitness(g.reshape(problem.shape))
        if best_f is None or f < best_f:
            best_f = int(f)
            best_g = g.copy()
        history.append(best_f)
        evals += 1
    return OptimizerTrace(
        np.asarray(history, dtype=np.int64),
        best_g.reshape(problem.shape),
        int(best_f),
        evals,
    )


OPTIMIZERS = {
    "rs": optimize_random_search,
    "opo": optimize_one_plus_one,
    "de": optimize_differential_evolution,
    "cga": optimize_compact_ga,
}
