"""Command-line surface: generate, slice, map, compare, and mask replay.

Exit codes: 0 success, 2 invalid input, 3 infeasible instance, 4 exact
solver guard exceeded.  Qubit and core indices are 0-based throughout.
"""

from __future__ import annotations

import csv
import json
import sys
import time

import click


from . import blackbox, circuit as circ, constructor, fgp, oracle
from .allocation import (
    Allocation,
    cost,
    transfer_trace,
    validate,
    write_allocation,
    write_trace_csv,
)
from .errors import (
    InfeasibleError,
    InvalidInputError,
    MapperError,
    OracleGuardError,
)
from .topology import parse_topology_spec

EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_GUARD = 4


def _load_circuit_or_sliced(path) -> circ.SlicedCircuit:
    """Accept either a raw circuit ('gates') or a sliced one ('slices')."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad JSON in {path}: {exc}") from exc
    if "slices" in data:
        return circ.SlicedCircuit.from_dict(data)
    return circ.slice_circuit(circ.Circuit.from_dict(data))


def _parse_kv(spec: str) -> tuple[str, dict[str, str]]:
    head, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise InvalidInputError(f"bad generator parameter {item!r}")
            params[key.strip().lower()] = value.strip()
    return head.lower(), params


def run_method(sliced, topo, method: str, mode: str, seed, budget: int):
    """Dispatch a method spec string to the matching solver."""
    name, _, arg = method.partition(":")
    name = name.lower()
    if name == "random":
        return constructor.construct(
            sliced, topo, constructor.scorer_random(seed), mode=mode, seed=seed
        )
    if name == "nearest":
        return constructor.construct(
            sliced, topo, constructor.scorer_nearest(topo), mode=mode, seed=seed
        )
    if name == "lookahead":
        lam = float(arg) if arg else 1.0
        return constructor.construct(
            sliced, topo, constructor.scorer_lookahead(topo, sliced, lam),
            mode=mode, seed=seed,
        )
    if name == "blackbox":
        if arg not in blackbox.OPTIMIZERS:
            raise InvalidInputError(f"unknown black-box optimizer {arg!r}")
        problem = blackbox.PriorityProblem(sliced, topo)
        trace = blackbox.OPTIMIZERS[arg](budget, seed, problem)
        return problem.decode(trace.best_genome)
    if name == "fgp-oee":
        return fgp.fgp_map(sliced, topo, relaxed=False, seed=seed)
    if name == "fgp-roee":
        return fgp.fgp_map(sliced, topo, relaxed=True, seed=seed)
    if name == "oracle":
        alloc, _ = oracle.solve_optimal(sliced, topo)
        return alloc
    raise InvalidInputError(f"unknown method {method!r}")


def _fail(exc: MapperError):
    code = EXIT_INVALID
    if isinstance(exc, InfeasibleError):
        code = EXIT_INFEASIBLE
    elif isinstance(exc, OracleGuardError):
        code = EXIT_GUARD
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Time-sliced qubit allocation for multi-core quantum architectures."""


@main.command()
@click.argument("spec")
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
def gen(spec, output, seed):
    """Generate a circuit: random:q=..,t=..[,kmin=..,kmax=..],
    allpairs:q=.., or chain:q=..,r=.. ."""
    try:
        kind, params = _parse_kv(spec)
        if kind == "random":
            q = int(params["q"])
            t = int(params["t"])
            lo = int(params.get("kmin", 1))
            hi = int(params["kmax"]) if "kmax" in params else None
            out = circ.generate_random_circuit(q, t, (lo, hi), seed=seed)
        elif kind == "allpairs":
            out = circ.generate_all_pairs_circuit(int(params["q"]))
        elif kind == "chain":
            out = circ.generate_chain_circuit(
                int(params["q"]), int(params.get("r", 1))
            )
        else:
            raise InvalidInputError(f"unknown generator {kind!r}")
    except (KeyError, ValueError) as exc:
        _fail(InvalidInputError(f"bad generator spec {spec!r}: {exc}"))
    except MapperError as exc:
        _fail(exc)
    else:
        circ.write_circuit(out, output)
        click.echo(f"wrote {out.num_gates} gates over {out.num_qubits} qubits")


@main.command("slice")
@click.argument("circuit_file", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def slice_cmd(circuit_file, output):
    """Slice a circuit into parallel gate sets."""
    try:
        cir = circ.read_circuit(circuit_file)
        sliced = circ.slice_circuit(cir)
    except MapperError as exc:
        _fail(exc)
    else:
        circ.write_sliced(sliced, output)
        click.echo(
            f"qubits={cir.num_qubits} gates={cir.num_gates} "
            f"slices={sliced.num_slices}"
        )


@main.command("map")
@click.argument("circuit_file", type=click.Path(exists=True))
@click.option("--topology", "topology_spec", required=True)
@click.option("--method", default="nearest", show_default=True)
@click.option("--mode", type=click.Choice(["greedy", "sample"]), default="greedy",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=1000, show_default=True,
              help="evaluation budget for black-box methods")
@click.option("--out-alloc", type=click.Path(), default=None)
@click.option("--out-trace", type=click.Path(), default=None)
@click.option("--out-report", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def map_cmd(circuit_file, topology_spec, method, mode, seed, budget,
            out_alloc, out_trace, out_report, fmt):
    """Allocate a circuit onto a topology with the chosen method."""
    try:
        sliced = _load_circuit_or_sliced(circuit_file)
        topo = parse_topology_spec(topology_spec)
        start = time.perf_counter()
        alloc = run_method(sliced, topo, method, mode, seed, budget)
        runtime_ms = (time.perf_counter() - start) * 1000.0
        report = validate(alloc, sliced, topo)
        if not report.is_valid:
            raise InfeasibleError(
                f"method {method} produced an invalid allocation: "
                f"{report.capacity_violations} {report.friendship_violations}"
            )
    except MapperError as exc:
        _fail(exc)
        return
    total = cost(alloc, topo)
    run = {
        "method": method,
        "seed": seed,
        "num_qubits": sliced.num_qubits,
        "num_slices": sliced.num_slices,
        "num_gates": sliced.num_gates,
        "topology": topo.name,
        "cost": total,
        "runtime_ms": runtime_ms,
        "valid": True,
    }
    if out_alloc:
        write_allocation(alloc, out_alloc)
    if out_trace:
        write_trace_csv(transfer_trace(alloc, topo), out_trace)
    if out_report:
        with open(out_report, "a", encoding="utf-8") as fh:
            if fmt == "json":
                fh.write(json.dumps(run) + "\n")
            else:
                writer = csv.writer(fh)
                writer.writerow(list(run.values()))
    click.echo(f"method={method} cost={total} runtime_ms={runtime_ms:.1f}")


@main.command()
@click.argument("circuit_files", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--topology", "topology_spec", required=True)
@click.option("--methods", required=True,
              help="comma-separated method specs")
@click.option("--mode", type=click.Choice(["greedy", "sample"]), default="greedy")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=1000, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
def compare(circuit_files, topology_spec, methods, mode, seed, budget, output):
    """Run several methods over several circuits, emitting a cost table CSV."""
    try:
        topo = parse_topology_spec(topology_spec)
        method_list = [m.strip() for m in methods.split(",") if m.strip()]
        if not method_list:
            raise InvalidInputError("empty method list")
        rows = []
        for path in circuit_files:
            sliced = _load_circuit_or_sliced(path)
            for method in method_list:
                start = time.perf_counter()
                alloc = run_method(sliced, topo, method, mode, seed, budget)
                runtime_ms = (time.perf_counter() - start) * 1000.0
                if not validate(alloc, sliced, topo).is_valid:
                    raise InfeasibleError(
                        f"method {method} produced an invalid allocation"
                    )
                rows.append([
                    path, method, seed, sliced.num_qubits, sliced.num_slices,
                    sliced.num_gates, topo.name, cost(alloc, topo),
                    f"{runtime_ms:.3f}",
                ])
    except MapperError as exc:
        _fail(exc)
        return
    with open(output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "circuit", "method", "seed", "num_qubits", "num_slices",
            "num_gates", "topology", "cost", "runtime_ms",
        ])
        writer.writerows(rows)
    click.echo(f"wrote {len(rows)} rows to {output}")


@main.command()
@click.argument("circuit_file", type=click.Path(exists=True))
@click.option("--topology", "topology_spec", required=True)
@click.option("--alloc", "alloc_file", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def masks(circuit_file, topology_spec, alloc_file, output):
    """Replay an allocation, emitting the per-step action masks as JSON.

    Lets external policy implementations verify mask parity against this
    package's rules.
    """
    try:
        sliced = _load_circuit_or_sliced(circuit_file)
        topo = parse_topology_spec(topology_spec)
        with open(alloc_file, encoding="utf-8") as fh:
            alloc = Allocation.from_dict(json.load(fh))
        steps = constructor.replay_masks(sliced, topo, alloc)
    except MapperError as exc:
        _fail(exc)
        return
    with open(output, "w", encoding="utf-8") as fh:
        json.dump({"steps": steps}, fh)
    click.echo(f"wrote {len(steps)} steps")


if __name__ == "__main__":
    main()
