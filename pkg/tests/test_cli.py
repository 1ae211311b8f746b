import csv
import json

import pytest
from click.testing import CliRunner

from mcqmap.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def gen_circuit(runner, tmp_path, spec, seed=0, name="c.json"):
    path = tmp_path / name
    result = runner.invoke(main, ["gen", spec, "-o", str(path), "--seed", str(seed)])
    assert result.exit_code == 0, result.output
    return path


class TestGen:
    def test_allpairs_gate_count(self, runner, tmp_path):
        path = gen_circuit(runner, tmp_path, "allpairs:q=50")
        data = json.loads(path.read_text())
        assert len(data["gates"]) == 1225

    def test_chain_gate_count(self, runner, tmp_path):
        path = gen_circuit(runner, tmp_path, "chain:q=10,r=3")
        assert len(json.loads(path.read_text())["gates"]) == 27

    def test_random_reproducible(self, runner, tmp_path):
        a = gen_circuit(runner, tmp_path, "random:q=20,t=10", seed=4, name="a.json")
        b = gen_circuit(runner, tmp_path, "random:q=20,t=10", seed=4, name="b.json")
        assert a.read_text() == b.read_text()

    def test_bad_spec_exit_code(self, runner, tmp_path):
        result = runner.invoke(main, ["gen", "bogus:q=3", "-o", str(tmp_path / "x")])
        assert result.exit_code == 2


class TestSlice:
    def test_reports_counts(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "allpairs:q=50")
        out = tmp_path / "sliced.json"
        result = runner.invoke(main, ["slice", str(circuit), "-o", str(out)])
        assert result.exit_code == 0
        assert "gates=1225" in result.output
        assert json.loads(out.read_text())["num_qubits"] == 50

    def test_round_trip_stable(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=12,t=6", seed=1)
        s1 = tmp_path / "s1.json"
        runner.invoke(main, ["slice", str(circuit), "-o", str(s1)])
        flat = tmp_path / "flat.json"
        data = json.loads(s1.read_text())
        gates = [g for sl in data["slices"] for g in sl]
        flat.write_text(json.dumps({"num_qubits": data["num_qubits"], "gates": gates}))
        s2 = tmp_path / "s2.json"
        runner.invoke(main, ["slice", str(flat), "-o", str(s2)])
        assert json.loads(s1.read_text()) == json.loads(s2.read_text())


class TestMap:
    def test_oracle_matches_solver(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=4,t=3,kmax=1", seed=5)
        report = tmp_path / "report.jsonl"
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:2:2",
            "--method", "oracle", "--out-report", str(report),
        ])
        assert result.exit_code == 0, result.output
        run = json.loads(report.read_text().splitlines()[0])

        from mcqmap import circuit as circ, make_a2a
        from mcqmap.oracle import solve_optimal

        sliced = circ.slice_circuit(circ.read_circuit(circuit))
        _, optimum = solve_optimal(sliced, make_a2a(2, 2))
        assert run["cost"] == optimum
        assert run["valid"] is True

    def test_deterministic_reports(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=10,t=5", seed=2)
        runs = []
        for name in ("r1.jsonl", "r2.jsonl"):
            report = tmp_path / name
            result = runner.invoke(main, [
                "map", str(circuit), "--topology", "grid:2x3:2",
                "--method", "nearest", "--seed", "3",
                "--out-report", str(report),
            ])
            assert result.exit_code == 0, result.output
            run = json.loads(report.read_text())
            run.pop("runtime_ms")
            runs.append(run)
        assert runs[0] == runs[1]

    def test_alloc_and_trace_outputs(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=8,t=4", seed=7)
        alloc = tmp_path / "alloc.json"
        trace = tmp_path / "trace.csv"
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:4:2",
            "--method", "lookahead:0.5", "--out-alloc", str(alloc),
            "--out-trace", str(trace),
        ])
        assert result.exit_code == 0, result.output
        assert len(json.loads(alloc.read_text())["assignment"]) == 4
        with open(trace) as fh:
            header = next(csv.reader(fh))
        assert header == ["t", "q", "src", "dst", "hops"]

    def test_invalid_topology_exit_code(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "chain:q=4")
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "nope:1", "--method", "nearest",
        ])
        assert result.exit_code == 2

    def test_infeasible_exit_code(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "chain:q=10")
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:2:2", "--method", "nearest",
        ])
        assert result.exit_code == 3

    def test_oracle_guard_exit_code(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "chain:q=6,r=4")
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:3:2", "--method", "oracle",
        ])
        assert result.exit_code == 4

    def test_blackbox_method(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=6,t=3", seed=1)
        result = runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:3:2",
            "--method", "blackbox:rs", "--budget", "50",
        ])
        assert result.exit_code == 0, result.output


class TestCompare:
    def test_table_consistent_with_map(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=10,t=5", seed=3)
        table = tmp_path / "table.csv"
        result = runner.invoke(main, [
            "compare", str(circuit), "--topology", "grid:2x3:2",
            "--methods", "nearest,lookahead", "--seed", "1",
            "-o", str(table),
        ])
        assert result.exit_code == 0, result.output
        with open(table) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2
        assert {r["method"] for r in rows} == {"nearest", "lookahead"}
        for row in rows:
            report = tmp_path / f"verify-{row['method']}.jsonl"
            check = runner.invoke(main, [
                "map", str(circuit), "--topology", "grid:2x3:2",
                "--method", row["method"], "--seed", "1",
                "--out-report", str(report),
            ])
            assert check.exit_code == 0
            assert json.loads(report.read_text())["cost"] == int(row["cost"])


class TestMasks:
    def test_replay_masks_cover_actions(self, runner, tmp_path):
        circuit = gen_circuit(runner, tmp_path, "random:q=8,t=4", seed=9)
        alloc = tmp_path / "alloc.json"
        runner.invoke(main, [
            "map", str(circuit), "--topology", "a2a:4:2",
            "--method", "random", "--seed", "2", "--out-alloc", str(alloc),
        ])
        out = tmp_path / "masks.json"
        result = runner.invoke(main, [
            "masks", str(circuit), "--topology", "a2a:4:2",
            "--alloc", str(alloc), "-o", str(out),
        ])
        assert result.exit_code == 0, result.output
        steps = json.loads(out.read_text())["steps"]
        assert len(steps) == 8 * 4
        for step in steps:
            assert step["mask"][step["action"]] == 1
