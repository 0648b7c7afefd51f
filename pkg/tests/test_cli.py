"""CLI surface tests: subcommands, exit codes, and output shape."""

import json

import pytest

from flowgraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCompare:
    def test_hybrid_t1_table(self, capsys):
        code, out, _ = run(capsys, "compare", "--case", "hybrid", "--T", "1")
        assert code == 0
        rows = {line.split()[0]: tuple(int(x) for x in line.split()[1:4])
                for line in out.splitlines()[1:]}
        assert rows["3BB-4F"] == (8, 11, 18)
        assert rows["2BB-2F"] == (6, 9, 16)
        assert rows["2BB-1F"] == (5, 9, 13)
        assert rows["1BB-1F"][:2] == (4, 6)

    def test_reduction_and_verdict(self, capsys):
        code, out, _ = run(capsys, "compare", "--case", "tri-area", "--instance", "1",
                           "--approaches", "1BB-1F,2BB-2F", "--T", "4", "--solve")
        assert code == 0
        assert "reduction vs 2BB-2F" in out
        assert "objective equality: PASS" in out

    def test_bad_approach_label(self, capsys):
        code, _, err = run(capsys, "compare", "--case", "hybrid", "--T", "1",
                           "--approaches", "5BB-9F")
        assert code == 2 and "5BB-9F" in err


class TestUsageErrors:
    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "build", "--bogus")
        assert code == 2

    def test_missing_subcommand(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2

    def test_unknown_case(self, capsys):
        code, _, err = run(capsys, "build", "--case", "atlantis")
        assert code == 1 and "atlantis" in err

    def test_unknown_solver(self, capsys):
        code, _, err = run(capsys, "solve", "--case", "hybrid", "--T", "1",
                           "--solver", "quantum")
        assert code == 1 and "quantum" in err


class TestBuildSolve:
    def test_build_writes_mps(self, capsys, tmp_path):
        code, out, _ = run(capsys, "build", "--case", "hybrid", "--T", "2",
                           "--approach", "2BB-2F", "--out", str(tmp_path))
        assert code == 0
        mps = tmp_path / "hybrid-2BB-2F.mps"
        assert mps.exists() and mps.read_text().startswith("NAME hybrid")
        assert "12 variables" in out

    def test_solve_reports_feasible_objective(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", "--case", "hybrid",
                           "--approach", "1BB-1F", "--out", str(tmp_path))
        assert code == 0
        assert "primal feasible" in out
        assert (tmp_path / "hybrid-1BB-1F.sol").read_text().startswith("status optimal")

    def test_external_solver_roundtrip(self, capsys, tmp_path):
        spec = tmp_path / "ext.json"
        spec.write_text(json.dumps({
            "executable": "python3",
            "args": ["-m", "flowgraph.highs_adapter", "{mps}", "{out}", "{seed}"],
            "solution_path": "{out}",
        }))
        code, out, _ = run(capsys, "solve", "--case", "hybrid", "--T", "6",
                           "--approach", "2BB-1F", "--solver", f"external:{spec}")
        assert code == 0 and "primal feasible" in out

    def test_env_var_selects_default_solver(self, capsys, tmp_path, monkeypatch):
        spec = tmp_path / "ext.json"
        spec.write_text(json.dumps({
            "executable": "python3",
            "args": ["-m", "flowgraph.highs_adapter", "{mps}", "{out}"],
        }))
        monkeypatch.setenv("FLOWGRAPH_SOLVER", str(spec))
        code, out, _ = run(capsys, "solve", "--case", "hybrid", "--T", "2")
        assert code == 0 and "primal feasible" in out


class TestCaseBundles:
    def test_export_then_validate(self, capsys, tmp_path):
        code, _, _ = run(capsys, "export-case", "--case", "tri-area", "--T", "6",
                         "--out", str(tmp_path / "bundle"))
        assert code == 0
        code, out, _ = run(capsys, "validate", "--case", f"csv:{tmp_path / 'bundle'}")
        assert code == 0 and "OK" in out

    def test_validate_flags_broken_bundle(self, capsys, tmp_path):
        bundle = tmp_path / "bundle"
        run(capsys, "export-case", "--case", "hybrid", "--out", str(bundle))
        flows = bundle / "flows.csv"
        # drop every arc: consumers lose their inflows
        flows.write_text(flows.read_text().splitlines()[0] + "\n")
        code, out, err = run(capsys, "validate", "--case", f"csv:{bundle}")
        assert code == 1 and "error" in err


class TestBench:
    def test_bench_writes_csvs(self, capsys, tmp_path):
        code, out, _ = run(capsys, "bench", "--T", "6",
                           "--n-seeds", "2", "--out", str(tmp_path))
        assert code == 0
        for name in ("samples.csv", "speedups.csv", "ttests.csv"):
            assert (tmp_path / name).exists()
        assert "1BB-1F vs 2BB-2F" in out
