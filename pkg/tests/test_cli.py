import csv
import io
import json

import numpy as np
import pytest

from dsmlin import bench, cli
from dsmlin.mmio import read_vector, write_matrix_market, write_vector
from dsmlin.linops import SymmetricOperator


@pytest.fixture
def system(tmp_path):
    m, r = tmp_path / "A.mtx", tmp_path / "f.txt"
    write_matrix_market(SymmetricOperator([[1.0, 0.5], [0.5, 1 / 3]]), m)
    write_vector([1.0, 0.5], r)
    return tmp_path, str(m), str(r)


def solve(system, *extra):
    d, m, r = system
    out = str(d / "x.txt")
    code = cli.main(["solve", "--matrix", m, "--rhs", r, "--out", out, *extra])
    return code, out


class TestSolve:
    def test_oracle(self, system):
        code, out = solve(system, "--method", "oracle")
        assert code == 0
        np.testing.assert_allclose(read_vector(out), [1.0, 0.0], atol=1e-12)
        rep = json.loads(open(out + ".report.json").read())
        assert rep["method"] == "oracle" and rep["in_range"]

    def test_dsm_identity(self, tmp_path):
        m, r = tmp_path / "I.mtx", tmp_path / "f.txt"
        write_matrix_market(SymmetricOperator(np.eye(2)), m)
        write_vector([1.0, 0.0], r)
        out = str(tmp_path / "x.mtx")
        code = cli.main(
            ["solve", "--matrix", str(m), "--rhs", str(r), "--a", "1e-3", "--t", "2e4", "--h-max", "0.5", "--out", out]
        )
        assert code == 0
        assert np.linalg.norm(read_vector(out) - [1.0, 0.0]) <= 1.1e-3
        rep = json.loads(open(out + ".report.json").read())
        assert rep["a_used"] == 1e-3 and rep["t_used"] == 2e4 and rep["steps_taken"] > 0

    def test_schedule_and_stdout(self, system, capsys):
        _, m, r = system
        code = cli.main(
            ["solve", "--matrix", m, "--rhs", r, "--delta", "1e-2", "--schedule", "default", "--h-max", "0.2"]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert len(captured.out.split()) == 2
        rep = json.loads(captured.err)
        assert rep["a_used"] == pytest.approx(0.1) and rep["noise_bound"] == pytest.approx(0.1)

    def test_tikhonov(self, system):
        code, out = solve(system, "--method", "tikhonov", "--a", "1e-6")
        assert code == 0
        np.testing.assert_allclose(read_vector(out), [1.0, 0.0], atol=1e-3)

    @pytest.mark.parametrize(
        "extra",
        [
            [],
            ["--a", "0.1"],
            ["--a", "0.1", "--t", "5", "--schedule", "default"],
            ["--method", "oracle", "--a", "0.1"],
            ["--method", "tikhonov"],
            ["--a", "0.1", "--t", "5", "--delta", "-1"],
            ["--schedule", "custom:a=oops,t=1"],
        ],
    )
    def test_usage_errors(self, system, extra):
        assert solve(system, *extra)[0] == 2

    def test_missing_file(self, system):
        d, _, r = system
        assert cli.main(["solve", "--matrix", str(d / "missing.mtx"), "--rhs", r, "--method", "oracle"]) == 2

    def test_dimension_mismatch(self, system):
        d, m, _ = system
        write_vector([1.0, 2.0, 3.0], d / "g.txt")
        assert cli.main(["solve", "--matrix", m, "--rhs", str(d / "g.txt"), "--method", "oracle"]) == 2

    def test_step_limit_is_solver_error(self, system):
        assert solve(system, "--a", "0.1", "--t", "100", "--max-steps", "5")[0] == 3


class TestBench:
    def run(self, tmp_path, *extra, deltas="1e-2,1e-4"):
        path = tmp_path / "out.csv"
        code = cli.main(["bench", "--generator", "spectrum:1,1e-2", "--deltas", deltas, "--csv", str(path), *extra])
        rows = list(csv.DictReader(io.StringIO(path.read_text()))) if path.exists() else []
        return code, rows

    def test_schema_and_cardinality(self, tmp_path):
        code, rows = self.run(tmp_path, "--methods", "dsm,tikhonov,oracle", "--h-max", "0.5")
        assert code == 0
        assert len(rows) == 2 * 3
        assert tuple(rows[0].keys()) == bench.COLUMNS
        assert [r["method"] for r in rows[:3]] == ["dsm", "tikhonov", "oracle"]
        assert all(r["flag"] == "OK" for r in rows)

    def test_empty_delta_list(self, tmp_path):
        assert self.run(tmp_path, deltas="")[0] == 2

    @pytest.mark.parametrize("extra", [["--methods", "magic"], ["--generator", "wave:3"]])
    def test_bad_arguments(self, tmp_path, extra):
        assert self.run(tmp_path, *extra)[0] == 2

    def test_failure_flag_exits_one(self, tmp_path):
        code, rows = self.run(tmp_path, "--methods", "dsm", "--max-steps", "3")
        assert code == 1
        assert all(r["flag"].startswith("FAILED") for r in rows)


class TestVerify:
    def test_cap_out_of_range(self):
        assert cli.main(["verify", "--size-cap", "0"]) == 2
        assert cli.main(["verify", "--size-cap", "65"]) == 2

    def test_default_passes(self, capsys):
        assert cli.main(["verify"]) == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith(("PASS", "FAIL"))]
        assert len(lines) >= 12 and all(l.startswith("PASS") for l in lines)
