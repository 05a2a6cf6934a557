"""Command-line interface: commands, formats, exit codes, determinism."""

import json

import pytest

from lieinv.cli import main

SO3 = {
    "dim": 3,
    "brackets": [
        {"i": 1, "j": 2, "terms": [{"k": 3, "c": "1"}]},
        {"i": 2, "j": 3, "terms": [{"k": 1, "c": "1"}]},
        {"i": 1, "j": 3, "terms": [{"k": 2, "c": "-1"}]},
    ],
}

BROKEN = {
    "dim": 3,
    "brackets": [
        {"i": 1, "j": 2, "terms": [{"k": 2, "c": "1"}]},
        {"i": 1, "j": 3, "terms": [{"k": 3, "c": "1"}]},
        {"i": 2, "j": 3, "terms": [{"k": 1, "c": "1"}]},
    ],
}


@pytest.fixture
def algebra_file(tmp_path):
    def write(payload, name="alg.json"):
        f = tmp_path / name
        f.write_text(json.dumps(payload))
        return str(f)
    return write


class TestValidate:
    def test_valid(self, algebra_file, capsys):
        assert main(["validate", algebra_file(SO3)]) == 0
        assert "valid" in capsys.readouterr().out

    def test_abelian(self, algebra_file):
        assert main(["validate", algebra_file({"dim": 3, "brackets": []})]) == 0

    def test_broken_jacobi(self, algebra_file, capsys):
        assert main(["validate", algebra_file(BROKEN)]) == 1
        out = capsys.readouterr().out
        assert "(1,2,3)" in out  # failing quadruple printed

    def test_missing_file(self, capsys):
        assert main(["validate", "/nonexistent.json"]) == 2


class TestInvariants:
    def test_transitive_text(self, capsys):
        assert main(["invariants", "g2", "--pipeline", "transitive"]) == 0
        out = capsys.readouterr().out
        assert "v_1" in out and "verified: True" in out

    def test_transitive_csv_two_rows(self, capsys):
        assert main(["invariants", "2g1", "--pipeline", "transitive",
                     "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3  # header + v_1 + v_12

    def test_free_json(self, capsys):
        assert main(["invariants", "g3_7", "--pipeline", "free", "--m", "1",
                     "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pipeline"] == "I"
        assert payload["verified"] is True

    def test_params_flag(self, capsys):
        assert main(["invariants", "g3_4", "--pipeline", "transitive",
                     "--params", "h=-1/3", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["params"] == {"h": "-1/3"}

    def test_bad_param_rejected(self, capsys):
        assert main(["invariants", "g3_4", "--pipeline", "transitive",
                     "--params", "h=1"]) == 1

    def test_unknown_algebra(self, capsys):
        assert main(["invariants", "g99", "--pipeline", "transitive"]) == 1


class TestCovariant:
    def test_to(self, tmp_path, capsys):
        f = tmp_path / "pde.txt"
        f.write_text("coords: x; dep: u\nlhs: u_xx + u_x^2\n")
        assert main(["covariant", "--to", str(f)]) == 0
        out = capsys.readouterr().out
        assert "degree: 3" in out

    def test_from(self, tmp_path, capsys):
        f = tmp_path / "cov.txt"
        f.write_text("coords: x, y, u; dep: w\n"
                     "lhs: 2*w_x*w_y + 3*w_x*w_u + w_u^2\n")
        assert main(["covariant", "--from", str(f)]) == 0
        out = capsys.readouterr().out
        assert "rescale-invariant: yes" in out

    def test_from_rejects_non_invariant(self, tmp_path, capsys):
        f = tmp_path / "bad.txt"
        f.write_text("coords: x, u; dep: w\nlhs: w_xx\n")
        assert main(["covariant", "--from", str(f)]) == 1
        assert "NotRescaleInvariant" in capsys.readouterr().err


class TestReproduce:
    def test_2d_transitive(self, capsys):
        assert main(["reproduce", "2d-transitive"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 2

    def test_param_override(self, capsys):
        assert main(["reproduce", "--table", "2d-transitive",
                     "--params", "g3_4:h=1/3"]) == 0

    def test_json_determinism(self, capsys):
        assert main(["reproduce", "1d", "--seed", "7",
                     "--format", "json"]) == 0
        first = capsys.readouterr().out
        assert main(["reproduce", "1d", "--seed", "7",
                     "--format", "json"]) == 0
        assert capsys.readouterr().out == first

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("LIEINV_SEED", "7")
        assert main(["reproduce", "1d", "--format", "json"]) == 0
        env_out = capsys.readouterr().out
        monkeypatch.delenv("LIEINV_SEED")
        assert main(["reproduce", "1d", "--seed", "7",
                     "--format", "json"]) == 0
        assert capsys.readouterr().out == env_out

    def test_unknown_table(self, capsys):
        assert main(["reproduce", "9d"]) == 2
