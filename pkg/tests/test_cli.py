import json

import numpy as np
import pytest

from bpblab.cli import main
from bpblab.jsonio import operator_to_json, parse_operator


@pytest.fixture
def op_file(tmp_path):
    def write(name, rows, dom, cod):
        path = tmp_path / name
        path.write_text(
            json.dumps({"rows": rows, "domain": dom, "codomain": cod})
        )
        return str(path)

    return write


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


LINF2 = {"p": "inf", "n": 2}


class TestNormCommand:
    def test_norm_and_witness(self, op_file, capsys):
        f = op_file("t.json", [[1, 0], [1, 0]], LINF2, LINF2)
        code, doc = run(capsys, ["norm", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["norm"] == 1.0

    def test_malformed_exponent_names_field(self, op_file, capsys):
        f = op_file("bad.json", [[1, 0], [0, 1]], {"p": "zero", "n": 2}, LINF2)
        code = main(["norm", "--operator", f])
        assert code == 2
        err = capsys.readouterr().err
        assert "domain.p" in err

    def test_shape_mismatch_names_field(self, op_file, capsys):
        f = op_file("bad.json", [[1, 0]], LINF2, LINF2)
        code = main(["norm", "--operator", f])
        assert code == 2
        assert "rows" in capsys.readouterr().err


class TestAttainAndRoundTrip:
    def test_faces_serialization(self, op_file, capsys):
        f = op_file("t.json", [[1, 0], [1, 0]], LINF2, LINF2)
        code, doc = run(capsys, ["attain", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["kind"] == "faces"
        assert sorted(doc["faces"]) == ["+0", "-0"]

    def test_operator_json_round_trip(self):
        import bpblab

        T = bpblab.operator([[1.0, 0.5], [0.0, -1.0]], bpblab.linf(2), bpblab.l1(2))
        back = parse_operator(operator_to_json(T))
        assert back.close_to(T)
        assert back.domain == T.domain and back.codomain == T.codomain


class TestVerifyCommand:
    def test_certified_exit_zero(self, op_file, capsys, tmp_path):
        f = op_file("t.json", [[1, 0], [1, 0]], LINF2, LINF2)
        code, approx_doc = run(
            capsys,
            ["approx", "--operator", f, "--eps", "0.2", "--construction", "linf", "--no-timestamp"],
        )
        assert code == 0
        a_path = tmp_path / "a.json"
        a_path.write_text(json.dumps(approx_doc["approximant"]))
        code, doc = run(
            capsys,
            ["verify", "--T", f, "--A", str(a_path), "--eps", "0.2", "--no-timestamp"],
        )
        assert code == 0
        assert doc["status"] == "certified" and doc["delta_found"] > 0

    def test_falsified_exit_one(self, op_file, capsys):
        t = op_file("t.json", [[1, 0], [0, 0.97]], {"p": "2", "n": 2}, {"p": "2", "n": 2})
        a = op_file("a.json", [[0.97, 0], [0, 1]], {"p": "2", "n": 2}, {"p": "2", "n": 2})
        code, doc = run(capsys, ["verify", "--T", t, "--A", a, "--eps", "0.5", "--no-timestamp"])
        assert code == 1
        assert doc["status"] == "falsified"
        assert doc["counterexample"] is not None


class TestEnumerationCommands:
    def test_census(self, capsys):
        code, doc = run(capsys, ["enumerate-ext", "--pair", "linf3-l13", "--no-timestamp"])
        assert code == 0
        assert doc["count"] == 90
        assert doc["orbits"] == [18, 72]

    def test_isometries(self, capsys):
        code, doc = run(capsys, ["isometries", "--p", "3", "--n", "2", "--no-timestamp"])
        assert code == 0
        assert doc["count"] == 8

    def test_orbit(self, op_file, capsys):
        f = op_file("id.json", [[1, 0], [0, 1]], LINF2, LINF2)
        code, doc = run(capsys, ["orbit", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["size"] == 8

    def test_epsilon0(self, capsys):
        code, doc = run(capsys, ["epsilon0", "--p", "3", "--no-timestamp"])
        assert code == 0
        assert doc["separation"] == pytest.approx(2 ** (2 / 3))
        assert doc["eps0"] == min(doc["separation"], doc["delta1"])


class TestDeterminism:
    def test_identical_argv_identical_bytes(self, op_file, capsys):
        f = op_file("t.json", [[1, 0], [1, 0]], LINF2, LINF2)
        out = []
        for _ in range(2):
            main(["attain", "--operator", f, "--no-timestamp"])
            out.append(capsys.readouterr().out)
        assert out[0] == out[1]

    def test_seeded_sweep_deterministic(self, capsys):
        out = []
        for _ in range(2):
            code = main(
                [
                    "sweep",
                    "--pair",
                    "linf2",
                    "--eps-list",
                    "0.2",
                    "--trials",
                    "3",
                    "--seed",
                    "7",
                    "--no-timestamp",
                ]
            )
            assert code == 0
            out.append(capsys.readouterr().out)
        assert out[0] == out[1]

    def test_seed_required_for_sweep(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--pair", "linf2"])
        assert exc.value.code == 2


class TestClassifyCommand:
    def test_extreme_verdict(self, op_file, capsys):
        f = op_file(
            "c.json",
            [[0.5, 0.5], [0.5, -0.5]],
            {"p": "inf", "n": 2},
            {"p": "1", "n": 2},
        )
        code, doc = run(capsys, ["classify", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["extremality"]["status"] == "extreme"

    def test_row_condition_reported(self, op_file, capsys):
        f = op_file("t.json", [[1, 0], [1, 0]], LINF2, LINF2)
        code, doc = run(capsys, ["classify", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["row_condition"] is True
        assert doc["is_isometry"] is False


class TestWitnessCommand:
    def test_hilbert_witness(self, op_file, capsys):
        f = op_file(
            "d.json", [[1, 0], [0, 0.5]], {"p": "2", "n": 2}, {"p": "2", "n": 2}
        )
        code, doc = run(capsys, ["witness-p", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["r0"] == 1.0


class TestDemoCommand:
    def test_all_checks_pass(self, capsys):
        code, doc = run(capsys, ["demo", "--no-timestamp"])
        assert code == 0
        assert doc["failed"] == 0
        assert all(c["passed"] for c in doc["checks"])


class TestEnvResolution:
    def test_env_default_honored(self, op_file, capsys, monkeypatch):
        monkeypatch.setenv("BPBLAB_DEFAULT_RESOLUTION", "256")
        f = op_file(
            "d.json", [[1, 0], [0, 0.5]], {"p": "4", "n": 2}, {"p": "4", "n": 2}
        )
        code, doc = run(capsys, ["attain", "--operator", f, "--no-timestamp"])
        assert code == 0
        assert doc["kind"] == "points"
