import json

import numpy as np
import pytest

import nck.cli as cli
from nck.cli import main
from nck.exceptions import ParseError
from nck.tupleio import load_tuple_file, render_report, save_tuple_file

RNG = np.random.default_rng(33)


@pytest.fixture
def scalar_file(tmp_path):
    path = tmp_path / "scalar.json"
    save_tuple_file(path, np.ones((1, 1, 1), dtype=complex), nu=[0.5])
    return str(path)


@pytest.fixture
def random_car_file(tmp_path):
    path = tmp_path / "car.json"
    x = RNG.standard_normal((3, 2, 2)) + 1j * RNG.standard_normal((3, 2, 2))
    save_tuple_file(path, x, nu=[0.2, 0.5, 0.8])
    return str(path)


class TestTupleFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "t.json"
        x = RNG.standard_normal((2, 3, 3)) + 1j * RNG.standard_normal((2, 3, 3))
        save_tuple_file(path, x, nu=[0.1, 0.9], metadata={"label": "demo"})
        x2, nu2, meta = load_tuple_file(str(path))
        assert np.array_equal(x, x2)
        assert np.array_equal(nu2, [0.1, 0.9])
        assert meta == {"label": "demo"}

    def test_shape_error_names_offending_index(self, tmp_path):
        path = tmp_path / "bad.json"
        doc = {
            "version": "1",
            "d": 1,
            "n": 2,
            "matrices": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]],
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(ParseError, match=r"matrices\[0\]\[1\]"):
            load_tuple_file(str(path))

    def test_bad_version(self, tmp_path):
        path = tmp_path / "v2.json"
        path.write_text(json.dumps({"version": "2", "d": 1, "n": 1, "matrices": []}))
        with pytest.raises(ParseError, match="version"):
            load_tuple_file(str(path))

    def test_nu_out_of_range(self, tmp_path):
        path = tmp_path / "nu.json"
        doc = {"version": "1", "d": 1, "n": 1, "matrices": [[[[1.0, 0.0]]]], "nu": [1.5]}
        path.write_text(json.dumps(doc))
        with pytest.raises(ParseError, match="nu"):
            load_tuple_file(str(path))

    def test_missing_file(self):
        with pytest.raises(ParseError, match="no such file"):
            load_tuple_file("/nonexistent/nope.json")

    def test_report_json_round_trip(self):
        report = {"value": 1.4142135623730951, "gap": 1.2345678901234567e-07}
        text = render_report(report, "json")
        assert json.loads(text) == report

    def test_report_csv(self):
        rows = [{"a": 1, "b": 2.5}, {"a": 3, "b": -1.0}]
        text = render_report(rows, "csv")
        assert text.splitlines()[0] == "a,b"
        assert len(text.splitlines()) == 3


class TestNormCommand:
    def test_scalar_unweighted(self, scalar_file, capsys):
        assert main(["norm", "--file", scalar_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["triple"] == pytest.approx(1.0)
        assert out["dual"] == pytest.approx(1.0, abs=1e-8)
        assert out["weighted_triple"] == pytest.approx(1 / np.sqrt(2))
        assert "seed" in out

    def test_scalar_weighted_dual(self, scalar_file, capsys):
        assert main(["norm", "--file", scalar_file, "--weighted"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["dual"] == pytest.approx(np.sqrt(2.0), abs=1e-8)

    def test_weighted_without_nu_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "plain.json"
        save_tuple_file(path, np.ones((1, 1, 1), dtype=complex))
        assert main(["norm", "--file", str(path), "--weighted"]) == 2

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["norm", "--file", str(path)]) == 2


class TestLiftCommand:
    def test_zero_tuple(self, tmp_path, capsys):
        path = tmp_path / "zero.json"
        save_tuple_file(path, np.zeros((2, 2, 2), dtype=complex))
        assert main(["lift", "--file", str(path), "--family", "rademacher"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["ratio"] == 0.0 and out["iterations"] == 0 and out["passed"]

    def test_car_lift_passes(self, random_car_file, capsys):
        assert main(["lift", "--file", random_car_file, "--family", "car"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["ratio"] <= np.sqrt(2.0) + 1e-6
        assert out["passed"] is True
        assert out["residual_history"][0] > 0.0

    def test_car_without_nu_exit_2(self, tmp_path):
        path = tmp_path / "plain.json"
        save_tuple_file(path, np.ones((2, 1, 1), dtype=complex))
        assert main(["lift", "--file", str(path), "--family", "car"]) == 2

    def test_gaussian_tiny_sample_stalls(self, tmp_path, capsys):
        path = tmp_path / "g.json"
        x = np.random.default_rng(100).standard_normal((4, 2, 2)).astype(complex)
        save_tuple_file(path, x)
        code = main(
            ["lift", "--file", str(path), "--family", "gaussian", "--samples", "8", "--seed", "1"]
        )
        assert code == 1
        out = json.loads(capsys.readouterr().out)
        assert out["error"] == "stalled-iteration"
        assert out["step"] >= 1


class TestVerifyCommand:
    def test_all_suites_pass(self, capsys):
        assert main(["verify", "--suite", "all", "--d", "2", "--seed", "3"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["pass"] is True
        assert all(row["pass"] for row in out["identities"])
        assert all(row["deviation"] <= 1e-12 for row in out["identities"] if "moments" not in row["suite"])

    def test_explicit_nu(self, capsys):
        assert main(["verify", "--suite", "car-identities", "--nu", "0.5,0.5"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["nu"] == [0.5, 0.5]

    def test_dimension_cap_exit_2(self):
        assert main(["verify", "--suite", "car-identities", "--d", "11"]) == 2

    def test_corrupted_generator_fails_anticommutation(self, monkeypatch, capsys):
        def corrupt(sys):
            gens = list(sys.generators)
            gens[0] = gens[0] + 1e-4 * np.eye(sys.dim)
            return type(sys)(nu=sys.nu, generators=tuple(gens), density=sys.density)

        monkeypatch.setattr(cli, "VERIFY_SYSTEM_HOOK", corrupt)
        code = main(["verify", "--suite", "car-identities", "--d", "2", "--seed", "0"])
        assert code == 1
        out = json.loads(capsys.readouterr().out)
        failing = [row for row in out["identities"] if not row["pass"]]
        assert failing
        assert any("anticommutator" in row["identity"] for row in failing)

    def test_csv_format(self, capsys):
        assert main(["verify", "--suite", "orthogonality", "--d", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("deviation,identity")
        assert len(lines) > 1


class TestConstantsCommand:
    def test_car_c2_table(self, capsys):
        assert main(["constants", "--experiment", "car-c2", "--d", "6"]) == 0
        out = json.loads(capsys.readouterr().out)
        rows = out["rows"]
        assert len(rows) == 6
        assert rows[0]["binomial"] == pytest.approx(1 / np.sqrt(2))
        assert all(r["pass"] for r in rows)

    def test_car_c1(self, capsys):
        assert main(["constants", "--experiment", "car-c1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rows"][0]["ratio"] == pytest.approx(1 / np.sqrt(2), abs=1e-6)

    def test_search_csv(self, capsys):
        code = main(
            [
                "constants", "--experiment", "search", "--family", "rademacher",
                "--d", "2", "--n", "2", "--trials", "10", "--seed", "4", "--format", "csv",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2 and "min_ratio" in lines[0]

    def test_gauss_c2_small(self, capsys):
        code = main(
            ["constants", "--experiment", "gauss-c2", "--d", "3", "--samples", "20000", "--seed", "1"]
        )
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        witness_rows = [r for r in out["rows"] if r["experiment"] == "gauss-c2"]
        assert len(witness_rows) == 3
        for row in witness_rows:
            assert abs(row["value"] - row["target"]) <= 3.0 * row["stderr"] + 1e-12


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path, random_car_file):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            assert (
                main(
                    ["lift", "--file", random_car_file, "--family", "car",
                     "--seed", "7", "--out", str(out)]
                )
                == 0
            )
        assert out1.read_bytes() == out2.read_bytes()

    def test_verify_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "v1.json", tmp_path / "v2.json"
        for out in (out1, out2):
            assert main(["verify", "--d", "3", "--seed", "9", "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
