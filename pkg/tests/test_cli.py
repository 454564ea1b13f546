import json

import numpy as np
import pytest

from spherekit import catalog
from spherekit import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pyramid(tmp_path):
    path = tmp_path / "pyramid.json"
    catalog.square_pyramid().write(path)
    return str(path)


@pytest.fixture
def simplex3(tmp_path):
    path = tmp_path / "simplex3.json"
    catalog.simplex(3).write(path)
    return str(path)


class TestQuad:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "quad", "3", "1", "1", "0")
        assert code == 0
        data = json.loads(out)
        np.testing.assert_allclose(data["nodes"], [-1 / 3, 1.0])
        np.testing.assert_allclose(data["weights"], [0.75, 0.25])
        assert data["L"] == 2

    def test_table(self, capsys):
        code, out, _ = run(
            capsys, "--format", "table", "quad", "3", "2", "0", "0"
        )
        assert code == 0
        assert "weight" in out
        assert "0.57735026919" in out

    def test_invalid_dimension(self, capsys):
        code, _, err = run(capsys, "quad", "1", "2", "0", "0")
        assert code == 2
        assert "n >= 2" in err

    def test_usage_error(self, capsys):
        code, _, err = run(capsys, "quad", "3")
        assert code == 64
        assert "usage" in err

    def test_csv_not_available(self, capsys):
        code, _, err = run(
            capsys, "--format", "csv", "quad", "3", "1", "0", "0"
        )
        assert code == 64
        assert "csv" in err


class TestCertify:
    def test_square_pyramid(self, capsys, pyramid):
        code, out, _ = run(capsys, "certify", pyramid)
        assert code == 0
        data = json.loads(out)
        assert data["strength"] == 2
        assert data["class"] == "weakly-sharp-even"
        assert data["m"] == 1

    def test_table_output(self, capsys, pyramid):
        code, out, _ = run(capsys, "--format", "table", "certify", pyramid)
        assert code == 0
        assert "weakly-sharp-even" in out

    def test_bad_candidates(self, capsys, pyramid, tmp_path):
        path = tmp_path / "candidates.json"
        path.write_text(json.dumps([[0, 0, "up"]]))
        code, _, err = run(
            capsys, "certify", pyramid, "--candidates", str(path)
        )
        assert code == 1
        assert "list of points" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "certify", str(tmp_path / "none.json"))
        assert code == 1
        assert err

    def test_bad_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, _ = run(capsys, "certify", str(path))
        assert code == 1

    def test_invalid_code(self, capsys, tmp_path):
        path = tmp_path / "code.json"
        path.write_text(
            json.dumps(
                {"dim": 2, "points": [[1, 0], [0, 2]], "weights": [0.5, 0.5]}
            )
        )
        code, _, err = run(capsys, "certify", str(path))
        assert code == 1
        assert "norm" in err


class TestBound:
    def test_upper(self, capsys, pyramid):
        code, out, _ = run(capsys, "bound", "upper", pyramid, "--f", "exp")
        assert code == 0
        data = json.loads(out)
        assert np.isclose(data["bound"], np.e / 4 + 0.75 * np.exp(-1 / 3))
        assert data["certified"] is True

    def test_lower_with_parameters(self, capsys, pyramid):
        code, out, _ = run(
            capsys,
            "bound",
            "lower",
            pyramid,
            "--f",
            "exp",
            "--param",
            "c=2",
            "--samples",
            "100",
        )
        assert code == 0
        data = json.loads(out)
        assert np.isclose(data["bound"], np.exp(-2) / 4 + 0.75 * np.exp(2 / 3))

    def test_hypothesis_failure(self, capsys, pyramid):
        code, _, err = run(
            capsys, "bound", "upper", pyramid, "--f", "exp", "--param", "c=-1"
        )
        assert code == 2
        assert "not certified" in err

    def test_forced(self, capsys, pyramid):
        code, out, _ = run(
            capsys,
            "--format",
            "table",
            "bound",
            "upper",
            pyramid,
            "--f",
            "exp",
            "--param",
            "c=-1",
            "--force",
        )
        assert code == 0
        assert "UNCERTIFIED" in out

    def test_insufficient_strength(self, capsys, pyramid):
        code, _, _ = run(
            capsys,
            "bound",
            "lower",
            pyramid,
            "--f",
            "exp",
            "--m",
            "2",
            "--nu",
            "0",
        )
        assert code == 2

    def test_csv_curve(self, capsys, pyramid):
        code, out, _ = run(
            capsys, "--format", "csv", "bound", "upper", pyramid, "--f", "exp"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "param,potential_or_energy,bound"
        assert len(lines) == 102


class TestEnergy:
    def test_frame_energy(self, capsys, simplex3):
        code, out, _ = run(capsys, "energy", simplex3, "--p", "2")
        assert code == 0
        data = json.loads(out)
        assert data["energy"] == 1 / 3
        assert '"energy": 0.3333333333333333' in out

    def test_several_exponents_csv(self, capsys, simplex3):
        code, out, _ = run(
            capsys, "--format", "csv", "energy", simplex3, "--p", "1", "2", "4"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "param,potential_or_energy,bound"
        assert len(lines) == 4

    def test_potential_family(self, capsys, simplex3):
        code, out, _ = run(
            capsys,
            "energy",
            simplex3,
            "--f",
            "polynomial",
            "--param",
            "coeffs=1,1",
        )
        assert code == 0
        assert json.loads(out)["energy"] == pytest.approx(4 / 3)

    def test_needs_potential(self, capsys, simplex3):
        code, _, _ = run(capsys, "energy", simplex3)
        assert code == 64


class TestFrameBound:
    def test_simplex_reference(self, capsys, simplex3):
        code, out, _ = run(
            capsys, "frame-bound", simplex3, "--ref", "simplex:n=3"
        )
        assert code == 0
        data = json.loads(out)
        assert data["bound"] == pytest.approx(1 / 3, abs=1e-12)
        assert data["bound_applies"] is True
        assert data["equality_flags"]["all"] is True
        assert data["simplex_bound"] == pytest.approx(data["bound"])

    def test_explicit_set(self, capsys, simplex3, tmp_path):
        ref = tmp_path / "ref.json"
        catalog.simplex(3).write(ref)
        code, out, _ = run(
            capsys, "frame-bound", simplex3, "--ref", str(ref), "--A", "+-1/3"
        )
        assert code == 0
        assert json.loads(out)["A"] == pytest.approx([-1 / 3, 1 / 3])

    def test_reference_without_set(self, capsys, simplex3):
        code, _, err = run(capsys, "frame-bound", simplex3, "--ref", "cube")
        assert code == 64
        assert "--A" in err

    def test_wrong_set(self, capsys, simplex3):
        code, _, _ = run(
            capsys, "frame-bound", simplex3, "--ref", "simplex", "--A", "+-0.2"
        )
        assert code == 2


class TestCatalogCommand:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "catalog", "list")
        assert code == 0
        names = [item["name"] for item in json.loads(out)]
        assert names == catalog.names()

    def test_list_table(self, capsys):
        code, out, _ = run(capsys, "--format", "table", "catalog", "list")
        assert code == 0
        assert "icosahedron" in out

    def test_emit(self, capsys):
        code, out, _ = run(capsys, "catalog", "emit", "cross_polytope:n=4")
        assert code == 0
        data = json.loads(out)
        assert data["dim"] == 4
        assert len(data["points"]) == 8

    def test_emit_non_numeric_parameter(self, capsys):
        code, out, err = run(capsys, "catalog", "emit", "cube:n=x")
        assert code == 1
        assert out == ""
        assert "not a number" in err
        assert "Traceback" not in err

    def test_emit_unknown(self, capsys):
        code, _, _ = run(capsys, "catalog", "emit", "dodecahedron")
        assert code == 2

    def test_emit_needs_name(self, capsys):
        code, _, _ = run(capsys, "catalog", "emit")
        assert code == 64

