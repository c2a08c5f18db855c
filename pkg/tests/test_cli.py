"""Command-line surface: artifacts, verdict exit codes, report bundling."""
import json
import os

import numpy as np
import pytest

import pwlab
from pwlab import cli


@pytest.fixture()
def unit_weight_file(tmp_path):
    path = tmp_path / "m1.json"
    path.write_text(json.dumps({"window": [0.0, 0.0], "pieces": []}))
    return str(path)


@pytest.fixture()
def stair_file(tmp_path):
    path = tmp_path / "stair.json"
    path.write_text(json.dumps(pwlab.stair_model().to_dict()))
    return str(path)


@pytest.fixture()
def bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(pwlab.bad_model().to_dict()))
    return str(path)


class TestParsing:
    def test_grid_spec(self):
        grid = cli.parse_grid("-2:2:1,0.5")
        assert len(grid) == 5
        assert np.allclose(np.imag(grid.points), 0.5)

    def test_bad_grid_spec(self):
        with pytest.raises(cli.UsageError):
            cli.parse_grid("nonsense")
        with pytest.raises(cli.UsageError):
            cli.parse_grid("2:1:0.5")

    def test_band_spec(self):
        assert cli.parse_band("0.5:2") == (0.5, 2.0)
        with pytest.raises(cli.UsageError):
            cli.parse_band("2:0.5")


class TestPotential:
    def test_point_value(self, unit_weight_file, capsys):
        code = cli.main(["potential", "--weight", unit_weight_file,
                         "--z", "3,4"])
        assert code == cli.EXIT_PASS
        printed = float(capsys.readouterr().out.strip())
        assert abs(printed - 4.0 * np.pi) < 1e-5

    def test_grid_csv(self, unit_weight_file, tmp_path):
        out = str(tmp_path / "grid.csv")
        code = cli.main(["potential", "--weight", unit_weight_file,
                         "--grid=-1:1:1,0.5", "--out", out])
        assert code == cli.EXIT_PASS
        lines = open(out).read().strip().splitlines()
        assert lines[0] == "x,y,omega,poisson"
        assert len(lines) == 4

    def test_missing_mode_is_usage_error(self, unit_weight_file):
        assert cli.main(["potential", "--weight", unit_weight_file]) \
            == cli.EXIT_USAGE

    def test_missing_file_is_usage_error(self, tmp_path):
        assert cli.main(["potential", "--weight",
                         str(tmp_path / "nope.json"), "--z", "0,1"]) \
            == cli.EXIT_USAGE


class TestMultiplier:
    def test_artifacts_written(self, unit_weight_file, tmp_path):
        out = str(tmp_path) + os.sep
        code = cli.main(["multiplier", "--weight", unit_weight_file,
                         "--radius", "1000", "--grid=-10:10:0.5",
                         "--band", "0.9:1.2", "--out", out])
        assert code == cli.EXIT_PASS
        model = json.load(open(tmp_path / "model.json"))
        assert model["zeros"]
        cert = json.load(open(tmp_path / "certificate.json"))
        assert cert["verdict"] == "pass"
        assert cert["config"]["radius"] == 1000.0


class TestAxioms:
    def test_stair_passes(self, stair_file, tmp_path):
        out = str(tmp_path) + os.sep
        code = cli.main(["axioms", "--model", stair_file, "--out", out])
        assert code == cli.EXIT_PASS
        report = json.load(open(tmp_path / "axiom_report.json"))
        assert report["overall"] == "pass"

    def test_bad_fails(self, bad_file, tmp_path):
        out = str(tmp_path) + os.sep
        code = cli.main(["axioms", "--model", bad_file, "--out", out])
        assert code == cli.EXIT_FAIL
        report = json.load(open(tmp_path / "axiom_report.json"))
        assert report["axiom3"]["pass"] is False


class TestSmooth:
    def test_representation_written(self, stair_file, tmp_path):
        out = str(tmp_path) + os.sep
        code = cli.main(["smooth", "--model", stair_file, "--L", "16",
                         "--band", "0.05:8.0", "--out", out])
        assert code == cli.EXIT_PASS
        rep = json.load(open(tmp_path / "representation.json"))
        assert rep["branch"] == "general"

    def test_numerical_failure_exit_code(self, stair_file, tmp_path,
                                         monkeypatch):
        def explode(*args, **kwargs):
            raise pwlab.RetryWithLargerLError("needs a larger L")

        monkeypatch.setattr(cli, "build_majorant_representation", explode)
        code = cli.main(["smooth", "--model", stair_file,
                         "--out", str(tmp_path) + os.sep])
        assert code == cli.EXIT_NUMERIC


class TestPavlov:
    def test_stair_passes(self, stair_file, tmp_path):
        out = str(tmp_path) + os.sep
        code = cli.main(["pavlov", "--model", stair_file, "--tau", "2.0",
                         "--out", out])
        assert code == cli.EXIT_PASS
        report = json.load(open(tmp_path / "pavlov_report.json"))
        assert len(report["reports"]) == 2

    def test_bad_alpha_spec(self, stair_file, tmp_path):
        code = cli.main(["pavlov", "--model", stair_file,
                         "--alpha", "abc", "--out", str(tmp_path) + os.sep])
        assert code == cli.EXIT_USAGE


class TestReport:
    def test_bundle_with_figures(self, unit_weight_file, stair_file,
                                 tmp_path):
        out = str(tmp_path) + os.sep
        assert cli.main(["multiplier", "--weight", unit_weight_file,
                         "--radius", "1000", "--grid=-10:10:0.5",
                         "--band", "0.9:1.2", "--out", out]) == cli.EXIT_PASS
        assert cli.main(["smooth", "--model", stair_file, "--L", "16",
                         "--band", "0.05:8.0", "--out", out]) == cli.EXIT_PASS
        code = cli.main(["report", str(tmp_path), "--figures"])
        assert code == cli.EXIT_PASS

        summary = json.load(open(tmp_path / "summary.json"))
        kinds = {e["file"]: e["kind"] for e in summary["artifacts"]}
        assert kinds["model.json"] == "model"
        assert kinds["certificate.json"] == "certificate"
        assert kinds["representation.json"] == "representation"
        assert summary["overall"] == "pass"

        csv_lines = open(tmp_path / "summary.csv").read().strip().splitlines()
        assert csv_lines[0] == "file,kind,verdict"
        assert (tmp_path / "certificate.png").exists()
        assert (tmp_path / "representation.png").exists()

    def test_failed_artifact_fails_bundle(self, bad_file, tmp_path):
        out = str(tmp_path) + os.sep
        assert cli.main(["axioms", "--model", bad_file,
                         "--out", out]) == cli.EXIT_FAIL
        assert cli.main(["report", str(tmp_path)]) == cli.EXIT_FAIL

    def test_missing_directory(self, tmp_path):
        assert cli.main(["report", str(tmp_path / "nope")]) == cli.EXIT_USAGE


def test_entry_point_usage_exit():
    assert cli.main(["not-a-command"]) == cli.EXIT_USAGE
