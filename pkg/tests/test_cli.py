import csv
import json
import math

import pytest

from memshape.cli import main
from memshape.geometry import SIGN_CONVENTION


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestExitCodes:
    def test_success(self, tmp_path):
        out = tmp_path / "run"
        assert main(["residual", "--epsilon", "0.5", "--output", str(out)]) == 0

    def test_input_error_names_parameter(self, tmp_path, capsys):
        code = main(["residual", "--epsilon", "-1", "--output", str(tmp_path / "x")])
        assert code == 2
        assert "epsilon" in capsys.readouterr().err

    def test_bad_margin(self, tmp_path, capsys):
        code = main(
            ["residual", "--epsilon", "0.5", "--margin", "0.9", "--output", str(tmp_path / "x")]
        )
        assert code == 2
        assert "margin" in capsys.readouterr().err

    def test_bad_orientation(self, tmp_path, capsys):
        code = main(["sphere", "--orientation", "Q", "--output", str(tmp_path / "x")])
        assert code == 2
        assert "orientation" in capsys.readouterr().err


class TestResidualCommand:
    def test_willmore_header(self, tmp_path):
        out = tmp_path / "res"
        assert (
            main(
                [
                    "residual",
                    "--epsilon",
                    "0",
                    "--c0",
                    "0",
                    "--lambda",
                    "0",
                    "--pressure",
                    "0",
                    "--form",
                    "u",
                    "--n",
                    "64",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        header = json.loads((tmp_path / "res.json").read_text())
        assert header["sup_norm"] < 1e-9
        assert header["sign_convention"] == SIGN_CONVENTION
        assert header["version"]
        assert "generated_at" in header
        rows = read_csv(tmp_path / "res.csv")
        assert len(rows) == 64

    def test_forms_agree_in_sup_norm(self, tmp_path):
        sups = {}
        for form in ("u", "psi"):
            out = tmp_path / f"res_{form}"
            main(["residual", "--epsilon", "0.5", "--form", form, "--output", str(out)])
            sups[form] = json.loads(out.with_suffix(".json").read_text())["sup_norm"]
        assert sups["u"] == pytest.approx(sups["psi"], rel=1e-7)


class TestDeterminism:
    def test_csv_bodies_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        argv = ["fit", "--epsilon", "0.3", "0.6", "--output"]
        assert main(argv + [str(a)]) == 0
        assert main(argv + [str(b)]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_rbc_deterministic(self, tmp_path):
        argv = ["rbc", "--kappa0", "-1", "--a", "0.5", "--r-infl", "0.8", "--output"]
        main(argv + [str(tmp_path / "r1")])
        main(argv + [str(tmp_path / "r2")])
        assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()


class TestProfileExport:
    def test_round_trip_curvature(self, tmp_path):
        out = tmp_path / "prof"
        assert (
            main(
                ["profile-export", "--epsilon", "0.6", "--n", "32", "--output", str(out)]
            )
            == 0
        )
        rows = read_csv(tmp_path / "prof.csv")
        assert len(rows) == 32
        sigma = SIGN_CONVENTION
        from memshape.geometry import cassini_u1_u2

        for row in rows:
            r = float(row["r"])
            u = float(row["u"])
            u1, _ = cassini_u1_u2(r, 0.6)
            psi = sigma * math.atan(u)
            dpsi = sigma * u1 / (1 + u * u)
            H = -0.5 * (math.cos(psi) * dpsi + math.sin(psi) / r)
            K = math.cos(psi) * math.sin(psi) * dpsi / r
            assert float(row["psi"]) == pytest.approx(psi, abs=1e-9)
            assert float(row["H"]) == pytest.approx(H, abs=1e-9)
            assert float(row["K"]) == pytest.approx(K, abs=1e-9)


class TestSphereCommand:
    def test_orientation_ii_roots(self, tmp_path):
        out = tmp_path / "sph"
        assert (
            main(
                [
                    "sphere",
                    "--c0",
                    "1",
                    "--lambda",
                    "1",
                    "--pressure",
                    "1",
                    "--orientation",
                    "II",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        header = json.loads((tmp_path / "sph.json").read_text())
        assert header["admissible_radii"] == pytest.approx([1.0, 2.0], rel=1e-12)

    def test_willmore_identically_zero(self, tmp_path):
        out = tmp_path / "sph0"
        assert main(["sphere", "--output", str(out)]) == 0
        header = json.loads((tmp_path / "sph0.json").read_text())
        assert header["identically_zero"] is True


class TestEnergyCommand:
    def test_willmore_anchor(self, tmp_path):
        out = tmp_path / "en"
        assert main(["energy", "--epsilon", "0", "--output", str(out)]) == 0
        rows = read_csv(tmp_path / "en.csv")
        assert float(rows[0]["bending"]) == pytest.approx(16 * math.pi, abs=1e-6)


class TestRbcCommand:
    def test_junction_row_repeats_psi(self, tmp_path):
        out = tmp_path / "rbc"
        assert (
            main(
                [
                    "rbc",
                    "--kappa0",
                    "-1",
                    "--a",
                    "0.5",
                    "--r-infl",
                    "0.8",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        rows = read_csv(tmp_path / "rbc.csv")
        inner = [r for r in rows if r["branch_id"] == "inner"]
        outer = [r for r in rows if r["branch_id"] == "outer"]
        assert float(inner[-1]["r"]) == pytest.approx(float(outer[0]["r"]), abs=1e-12)
        assert float(inner[-1]["psi"]) == pytest.approx(float(outer[0]["psi"]), abs=1e-12)
        header = json.loads((tmp_path / "rbc.json").read_text())
        assert header["metrics"]["area"] > 0


class TestVerifyTheorem:
    def test_symbolic_mode(self, tmp_path):
        out = tmp_path / "vt"
        assert main(["verify-theorem", "--mode", "symbolic", "--output", str(out)]) == 0
        doc = json.loads((tmp_path / "vt.json").read_text())
        assert doc["symbolic"]["verdict"] == "CONTRADICTION"
        roots = doc["symbolic"]["system"]["roots"]
        assert roots[0]["eps_fourth_power"]["text"] == "2/51"
        assert roots[1]["eps_fourth_power"]["text"] == "(-21 + sqrt(537))/48"
        assert doc["verified"] is True

    def test_numeric_mode_short_grid(self, tmp_path):
        out = tmp_path / "vn"
        assert (
            main(
                [
                    "verify-theorem",
                    "--mode",
                    "numeric",
                    "--grid",
                    "0.3,0.8",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        doc = json.loads((tmp_path / "vn.json").read_text())
        assert doc["numeric"]["all_residuals_positive"] is True


class TestConfigFile:
    def test_defaults_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("epsilon = 0.5\nn = 16\n")
        out = tmp_path / "cfg_run"
        assert (
            main(["residual", "--config", str(cfg), "--output", str(out)]) == 0
        )
        header = json.loads((tmp_path / "cfg_run.json").read_text())
        assert header["parameters"]["epsilon"] == 0.5
        assert header["n_points"] == 16
        # explicit flag wins over the config value
        out2 = tmp_path / "cfg_run2"
        assert (
            main(
                ["residual", "--config", str(cfg), "--n", "8", "--output", str(out2)]
            )
            == 0
        )
        header2 = json.loads((tmp_path / "cfg_run2.json").read_text())
        assert header2["n_points"] == 8

    def test_missing_config(self, tmp_path, capsys):
        code = main(
            ["residual", "--epsilon", "0.5", "--config", str(tmp_path / "nope.cfg")]
        )
        assert code == 2


class TestJsonFormat:
    def test_single_document(self, tmp_path):
        out = tmp_path / "doc"
        assert (
            main(
                [
                    "residual",
                    "--epsilon",
                    "0.4",
                    "--format",
                    "json",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        doc = json.loads((tmp_path / "doc.json").read_text())
        assert "rows" in doc and len(doc["rows"]) == 64
        assert not (tmp_path / "doc.csv").exists()
