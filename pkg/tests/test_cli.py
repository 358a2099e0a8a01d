import csv
import json
import math

import pytest

from gbtkit.cli import main, parse_method, parse_plant
from gbtkit.errors import GbtError

from oracles import F_C, F_SAMP, T, W_C, lpf_analog, lpf_discrete

FC_ARG = f"lpf:fc={F_C!r}"
WCT = W_C * T


class TestPlantParsing:
    def test_lpf(self):
        plant = parse_plant("lpf:fc=1000")
        assert plant.poles == (pytest.approx(2 * math.pi * 1000),)
        assert plant.gain == pytest.approx(2 * math.pi * 1000)

    def test_pzk(self):
        plant = parse_plant("pzk:k=2,z=1+1j;1-1j,p=1;1")
        assert plant.gain == 2.0
        assert set(plant.zeros) == {1 + 1j, 1 - 1j}
        assert plant.poles == (1 + 0j, 1 + 0j)

    def test_unknown_kind(self):
        with pytest.raises(GbtError):
            parse_plant("butterworth:order=4")

    def test_lpf_needs_fc(self):
        with pytest.raises(GbtError):
            parse_plant("lpf:")


class TestMethodParsing:
    def test_bare_names(self):
        assert parse_method("tustin").alpha == 0.5
        assert parse_method("euler").alpha == 1.0

    def test_parameterized(self):
        assert parse_method("al-alaoui:a=1").alpha == 1.0
        assert parse_method("pole:ap=0").alpha == 1.0
        assert parse_method("gbt:alpha=0.6").alpha == 0.6


class TestDiscretize:
    def test_tustin_lpf_coefficients(self, capsys):
        rc = main(["discretize", "--plant", FC_ARG, "--fs", "12000",
                   "--alpha", "0.5"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        scale = 1.0 + 0.5 * WCT
        assert doc["num_z_ascending"] == pytest.approx(
            [0.5 * WCT / scale] * 2, rel=1e-9)
        assert doc["den_z_ascending"] == pytest.approx(
            [(0.5 * WCT - 1.0) / scale, 1.0], rel=1e-9)
        assert doc["stable"] is True
        expected_pole = (1.0 - 0.5 * WCT) / (1.0 + 0.5 * WCT)
        assert doc["poles"][0][0] == pytest.approx(expected_pole, abs=1e-12)
        assert doc["difference_equation"]["in_coeffs"] == pytest.approx(
            doc["num_z_ascending"][::-1])

    def test_method_equals_alpha(self, capsys):
        main(["discretize", "--plant", FC_ARG, "--fs", "12000", "--method", "tustin"])
        by_method = json.loads(capsys.readouterr().out)
        main(["discretize", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5"])
        by_alpha = json.loads(capsys.readouterr().out)
        assert by_method == by_alpha

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "d.json"
        rc = main(["discretize", "--plant", FC_ARG, "--fs", "12000",
                   "--alpha", "0.5", "--out", str(out)])
        assert rc == 0
        assert json.loads(out.read_text()) == json.loads(capsys.readouterr().out)

    def test_alpha_and_method_conflict(self, capsys):
        rc = main(["discretize", "--plant", FC_ARG, "--fs", "12000",
                   "--alpha", "0.5", "--method", "euler"])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_neither_alpha_nor_method(self, capsys):
        rc = main(["discretize", "--plant", FC_ARG, "--fs", "12000"])
        assert rc == 1

    def test_missing_required_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["discretize", "--fs", "12000", "--alpha", "0.5"])
        assert exc.value.code == 2


class TestBode:
    def test_csv_columns_and_values(self, tmp_path, capsys):
        out = tmp_path / "bode.csv"
        rc = main(["bode", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5",
                   "--f-lo", "100", "--f-hi", "5000", "--n", "25",
                   "--out", str(out)])
        assert rc == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 25
        assert list(rows[0]) == ["freq_hz", "mag_db_analog", "mag_db_discrete",
                                 "phase_deg_analog", "phase_deg_discrete",
                                 "mag_err_db", "phase_err_deg"]
        for row in (rows[0], rows[12], rows[-1]):
            f = float(row["freq_hz"])
            assert float(row["mag_db_analog"]) == pytest.approx(
                20 * math.log10(abs(lpf_analog(f))), abs=1e-9)
            assert float(row["mag_db_discrete"]) == pytest.approx(
                20 * math.log10(abs(lpf_discrete(0.5, f))), abs=1e-9)
            assert float(row["mag_err_db"]) == pytest.approx(
                float(row["mag_db_discrete"]) - float(row["mag_db_analog"]), abs=1e-12)

    def test_stdout_csv(self, capsys):
        rc = main(["bode", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5",
                   "--f-lo", "100", "--f-hi", "5000", "--n", "5"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("freq_hz,")
        assert len(lines) == 6

    def test_no_zoh_flag(self, tmp_path):
        out = tmp_path / "bode.csv"
        main(["bode", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5",
              "--f-lo", "100", "--f-hi", "5000", "--n", "5", "--no-zoh",
              "--out", str(out)])
        with open(out) as fh:
            row = next(csv.DictReader(fh))
        f = float(row["freq_hz"])
        assert float(row["mag_db_discrete"]) == pytest.approx(
            20 * math.log10(abs(lpf_discrete(0.5, f, zoh=False))), abs=1e-9)

    def test_plot_written_next_to_csv(self, tmp_path, capsys):
        out = tmp_path / "bode.csv"
        rc = main(["bode", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5",
                   "--f-lo", "100", "--f-hi", "5000", "--n", "16",
                   "--out", str(out), "--plot"])
        assert rc == 0
        fig = tmp_path / "bode.png"
        assert fig.exists() and fig.stat().st_size > 0

    def test_grid_outside_band_fails(self, capsys):
        rc = main(["bode", "--plant", FC_ARG, "--fs", "12000", "--alpha", "0.5",
                   "--f-lo", "100", "--f-hi", "7000", "--n", "8"])
        assert rc == 1


class TestPrewarp:
    def test_reference_value(self, capsys):
        rc = main(["prewarp", "--f", "4823", "--fs", "12000"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        expect = 2 * 12000 * math.tan(math.pi * 4823 / 12000)
        assert doc["omega_prewarped_rad_s"] == pytest.approx(expect, rel=1e-12)
        assert doc["f_prewarped_hz"] == pytest.approx(12001.295, abs=1e-3)

    def test_beyond_nyquist_fails(self, capsys):
        rc = main(["prewarp", "--f", "6000", "--fs", "12000"])
        assert rc == 1


class TestSimulate:
    def test_probe_json_and_sample_csv(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        rc = main(["simulate", "--plant", FC_ARG, "--fs", "12000",
                   "--alpha", "0.5", "--f", "1000", "--settle", "20",
                   "--cycles", "10", "--out", str(out)])
        assert rc == 0
        stdout = capsys.readouterr().out
        doc = json.loads(stdout[:stdout.index("wrote")])
        expect = lpf_discrete(0.5, 1000.0, zoh=False)
        assert doc["mag_db"] == pytest.approx(20 * math.log10(abs(expect)), abs=1e-5)
        assert doc["residual"] < 1e-6
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == ["n", "t_s", "v_in", "v_out"]
        assert len(rows) == math.ceil(30 * 12000 / 1000)
        assert float(rows[1]["v_in"]) == pytest.approx(
            math.sin(2 * math.pi * 1000 / 12000))

    def test_unstable_alpha_fails(self, capsys):
        rc = main(["simulate", "--plant", FC_ARG, "--fs", "12000",
                   "--alpha", "0.0", "--f", "1000"])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestDesign:
    def scenario_doc(self):
        return {
            "kind": "A",
            "f_exp": 0.75 * F_C,
            "f_ref": 0.75 * F_C,
            "plant": FC_ARG,
            "f_samp": 12000,
            "channel": "mag",
            "seed": 0,
        }

    def test_scenario_file_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(self.scenario_doc()))
        out = tmp_path / "result.json"
        rc = main(["design", "--scenario", str(path), "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["channel"] == "mag"
        assert doc["alpha_opt"] == pytest.approx(0.5, abs=1e-6)
        assert doc["q_value"] == pytest.approx(0.71766, abs=1e-4)
        assert doc["normalization_refs"]["L_err_max_db"] == pytest.approx(
            3.96715, abs=1e-4)

    def test_channel_flag_overrides_file(self, tmp_path, capsys):
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(self.scenario_doc()))
        rc = main(["design", "--scenario", str(path), "--channel", "tradeoff"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out.split("\nfield")[0])
        assert doc["channel"] == "tradeoff"
        assert doc["alpha_opt"] == pytest.approx(0.5747, abs=1e-3)

    def test_missing_channel_fails(self, tmp_path, capsys):
        doc = self.scenario_doc()
        del doc["channel"]
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(doc))
        rc = main(["design", "--scenario", str(path)])
        assert rc == 1

    def test_inline_pzk_plant_document(self, tmp_path, capsys):
        doc = self.scenario_doc()
        doc["plant"] = {"gain": W_C, "zeros": [], "poles": [[W_C, 0.0]]}
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(doc))
        rc = main(["design", "--scenario", str(path)])
        assert rc == 0
        out = json.loads(capsys.readouterr().out.split("\nfield")[0])
        assert out["alpha_opt"] == pytest.approx(0.5, abs=1e-6)
