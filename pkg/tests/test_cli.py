import json
from fractions import Fraction

from edc.cli import main
from edc.experiments import input_to_json
from edc.ifs import middle_third

F = Fraction


def write_input(tmp_path, doc, name="input.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestEncodeDecode:
    def test_round_trip_via_files(self, tmp_path, capsys):
        inp = write_input(tmp_path, input_to_json(middle_third()))
        blob = tmp_path / "set.edc"
        pts = tmp_path / "points.csv"
        assert main(["encode", "--codec", "poly", "--input", inp,
                     "--eps-exp", "8", "--out", str(blob)]) == 0
        assert main(["decode", str(blob), "--out", str(pts)]) == 0
        lines = pts.read_text().splitlines()
        assert lines[0] == "0/1" and lines[-1] == "1/1"
        assert len(lines) == 256  # depth 7 tree: 2 * 2**7 endpoints

    def test_bad_blob_is_validation_exit(self, tmp_path):
        blob = tmp_path / "junk.edc"
        blob.write_bytes(b"XXXX" + bytes(20))
        assert main(["decode", str(blob), "--out", str(tmp_path / "o.csv")]) == 2


class TestDist:
    def test_known_distance(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text("0/1\n1/3\n2/3\n1/1\n")
        b.write_text("0/1\n1/1\n")
        assert main(["dist", str(a), str(b)]) == 0
        assert capsys.readouterr().out.strip() == "1/3"


class TestDim:
    def test_counts_and_slope(self, tmp_path, capsys):
        pts = tmp_path / "p.csv"
        pts.write_text("\n".join(f"{k}/1024" for k in range(1025)) + "\n")
        assert main(["dim", "--in", str(pts), "--jmin", "2", "--jmax", "6"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "2,4"
        assert out[-1].startswith("slope,")
        assert abs(float(out[-1].split(",")[1]) - 1.0) < 0.02

    def test_window_error_is_validation_exit(self, tmp_path):
        pts = tmp_path / "p.csv"
        pts.write_text("0/1\n1/2\n1/1\n")
        assert main(["dim", "--in", str(pts), "--jmin", "2", "--jmax", "12"]) == 2


class TestGenerators:
    def test_rand_levels_csv(self, capsys):
        assert main(["rand", "--seed", "5", "--dist", "uniform:2/5,3/5",
                     "--depth", "3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "level,index,left,right"
        assert out[1] == "0,1,0/1,1/1"
        assert len(out) == 1 + 1 + 2 + 4 + 8

    def test_ck_levels_csv(self, capsys):
        assert main(["ck", "--rho", "1/4", "--theta", "1/2", "--zeta", "1/20",
                     "--seed", "7", "--depth", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "index,left,right"
        assert len(out) == 5

    def test_pack_csv(self, capsys):
        assert main(["pack", "--rho", "1/4", "--theta", "1/2", "--zeta", "1/20",
                     "--seed", "3", "--eps-exp-min", "7", "--eps-exp-max", "8",
                     "--trials", "8"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "ell,log2_packing,size"
        assert len(out) == 3


class TestSweepAndFit:
    def test_sweep_then_fit(self, tmp_path, capsys):
        cfg = {
            "codec": "poly",
            "input": input_to_json(middle_third()),
            "eps_exp_min": 8,
            "eps_exp_max": 12,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        csv_path = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", str(cfg_path),
                     "--out-csv", str(csv_path), "--fit", "linear"]) == 0
        capsys.readouterr()
        assert main(["fit", "--in", str(csv_path), "--model", "linear"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "model,linear"
        assert any(line.startswith("r_squared,") for line in out)
        slope = float([l for l in out if l.startswith("coefficient_1")][0].split(",")[1])
        assert slope == 4.0  # one bit per coefficient per halving

    def test_budget_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setenv("EDC_BUDGET_POINTS", "16")
        inp = write_input(tmp_path, input_to_json(middle_third()))
        assert main(["encode", "--codec", "poly", "--input", inp,
                     "--eps-exp", "12", "--out", str(tmp_path / "x.edc")]) == 4
