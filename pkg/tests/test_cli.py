import csv
import json

import numpy as np
import pytest

from padenet import cli
from padenet.pipeline import load_model


@pytest.fixture
def pole2_files(tmp_path):
    samples = tmp_path / "s.json"
    model = tmp_path / "m.json"
    assert cli.main(["sample", "--function", "pole2", "--n", "32", "--rho", "1", "--refined",
                     "--out", str(samples)]) == 0
    assert cli.main(["fit", "--samples", str(samples), "--rho", "1", "--n1", "5", "--m1", "5",
                     "--out", str(model)]) == 0
    return samples, model


class TestCommands:
    def test_coeffs_with_check(self, pole2_files, tmp_path, capsys):
        samples, _ = pole2_files
        out = tmp_path / "c.json"
        assert cli.main(["coeffs", "--samples", str(samples), "--out", str(out), "--check"]) == 0
        doc = json.loads(out.read_text())
        c = {e["k"]: complex(e["re"], e["im"]) for e in doc["coeffs"]}
        assert abs(c[0] + 0.5) <= 1e-9 and abs(c[3] + 1 / 16) <= 1e-9
        assert "estimated coefficient error" in capsys.readouterr().out

    def test_fit_and_poles(self, pole2_files, capsys):
        _, model = pole2_files
        m = load_model(model)
        assert abs(m(0) + 0.5) <= 1e-10
        capsys.readouterr()
        assert cli.main(["poles", "--model", str(model)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        sign, _, re, im, mult = lines[1].split()
        assert sign == "+" and abs(float(re) - 2) <= 1e-10 and mult == "1"

    def test_eval_negative_ranges(self, pole2_files, tmp_path):
        _, model = pole2_files
        out = tmp_path / "g.csv"
        assert cli.main(["eval", "--model", str(model), "--re", "-3:3:7", "--im", "-1:1:3",
                         "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 21
        for r in rows:
            z = complex(float(r["re"]), float(r["im"]))
            if z == 2:
                assert r["abs"] == "inf"
                continue
            assert abs(float(r["abs"]) - abs(1 / (z - 2))) <= 1e-9

    def test_fit_with_negative_z0(self, pole2_files, tmp_path):
        samples, _ = pole2_files
        out = tmp_path / "m2.json"
        assert cli.main(["fit", "--samples", str(samples), "--rho", "1", "--n1", "5", "--m1", "5",
                         "--z0", "-1.1-1.1667i", "--out", str(out)]) == 0
        assert load_model(out).config.z0 == complex(-1.1, -1.1667)

    def test_pde_exact(self, tmp_path):
        out = tmp_path / "p.json"
        assert cli.main(["pde", "--times", "0,0.8", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["checks"] == {"plus_equals_minus": True, "real": True}
        assert max(doc["rows"][1]["errors"]) <= 1e-12

    def test_demo_writes_outputs(self, tmp_path):
        d = tmp_path / "demo"
        assert cli.main(["demo", "exfun", "--resolution", "5", "--out-dir", str(d)]) == 0
        for name in ("model.json", "poles.csv", "grid.csv"):
            assert (d / name).exists()
        header = (d / "poles.csv").read_text().splitlines()[0]
        assert header == "sign,neuron,re,im,multiplicity"


class TestExitCodes:
    def test_missing_file(self, tmp_path, capsys):
        code = cli.main(["fit", "--samples", str(tmp_path / "nope.json"), "--rho", "1",
                         "--n1", "5", "--m1", "5", "--out", str(tmp_path / "m.json")])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_rho_mismatch(self, pole2_files, tmp_path):
        samples, _ = pole2_files
        assert cli.main(["fit", "--samples", str(samples), "--rho", "0.5", "--n1", "5",
                         "--m1", "5", "--out", str(tmp_path / "m.json")]) == 2

    def test_analytic_function(self, tmp_path, capsys):
        samples = tmp_path / "s.json"
        samples.write_text(json.dumps({"rho": 1.0, "values": [[1.0, 0.0]] * 32}))
        code = cli.main(["fit", "--samples", str(samples), "--rho", "1", "--n1", "3", "--m1", "3",
                         "--out", str(tmp_path / "m.json")])
        assert code == 3
        assert "analytic" in capsys.readouterr().err

    def test_tampered_model(self, pole2_files, tmp_path, capsys):
        _, model = pole2_files
        doc = json.loads(model.read_text())
        doc["plus"]["gamma"] = [[1.0, 0.0]]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert cli.main(["poles", "--model", str(bad)]) == 2
        assert "plus.gamma" in capsys.readouterr().err

    def test_unknown_function(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            cli.main(["sample", "--function", "nope", "--n", "4", "--out", str(tmp_path / "x")])
        assert info.value.code == 2
