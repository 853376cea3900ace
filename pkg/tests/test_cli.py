import json
import os
from pathlib import Path

import numpy as np
import pytest

from spectral_cat import cli, gamut
from spectral_cat.spectra import WHITE_POINTS, xyz_from_chromaticity

from .conftest import write_dataset

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("SPECTRAL_CAT_REGEN_GOLDEN") == "1"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_meta(doc):
    if isinstance(doc, dict):
        return {k: strip_meta(v) for k, v in doc.items() if k != "meta"}
    if isinstance(doc, list):
        return [strip_meta(v) for v in doc]
    return doc


def check_golden(name, text):
    path = GOLDEN / name
    if REGEN:
        path.write_text(text)
    expected = path.read_text()
    if name.endswith(".json"):
        assert strip_meta(json.loads(text)) == strip_meta(json.loads(expected))
    else:
        assert text == expected


class TestTransform:
    def test_table_example(self, capsys):
        code, out, _ = run(capsys, "transform", "--method", "spectral-sym",
                           "--src-wp", "A", "--dst-wp", "D65", "--xyz", "0.2,0.3,0.1")
        assert code == 0
        row = out.splitlines()[1].split(",")
        np.testing.assert_allclose([float(v) for v in row[1:4]],
                                   [0.1699, 0.3, 0.2415], atol=5e-4)
        check_golden("transform_table.csv", out)

    def test_cat02_d0_identity(self, capsys):
        code, out, _ = run(capsys, "transform", "--method", "cat02", "--d", "0",
                           "--src-wp", "A", "--dst-wp", "D65", "--xyz", "0.2,0.3,0.1")
        assert code == 0
        assert out.splitlines()[1].startswith("0,0.2,0.3,0.1,")

    def test_0_100_scale_round_trip(self, capsys):
        code, out, _ = run(capsys, "transform", "--src-wp", "109.85,100,35.585",
                           "--dst-wp", "D65", "--xyz", "20,30,10")
        assert code == 0
        assert out.splitlines()[1].split(",")[2] == "30"

    def test_batch_with_failure(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        rows = rng.uniform(0.15, 0.35, (100, 1)) * np.array(WHITE_POINTS["A"]) \
            * rng.uniform(0.9, 1.1, (100, 3))
        rows[37] = xyz_from_chromaticity([0.9, 0.1], 0.3)  # far outside the locus
        path = tmp_path / "in.csv"
        path.write_text("id,X,Y,Z\n" + "".join(
            f"r{k},{x!r},{y!r},{z!r}\n" for k, (x, y, z) in enumerate(rows.tolist())))
        code, out, err = run(capsys, "transform", "--src-wp", "A", "--dst-wp",
                             "D65", "--input", str(path))
        assert code == 2
        lines = out.splitlines()[1:]
        assert len(lines) == 100
        status = [ln.split(",")[6] for ln in lines]
        assert status.count("ok") == 99
        assert lines[37].startswith("r37,") and status[37] == "failed"
        assert "NoConvergence" in lines[37] or "SingularSystem" in lines[37]
        assert "1 of 100 rows failed" in err

    def test_unparsable_row(self, tmp_path, capsys):
        path = tmp_path / "in.csv"
        path.write_text("X,Y,Z\n0.2,0.3,0.1\nfoo,0.3,0.1\n")
        code, out, _ = run(capsys, "transform", "--method", "hpe", "--src-wp", "A",
                           "--dst-wp", "D65", "--input", str(path))
        assert code == 2
        assert "unparsable" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "transform", "--format", "json", "--src-wp",
                           "A", "--dst-wp", "D65", "--xyz", "0.2,0.3,0.1")
        doc = json.loads(out)
        assert code == 0
        assert doc["meta"]["tool"] == "spectral-cat"
        assert doc["rows"][0]["status"] == "ok"

    @pytest.mark.parametrize("argv", [
        ["transform", "--src-wp", "A", "--dst-wp", "D65"],
        ["transform", "--src-wp", "F11", "--dst-wp", "D65", "--xyz", "1,1,1"],
        ["transform", "--src-wp", "A", "--dst-wp", "D65", "--d", "2",
         "--xyz", "0.2,0.3,0.1"],
        ["transform", "--src-wp", "A", "--dst-wp", "D65", "--xyz", "0.2,0.3"],
        ["transform", "--method", "bradford", "--src-wp", "A", "--dst-wp", "D65",
         "--xyz", "0.2,0.3,0.1"],
        ["frobnicate"],
    ])
    def test_config_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 1
        assert "usage" in err


class TestReconstruct:
    def test_flat(self, capsys):
        code, out, err = run(capsys, "reconstruct", "--illuminant-wp", "EE",
                             "--xyz", "1,1,1", "--unweighted")
        assert code == 1  # two referencing sources given
        code, out, err = run(capsys, "reconstruct", "--illuminant-wp", "D65",
                             "--xyz", "0.95047,1,1.08883")
        assert code == 0
        vals = [float(ln.split(",")[1]) for ln in out.splitlines()[1:]]
        assert len(vals) == 36
        np.testing.assert_allclose(vals, 1.0, rtol=1e-5)
        side = json.loads(err)
        assert side["iterations"] >= 0 and side["residual_norm"] < 1e-8

    def test_table_input(self, tmp_path, capsys):
        out = tmp_path / "rho.csv"
        code, _, _ = run(capsys, "reconstruct", "--illuminant-wp", "A",
                         "--xyz", "0.2,0.3,0.1", "--out", str(out))
        assert code == 0
        vals = [float(ln.split(",")[1]) for ln in out.read_text().splitlines()[1:]]
        assert min(vals) > 0
        assert json.loads(out.with_suffix(".json").read_text())["meta"]["command"] \
            == "reconstruct"
        check_golden("reconstruct_table_A.csv", out.read_text())

    def test_illuminant_file(self, tmp_path, capsys):
        spd = tmp_path / "ill.csv"
        spd.write_text("wavelength_nm,value\n" + "".join(
            f"{w},1\n" for w in range(380, 731, 10)))
        code, out, _ = run(capsys, "reconstruct", "--illuminant-file", str(spd),
                           "--xyz", "0.2,0.3,0.1", "--format", "json")
        assert code == 0
        assert len(json.loads(out)["rho"]) == 36

    def test_unweighted_white(self, capsys):
        code, out, _ = run(capsys, "reconstruct", "--unweighted",
                           "--xyz", "0.95047,1,1.08883", "--format", "json")
        assert code == 0
        assert min(json.loads(out)["rho"]) > 0

    def test_out_of_locus(self, capsys):
        xyz = ",".join(repr(float(v)) for v in xyz_from_chromaticity([0.9, 0.1], 0.3))
        code, _, err = run(capsys, "reconstruct", "--illuminant-wp", "D65",
                           "--xyz", xyz)
        assert code == 3
        assert "no convergence" in err


class TestEval:
    def test_identity_column_is_zero(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        d65 = np.array(WHITE_POINTS["D65"])
        src = rng.uniform(0.1, 0.7, (15, 1)) * d65 * rng.uniform(0.9, 1.1, (15, 3))
        write_dataset(tmp_path, "ident", d65, d65, src, src, name="Ident")
        write_dataset(tmp_path, "mc", d65, d65, src[:5], src[:5], name="McCann")
        out = tmp_path / "table.csv"
        code, _, _ = run(capsys, "eval", "--data", str(tmp_path), "--methods",
                         "spectral,cat16", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "dataset,spectral,cat16"
        assert [ln.split(",")[0] for ln in lines[1:]] == \
            ["McCann", "Ident", "Mean (All Datasets)", "Mean (No McCann)"]
        for ln in lines[1:]:
            assert max(abs(float(v)) for v in ln.split(",")[1:]) < 1e-6
        doc = json.loads(out.with_suffix(".json").read_text())
        assert doc["reports"]["spectral"]["counts"] == {"Ident": 15, "McCann": 5}

    def test_no_datasets(self, tmp_path, capsys):
        code, _, _ = run(capsys, "eval", "--data", str(tmp_path))
        assert code == 1

    def test_bad_method(self, tmp_path, capsys):
        code, _, _ = run(capsys, "eval", "--data", str(tmp_path), "--methods", "x")
        assert code == 1


def _sweep_doc(capsys, tmp_path, *extra):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "gamut-sweep", "--out", str(out), *extra)
    assert code == 0
    return out.read_text(), json.loads(out.with_suffix(".json").read_text())


class TestGamutSweep:
    def test_small_spectral(self, tmp_path, capsys):
        csv_text, doc = _sweep_doc(capsys, tmp_path, "--count", "3",
                                   "--samples", "36")
        assert doc["total_outside"] == doc["total_negative"] == 0
        assert csv_text.splitlines()[0] == \
            "angle_index,src_x,src_y,dst_x,dst_y,inside,negative"
        assert len(csv_text.splitlines()) == 1 + 3 * 36
        check_golden("sweep_small.csv", csv_text)
        check_golden("sweep_small.json", json.dumps(doc, indent=2, sort_keys=True))

    def test_fraction_zero_cat16(self, tmp_path, capsys):
        _, doc = _sweep_doc(capsys, tmp_path, "--method", "cat16",
                            "--fraction", "0", "--samples", "72")
        assert doc["total_outside"] == 0

    def test_cat16_leaves_locus(self, tmp_path, capsys):
        _, doc = _sweep_doc(capsys, tmp_path, "--method", "cat16", "--samples", "90")
        assert all(s["outside"] >= 1 for s in doc["sweeps"])

    @pytest.mark.parametrize("extra", [["--fraction", "1"], ["--y-slice", "0"],
                                       ["--count", "0"], ["--src-wp", "0.9,0.1,0.9"]])
    def test_config_errors(self, capsys, extra):
        code, _, _ = run(capsys, "gamut-sweep", *extra)
        assert code == 1


class TestLocus:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "locus")
        assert code == 0
        check_golden("locus.csv", out)
        assert "550," in out

    def test_custom_cmf(self, tmp_path, capsys, cmf):
        path = tmp_path / "cmf.csv"
        path.write_text("wavelength_nm,xbar,ybar,zbar\n" + "".join(
            f"{w},{r[0]!r},{r[1]!r},{r[2]!r}\n"
            for w, r in zip(range(380, 731, 10), cmf.tolist())))
        code, out, _ = run(capsys, "locus", "--cmf", str(path))
        assert code == 0
        assert out == (GOLDEN / "locus.csv").read_text()

    def test_missing_cmf(self, capsys):
        code, _, _ = run(capsys, "locus", "--cmf", "/nonexistent.csv")
        assert code == 1


def test_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "gamut-sweep", "--count", "2", "--samples", "24", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.strip() == "0.1.0"


def test_module_entry():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "spectral_cat", "locus"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "locus.csv").read_text()
