import csv
import io
import json
from fractions import Fraction

import pytest
from conftest import HERMITE, T2_TEXT

from eigenroot.cli import main
from eigenroot.operators import classify
from eigenroot.records import (RunRecord, atomic_write, classification_dict, curve_json, svg_metadata, svg_text)
from eigenroot.scaling import EmpiricalMeasure, measure_from_points


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify", "--op", T2_TEXT)
    assert code == 0
    for line in ("j0=2", "d=5/7", "A={7}", "jm=7"):
        assert line in out.splitlines()


def test_eigen_command(capsys):
    code, out, _ = run(capsys, "eigen", "--op", "z*D + D^2", "--n", "2", "--print-coeffs")
    assert code == 0
    assert out.splitlines() == ["lambda=2", "1 0 1"]


def test_scan_command_rows(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", "--op", "z*D + D^2", "--n-from", "10", "--n-to", "20")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    assert list(rows[0]) == ["n", "r", "ratio", "collision"]
    assert all(float(r["ratio"]) > 0 for r in rows)
    path, jpath = tmp_path / "s.csv", tmp_path / "s.json"
    assert main(["scan", "--op", "z*D + D^2", "--n-from", "3", "--n-to", "5", "--csv", str(path),
                 "--json", str(jpath)]) == 0
    rec = RunRecord.from_json(jpath.read_text())
    assert rec.d == Fraction(1, 2) and rec.classification["d"] == "1/2"
    assert [r["n"] for r in rec.results] == [3, 4, 5]
    assert len(path.read_text().splitlines()) == 4


def test_scan_collision_rows(capsys):
    code, out, _ = run(capsys, "scan", "--op", "-2*z*D + z^2*D^2 + D^3", "--n-from", "1", "--n-to", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["collision"] for r in rows] == ["0", "1", "1", "0"]
    assert rows[1]["r"] == ""


def test_exit_codes(capsys):
    assert run(capsys, "classify", "--op", "z^3*D^2")[0] == 2
    assert run(capsys, "classify", "--op", "z*D +")[0] == 2
    assert run(capsys, "eigen", "--op", "z*D + z^2*D^2", "--n", "3")[0] == 2  # non-degenerate
    assert run(capsys, "eigen", "--op", "-2*z*D + z^2*D^2 + D^3", "--n", "2")[0] == 3
    assert run(capsys, "measure", "--op", "-2*z*D + z^2*D^2 + D^3", "--n", "2", "--svg", "/tmp/x.svg")[0] == 3
    assert run(capsys, "curve", "--op", "z*D + D^2", "--sample", "2i")[0] == 3


def test_roots_and_residual_commands(capsys):
    code, out, _ = run(capsys, "roots", "--op", "z*D + D^2", "--n", "2")
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(capsys, "cauchy-residual", "--op", "z*D + D^2", "--n", "30", "--points", "3", "2+2i")
    assert code == 0 and len(out.splitlines()) == 2
    assert run(capsys, "cauchy-residual", "--op", "z*D + D^2", "--n", "30", "--points", "0.1i")[0] == 3


def test_curve_command(capsys, tmp_path):
    out_json = tmp_path / "c.json"
    code, out, _ = run(capsys, "curve", "--op", "z*D + D^2", "--discriminant", "--sample", "3", "--json", str(out_json))
    assert code == 0
    assert "F(z,y) = y^2 + z*y - 1" in out
    data = json.loads(out_json.read_text())
    assert data["discriminant"]["resultant_degree"] == 2
    pts = sorted((float(a), float(b)) for a, b in data["discriminant"]["points"])
    assert pts == pytest.approx([(0, -2), (0, 2)], abs=1e-12)
    assert float(data["branch_samples"][0]["y"][0]) == pytest.approx(0.30277563773199465)


def test_lemmas_command(capsys, tmp_path):
    cfg = tmp_path / "fleet.ini"
    cfg.write_text("[lemmas]\ndegrees = 10 20\nradii = 1, 20\norders = 1 2 3\nseeds = 3\n"
                   "lemma2_polys = z^2; z^3 + 1\n")
    out_csv = tmp_path / "l.csv"
    code, out, _ = run(capsys, "lemmas", "--config", str(cfg), "--csv", str(out_csv))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
    assert list(rows[0]) == ["lemma", "n", "A", "j", "lhs", "rhs", "holds", "seed"]
    assert all(r["holds"] == "True" for r in rows)
    # a margin below 1 makes the upper-bound checks on z^n-like samples fail
    cfg.write_text("[lemmas]\ndegrees = 10\nradii = 1\norders = 1\nseeds = 10\nmargin = 0.1\n")
    assert run(capsys, "lemmas", "--config", str(cfg))[0] == 4


def test_run_record_round_trip():
    rec = RunRecord(operator="z^2*D^2 + D^7", classification=classification_dict(classify(HERMITE)),
                    command="scan", parameters={"n_from": 1, "digits": 12},
                    results=[{"n": 1, "r": "1.5", "ratio": "1.5", "collision": 0}], version="0.1.0",
                    timing={"seconds": 0.25})
    back = RunRecord.from_json(rec.to_json())
    assert back == rec and back.d == Fraction(1, 2)
    bad = json.loads(rec.to_json())
    bad["schema_version"] = 99
    with pytest.raises(ValueError):
        RunRecord.from_json(json.dumps(bad))


def test_svg_two_dots_symmetric():
    m = measure_from_points([1j, -1j])
    text = svg_text(m, "pair")
    meta = svg_metadata(text)
    assert meta["ymin"] == -meta["ymax"]
    circles = [line for line in text.splitlines() if line.startswith("<circle")]
    assert len(circles) == 2
    cys = sorted(float(c.split('cy="')[1].split('"')[0]) for c in circles)
    assert cys[0] + cys[1] == pytest.approx(600)
    assert "<title>pair</title>" in text


def test_svg_refuses_empty():
    with pytest.raises(ValueError):
        svg_text(EmpiricalMeasure(0, (), masses=()), "empty")


def test_svg_deterministic_and_contains_atoms(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["measure", "--op", "z^2*D^2 + D^7", "--n", "40", "--svg", str(a)]) == 0
    assert main(["measure", "--op", "z^2*D^2 + D^7", "--n", "40", "--svg", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    meta = svg_metadata(a.read_text())
    assert meta["count"] == 40


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "x" / "f.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert [q.name for q in p.parent.iterdir()] == ["f.txt"]


def test_curve_json_without_locus():
    from eigenroot.curve import curve_from_operator

    data = json.loads(curve_json(curve_from_operator(HERMITE)))
    assert {c["c"] for c in data["coefficients"]} == {"1", "-1"}
    assert "discriminant" not in data


def test_precision_config(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("EIGENROOT_PRECISION_BITS", raising=False)
    cfg = tmp_path / "p.ini"
    cfg.write_text("[eigenroot]\nprecision_bits = 700\n")
    import os

    code = main(["--config", str(cfg), "roots", "--op", "z*D + D^2", "--n", "3"])
    err = capsys.readouterr().err
    assert code == 0 and "precision=700" in err
    assert os.environ["EIGENROOT_PRECISION_BITS"] == "700"
