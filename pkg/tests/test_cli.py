import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from metricbands.cli import InputError, main, parse_angle, parse_path
from metricbands.report import format_text


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_list_builtins():
    code, out = run("list-builtins")
    assert code == 0 and "z_pendant" in out.split()


def test_analyze_pendant_json():
    code, out = run("analyze", "--builtin", "z_pendant", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["beta"] == "2/3"
    gap = d["omega"]["gaps"][0]
    assert (gap["lo"], gap["hi"]) == pytest.approx((1.230959, 1.910633), abs=1e-6)
    assert d["certification"]["ok"]
    assert all(c["status"] != "fail" for c in d["certification"]["checks"])


def test_analyze_triangular():
    code, out = run("analyze", "--builtin", "triangular", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["precise_point"] is None and d["pi_flat_band"] == "in_gap"


def test_json_round_trip_is_byte_identical():
    _, out = run("analyze", "--builtin", "c4_pendant_chain", "--format", "json")
    assert json.dumps(json.loads(out), indent=2) + "\n" == out


def test_text_matches_json():
    _, js = run("analyze", "--builtin", "z_pendant", "--format", "json")
    _, text = run("analyze", "--builtin", "z_pendant")
    assert text == format_text(json.loads(js)) + "\n"
    assert f"{json.loads(js)['omega']['measure']:.9f}" in text


def test_missing_file(capsys):
    code, _ = run("analyze", "missing.graph")
    assert code == 1 and "missing.graph" in capsys.readouterr().err


def test_bad_flags_exit_one():
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--builtin", "z1_lattice", "--grid", "-3"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--builtin", "z1_lattice", "--format", "xml"])
    assert info.value.code == 1


def test_two_sources_rejected():
    assert run("analyze", "--builtin", "z1_lattice", "--file", "x.graph")[0] == 1


def test_disconnected_input(tmp_path):
    p = tmp_path / "two.graph"
    p.write_text("dim 1\nvertex a\nedge a a 2\n")
    assert run("analyze", "--file", str(p))[0] == 1


def test_file_input(tmp_path):
    p = tmp_path / "pendant.graph"
    p.write_text("dim 1\nvertex a\nvertex b\nedge a b 0\nedge a a 1\n")
    code, out = run("analyze", str(p), "--format", "json")
    assert code == 0 and json.loads(out)["beta"] == "2/3"


def test_certification_failure_exits_two(monkeypatch):
    import metricbands.cli as cli
    from metricbands.estimates import CheckRecord

    real = cli.analyze

    def broken(*a, **k):
        rep = real(*a, **k)
        rep.certification.records.append(CheckRecord("forced", "fail"))
        return rep

    monkeypatch.setattr(cli, "analyze", broken)
    code, out = run("analyze", "--builtin", "z1_lattice")
    assert code == 2 and "overall: FAIL" in out


def test_verify_failure_exits_two(monkeypatch):
    import metricbands.cli as cli
    from metricbands.estimates import CheckRecord
    monkeypatch.setattr(cli, "verify", lambda *a, **k: [CheckRecord("forced", "fail")])
    assert run("verify", "--builtin", "z1_lattice")[0] == 2


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_bands_lattice():
    code, out = run("bands", "--builtin", "z1_lattice", "--path", "0;pi", "--samples", "5")
    rows = _rows(out)
    assert code == 0 and rows[0] == ["s", "theta1", "lambda1"]
    lam = [float(r[2]) for r in rows[1:]]
    assert lam == pytest.approx([-1, -math.sqrt(0.5), 0, math.sqrt(0.5), 1], abs=1e-12)


def test_bands_hexagonal_dirac():
    code, out = run("bands", "--builtin", "hexagonal", "--path", "0,0;2pi/3,4pi/3;pi,pi",
                    "--samples", "7")
    rows = _rows(out)[1:]
    assert code == 0
    hit = rows[6]
    assert float(hit[1]) == pytest.approx(2 * math.pi / 3)
    assert [float(hit[3]), float(hit[4])] == pytest.approx([0, 0], abs=1e-14)
    assert len(rows) == 13


def test_bands_errors():
    assert run("bands", "--builtin", "z1_lattice", "--path", ";")[0] == 1
    assert run("bands", "--builtin", "hexagonal", "--path", "0;pi")[0] == 1
    assert run("bands", "--builtin", "z1_lattice", "--path", "foo")[0] == 1


def test_bands_to_file(tmp_path):
    p = tmp_path / "sweep.csv"
    code, out = run("bands", "--builtin", "z1_lattice", "--path", "0;pi", "--sweep-out", str(p))
    assert code == 0 and out == "" and len(_rows(p.read_text())) == 51


def test_analyze_sweep_out(tmp_path):
    p = tmp_path / "sweep.csv"
    assert run("analyze", "--builtin", "hexagonal", "--sweep-out", str(p))[0] == 0
    rows = _rows(p.read_text())
    assert rows[0] == ["s", "theta1", "theta2", "lambda1", "lambda2"]
    assert float(rows[1][3]) == pytest.approx(-1.0)


@pytest.mark.parametrize("token, value", [("pi", math.pi), ("-pi/2", -math.pi / 2),
                                          ("2pi/3", 2 * math.pi / 3), ("2*pi/3", 2 * math.pi / 3),
                                          ("1.5", 1.5), ("0", 0.0), ("1e-3", 1e-3)])
def test_parse_angle(token, value):
    assert parse_angle(token) == pytest.approx(value)


def test_parse_path_rejects_garbage():
    with pytest.raises(InputError):
        parse_angle("pie")
    with pytest.raises(InputError):
        parse_path("", 1)


@pytest.mark.parametrize("argv", [
    ["verify", "--builtin", "hexagonal", "--oracle-n", "6"],
    ["verify", "--builtin", "c4_pendant_chain"],
    ["verify", "--builtin", "z_pendant", "--grid", "8"],
])
def test_verify_examples(argv):
    code, out = run(*argv)
    assert code == 0 and "FAIL " not in out


def test_verify_c4_reports_flat_band():
    _, out = run("verify", "--builtin", "c4_pendant_chain", "--format", "json")
    rec = {r["name"]: r for r in json.loads(out)}
    assert rec["odd_cell_flat_band"]["status"] == "pass"
    mu, dz = rec["odd_cell_flat_band"]["lhs"]
    assert abs(mu) <= 1e-8 and abs(dz) <= 1e-8


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "metricbands", "list-builtins"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "hexagonal" in res.stdout
