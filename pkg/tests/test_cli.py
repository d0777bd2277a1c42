import csv
import io
import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from rabispec import scan_brackets, validate_params
from rabispec.cli import main

ORACLE_07_04 = [-0.707805064098487, -0.4270436745661867, 0.37094976339069247,
                0.673603825027011, 1.3607568321317176, 1.6370103706443395,
                2.4666957020653966, 2.5452309655127765]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    lines = text.split("\n")
    assert lines[0] == "# schema=1"
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--omega", "1", "--g", "0.7", "--delta", "0.4",
                       "--levels", "8", "--format", "csv")
    assert code == 0 and "\r" not in out and out.endswith("\n")
    rows = table(out)
    assert list(rows[0]) == ["index", "energy", "parity", "kind", "method", "residual"]
    e = [float(r["energy"]) for r in rows]
    assert len(e) == 8 and e == sorted(e)
    assert np.max(np.abs(np.array(e) - ORACLE_07_04)) < 1e-8


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--g", "0.3", "--delta", "0.8", "--levels", "4",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert [l["kind"] for l in doc["levels"]].count("juddian") == 2


def test_spectrum_zero_coupling_uses_oracle(capsys):
    code, out, _ = run(capsys, "spectrum", "--g", "0", "--delta", "0.3", "--levels", "4")
    rows = table(out)
    assert code == 0
    assert [float(r["energy"]) for r in rows] == [-0.3, 0.3, 0.7, 1.3]
    assert {r["method"] for r in rows} == {"oracle"}


def test_nonpositive_frequency_exit_code(capsys):
    code, out, err = run(capsys, "spectrum", "--omega", "0")
    assert code == 2 and out == "" and "NonPositiveFrequency" in err


def test_bad_format_is_usage_error(capsys):
    code, _, err = run(capsys, "gscan", "--format", "json")
    assert code == 2 and "UsageError" in err


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_gscan_sign_changes_match_brackets(capsys):
    code, out, _ = run(capsys, "gscan", "--g", "0.5", "--delta", "0.5", "--x-min", "-0.5",
                       "--x-max", "4.5", "--step", "0.005")
    rows = table(out)
    assert code == 0 and len(rows) == 1001
    changes = 0
    for col in ("g_plus", "g_minus"):
        v = [float(r[col]) if r[col] else np.nan for r in rows]
        changes += sum(1 for a, b in zip(v, v[1:]) if np.isfinite(a) and np.isfinite(b) and a * b < 0)
    assert changes == len(scan_brackets(validate_params(1.0, 0.5, 0.5), -0.5, 4.5))


def test_gscan_pole_margin_rows_are_empty(capsys):
    code, out, _ = run(capsys, "gscan", "--x-min", "0.9999996", "--x-max", "1.0000004",
                       "--step", "0.0000004")
    rows = table(out)
    assert code == 0 and len(rows) == 3
    assert all(r["g_plus"] == "" and r["g_minus"] == "" for r in rows)


def test_gscan_zero_width(capsys):
    code, out, _ = run(capsys, "gscan", "--x-min", "0.25", "--x-max", "0.25")
    rows = table(out)
    assert code == 0 and len(rows) == 1 and rows[0]["g_plus"] != ""


def test_figure_outputs(tmp_path, capsys):
    code, _, err = run(capsys, "figure", "--grid", "160", "--out", str(tmp_path))
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    assert names == ["contours.csv", "figure.svg", "panel_n0.svg", "panel_n1.svg",
                     "panel_n2.svg", "panel_n3.svg"]
    counts = json.loads(err.split("juddian components ", 1)[1])
    assert {k: v["closed"] for k, v in counts.items()} == {"0": 0, "1": 1, "2": 2, "3": 3}
    rows = table((tmp_path / "contours.csv").read_text())
    assert {r["layer"] for r in rows} == {"juddian", "plus", "minus"}


@pytest.mark.parametrize("argv", [["--n"], ["--n", "7"], ["--grid", "2001"], ["--n", "-1"]])
def test_figure_bad_configuration(tmp_path, capsys, argv):
    code, _, _ = run(capsys, "figure", "--out", str(tmp_path), *argv)
    assert code == 2


def test_locus_csv_and_svg(tmp_path, capsys):
    code, out, _ = run(capsys, "locus", "--n", "1", "--grid", "120", "--delta-max", "1.2",
                       "--g-max", "0.6")
    rows = table(out)
    assert code == 0 and rows and {r["closed"] for r in rows} == {"0"}
    d = np.array([float(r["delta"]) for r in rows])
    g = np.array([float(r["g"]) for r in rows])
    assert np.max(np.abs(4 * g * g + d * d - 1)) < 1e-6
    svg = tmp_path / "l.svg"
    code, _, _ = run(capsys, "locus", "--n", "2", "--kind", "plus", "--grid", "80",
                     "--format", "svg", "--out", str(svg))
    assert code == 0 and svg.read_text().startswith("<?xml")
    code, _, _ = run(capsys, "locus", "--n", "1", "2")
    assert code == 2


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--g", "0.7", "--delta", "0.4", "--levels", "8")
    rows = table(out)
    assert code == 0
    assert [float(r["energy"]) for r in rows] == ORACLE_07_04
    code, _, err = run(capsys, "oracle", "--levels", "50", "--m-max", "20")
    assert code == 2


def test_csv_is_byte_identical_across_runs(tmp_path):
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, OMP_NUM_THREADS=threads, OPENBLAS_NUM_THREADS=threads, LC_ALL="de_DE.UTF-8")
        path = tmp_path / f"s{threads}.csv"
        subprocess.run([sys.executable, "-m", "rabispec.cli", "spectrum", "--g", "0.7", "--delta", "0.4",
                        "--out", str(path)], check=True, env=env)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_quick(tmp_path, capsys):
    report = tmp_path / "report.json"
    t0 = time.perf_counter()
    code, _, err = run(capsys, "verify", "--quick", "--out", str(report))
    elapsed = time.perf_counter() - t0
    doc = json.loads(report.read_text())
    assert code == 0 and doc["schema"] == 1 and doc["passed"]
    assert len(doc["checks"]) == 8
    for c in doc["checks"]:
        assert {"check", "status", "measured", "tolerance"} <= set(c)
        assert c["status"] == "pass"
    assert err.count("[PASS]") == 8
    assert elapsed < 30


def test_verify_reports_failure_with_exit_1(monkeypatch, tmp_path, capsys):
    import rabispec.cli as cli
    from rabispec.verify import CheckResult
    monkeypatch.setattr(cli, "run_all", lambda **kw: [CheckResult("x", "fail", 1.0, 0.0)])
    code, _, _ = run(capsys, "verify", "--out", str(tmp_path / "r.json"))
    assert code == 1
