import csv
import json
import math
import subprocess
import sys

import pytest

from dirac_tube.cli import VERIFY_COLUMNS, ConfigError, RunConfig, main


def run(tmp_path, command, *sets, config=None, fmt=None):
    argv = [command, "--out", str(tmp_path)]
    if config is not None:
        cfg = tmp_path / "run.cfg"
        cfg.write_text(config, encoding="utf-8")
        argv += ["--config", str(cfg)]
    if fmt:
        argv += ["--format", fmt]
    for s in sets:
        argv += ["--set", s]
    return main(argv)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_config_parsing():
    cfg = RunConfig.from_text("# run\ncurve = ellipse 2 1   # axes\neps = 0.1, 0.05 0.025\nm=1\nK = 12\n")
    assert cfg.curve == "ellipse 2 1" and cfg.eps == [0.1, 0.05, 0.025] and cfg.m == 1.0 and cfg.K == 12
    for bad in ("nonsense\n", "colour = red\n", "K = ten\n"):
        with pytest.raises(ConfigError):
            RunConfig.from_text(bad)


def test_curve_info(tmp_path, capsys):
    assert run(tmp_path, "curve-info", "curve=ellipse 2 1") == 0
    row = read_csv(tmp_path / "curve_info.csv")[0]
    assert abs(float(row["length"]) - 9.6884482) < 1e-7
    assert float(row["epsilon_max"]) == pytest.approx(0.5, abs=1e-10)
    assert row["overlap_warning"] == "false"
    assert run(tmp_path, "curve-info", config="curve = circle 1\n") == 0
    row = read_csv(tmp_path / "curve_info.csv")[0]
    assert float(row["length"]) == pytest.approx(2 * math.pi, abs=1e-12)
    assert float(row["epsilon_max"]) == pytest.approx(1.0, abs=1e-12)


def test_curve_file(tmp_path, capsys):
    good = tmp_path / "c.txt"
    good.write_text("x: 0 2 0\ny: 0 0 1\n", encoding="utf-8")
    assert run(tmp_path, "curve-info", f"curve_file={good}") == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("x: 0 2 0\ny: oops\n", encoding="utf-8")
    capsys.readouterr()
    assert run(tmp_path, "curve-info", f"curve_file={bad}") == 2
    assert "configuration error" in capsys.readouterr().err
    assert run(tmp_path, "curve-info", f"curve_file={tmp_path / 'missing.txt'}") == 2


def test_transverse(tmp_path):
    assert run(tmp_path, "transverse", "delta=0 0.1 1", "p_max=5") == 0
    rows = read_csv(tmp_path / "transverse.csv")
    assert len(rows) == 15
    for r in rows:
        p, d = int(r["p"]), float(r["delta"])
        if d == 0:
            assert float(r["lambda_bisect"]) == (2 * p - 1) * math.pi / 4
        assert float(r["residual"]) <= 1e-12 * max(1, d)
    r = next(r for r in rows if r["p"] == "1" and r["delta"] == "1.0")
    assert abs(float(r["lambda_bisect"]) - 1.52) < 5e-4
    assert run(tmp_path, "transverse", "delta=-0.5") == 2


def test_effective(tmp_path):
    assert run(tmp_path, "effective", "n_eigs=6") == 0
    rows = read_csv(tmp_path / "effective.csv")
    assert abs(float(rows[0]["mu"]) - (0.25 - 1 / math.pi)) < 1e-10
    assert abs(float(rows[2]["mu"]) - 0.5683099) < 1e-7
    assert all(float(r["pair_gap"]) < 1e-8 for r in rows)
    assert run(tmp_path, "effective", "K_eff=4") == 2


def test_solve2d_json(tmp_path):
    assert run(tmp_path, "solve2d", "eps=0.05", "n_eigs=4", fmt="json") == 0
    data = json.loads((tmp_path / "solve2d.json").read_text(encoding="utf-8"))
    assert len(data) == 2 and abs(data[0]["E"] - 15.70579) < 3e-3
    assert run(tmp_path, "solve2d", "eps=1.5") == 2
    assert run(tmp_path, "solve2d", "m=-1") == 2


def test_verify_rows_and_report(tmp_path):
    assert run(tmp_path, "verify", config="curve = circle 1\nm = 1\neps = 0.1 0.05 0.025\nj = 1\n") == 0
    with open(tmp_path / "verify.csv", encoding="utf-8") as fh:
        assert fh.readline().strip() == ",".join(VERIFY_COLUMNS)
    rows = read_csv(tmp_path / "verify.csv")
    assert [float(r["epsilon"]) for r in rows] == [0.1, 0.05, 0.025]
    report = dict(line.split(" = ") for line in (tmp_path / "verify_report.txt").read_text().splitlines())
    assert abs(float(report["c0_fitted"]) - 2 / math.pi) <= 2e-3
    assert report["c0_pass"] == "true"


def test_verify_config_errors(tmp_path):
    assert run(tmp_path, "verify", "eps=") == 2
    assert run(tmp_path, "verify", "eps=0.1 0.05") == 2
    assert run(tmp_path, "verify", "curve=ellipse 2 1", "eps=0.6 0.3 0.1") == 2
    assert run(tmp_path, "verify", "curve=triangle 1") == 2
    assert main(["bogus"]) == 2


def test_byte_stable(tmp_path):
    cfg = "curve = ellipse 2 1\neps = 0.1 0.05 0.025\nK = 12\nN_t = 3\n"
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        d.mkdir()
        assert main(["verify", "--out", str(d), "--config", str(_write(tmp_path, cfg))]) == 0
        outs.append(((d / "verify.csv").read_bytes(), (d / "verify_report.txt").read_bytes()))
    assert outs[0] == outs[1]


def _write(tmp_path, text):
    p = tmp_path / "stable.cfg"
    p.write_text(text, encoding="utf-8")
    return p


def test_console_entry(tmp_path):
    out = subprocess.run([sys.executable, "-m", "dirac_tube.cli", "transverse", "--out", str(tmp_path),
                          "--set", "delta=-1"], capture_output=True, text=True)
    assert out.returncode == 2 and "δ" in out.stderr


def test_thread_hint(tmp_path, monkeypatch):
    monkeypatch.setenv("DIRAC_TUBE_THREADS", "1")
    assert run(tmp_path, "transverse", "p_max=2") == 0
