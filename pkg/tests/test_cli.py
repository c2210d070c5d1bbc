import csv
import io
import json
import math

import pytest

from epfiber.cli import ConfigError, main, parse_config_text
from epfiber.fiber_model import FiberParams, Regime
from epfiber.sweep import CSV_HEADER, SweepConfig, rows_to_csv, run_sweep, solve_threshold, verify

C_100 = 0.0056498167981312571  # mpmath, default fiber at 100 km


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_anchor_and_origin():
    cfg = SweepConfig(d_min=0.0, d_max=100.0, n_points=2, clock_hz=1e9)
    rows = run_sweep(cfg)
    assert rows[0].d == 0 and rows[0].upper == 1.0 and rows[0].exact
    r = rows[1]
    assert r.lower == pytest.approx(C_100, abs=1e-12) and r.upper == pytest.approx(C_100, abs=1e-12)
    assert r.exact
    assert r.rate_per_s == pytest.approx(5.65e6, rel=1e-3)


def test_sweep_rows_sorted_and_monotone():
    cfg = SweepConfig(p_dc=(1e-2, 0.0), n_points=60, log_scale=True)
    rows = run_sweep(cfg)
    assert [(r.p_dc, r.d) for r in rows] == sorted((r.p_dc, r.d) for r in rows)
    for p_dc in cfg.p_dc:
        ups = [r.upper for r in rows if r.p_dc == p_dc]
        assert all(a >= b for a, b in zip(ups, ups[1:]))
        assert all(0 <= r.lower <= r.upper <= 1 for r in rows)
    assert all(r.exact for r in rows if r.p_dc == 0.0)


def test_dark_count_curve_departs_at_long_distance():
    cfg = SweepConfig(p_dc=(0.0, 1e-2), d_min=1.0, d_max=200.0, n_points=200)
    rows = run_sweep(cfg)
    clean = {r.d: r.upper for r in rows if r.p_dc == 0.0}
    gaps = [(clean[r.d] - r.upper) / clean[r.d] for r in rows if r.p_dc == 1e-2]
    assert gaps[0] < 0.01 and gaps[-1] > 0.9


def test_csv_schema():
    text = rows_to_csv(run_sweep(SweepConfig(n_points=3)))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].endswith(",")  # no clock -> empty rate column
    assert "," not in lines[1].split(",")[0]
    assert lines[1].split(",")[1] == format(10 ** -0.02, ".12g")


def test_config_parsing():
    vals = parse_config_text("# fig 2\nalpha = 0.2\np_dc = 0, 1e-3 ,1e-2\nlog-scale = yes\nclock_hz = none\n")
    assert vals == {"alpha": 0.2, "p_dc": (0.0, 1e-3, 1e-2), "log_scale": True, "clock_hz": None}
    with pytest.raises(ConfigError, match="cfg:2"):
        parse_config_text("alpha = 0.2\nbogus = 1\n", "cfg")
    with pytest.raises(ConfigError, match="<config>:1: bad value"):
        parse_config_text("points = many")
    with pytest.raises(ConfigError, match=":3: expected"):
        parse_config_text("\n\njust words")


def test_threshold_solver():
    depol = FiberParams(regime=Regime.DEPOLARIZING, L=0.05)
    assert solve_threshold(depol) == pytest.approx(0.05 * math.log(3), rel=1e-12)
    assert solve_threshold(FiberParams()) == math.inf
    d = solve_threshold(FiberParams(), 1e-2)
    assert 100 < d < 120
    # zero-capacity predicate on the dark-count channel: just below d the upper bound is positive, just above it is zero
    rows = run_sweep(SweepConfig(p_dc=(1e-2,), d_min=d * (1 - 1e-9), d_max=d * (1 + 1e-9), n_points=2))
    assert rows[0].upper > 0 and rows[1].upper == 0
    assert solve_threshold(FiberParams(), 1e-3) > d
    assert solve_threshold(depol, 1e-2) < 0.05 * math.log(3)


def test_cli_sweep_file_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--p-dc", "0", "--p-dc", "1e-3", "--points", "25", "--log-scale", "--clock-hz", "1e9"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = _csv(out1.read_text())
    assert len(rows) == 50 and list(rows[0]) == list(CSV_HEADER)


def test_cli_json_and_config_file(tmp_path, capsys):
    cfg = tmp_path / "fig2.cfg"
    cfg.write_text("alpha = 0.2\ndelta_nu = 100\nd_pmd = 0.1\nd_min = 0\nd_max = 100\npoints = 2\nclock_hz = 1e9\n")
    assert main(["sweep", "--config", str(cfg), "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[-1]["d"] == 100 and rows[-1]["exact"] is True
    assert 5e6 <= rows[-1]["rate_per_s"] <= 6e6
    # command-line flags override the file
    assert main(["sweep", "--config", str(cfg), "--d-max", "50", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)[-1]["d"] == 50


def test_cli_threshold_and_show(capsys):
    assert main(["threshold", "--regime", "depol", "--L", "0.05"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "p_dc,d_zero_km"
    assert float(out[1].split(",")[1]) == pytest.approx(0.0549306, abs=1e-6)
    assert main(["threshold"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,inf"
    assert main(["show-channel", "--distance", "100", "--p-dc", "1e-3", "--format", "json"]) == 0
    (entry,) = json.loads(capsys.readouterr().out)
    assert entry["eta_prime"] == pytest.approx(0.01099)
    assert sum(entry["pauli_prime"]) == pytest.approx(1.0)
    assert main(["show-channel"]) == 0
    assert "exact" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["sweep", "--d-pmd", "-1"]) == 1
    assert main(["sweep", "--d-min", "10", "--d-max", "5"]) == 1
    assert main(["sweep", "--p-dc", "2"]) == 1
    with pytest.raises(SystemExit) as e:
        main(["sweep", "--no-such-flag"])
    assert e.value.code == 1
    assert main(["sweep", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert main(["sweep", "--config", str(tmp_path / "nope.cfg")]) == 3
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = 0.2\nregime = sideways\n")
    assert main(["sweep", "--config", str(bad)]) == 1
    bad.write_text("alpha = 0.2\nwat\n")
    assert main(["sweep", "--config", str(bad)]) == 1
    assert "bad.cfg:2" in capsys.readouterr().err


def test_cli_verify_passes_and_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--distance", "100", "--p-dc", "0", "--p-dc", "1e-3", "--trials", "1000000"]
    assert main(args + ["--out", str(a)]) == 0
    first = capsys.readouterr().out
    assert main(args + ["--out", str(b)]) == 0
    assert capsys.readouterr().out == first
    assert a.read_bytes() == b.read_bytes()
    assert first.rstrip().endswith("PASS")


def test_verify_detects_corrupted_eta():
    cfg = SweepConfig(distances=(1.0,), trials=1_000_000)
    for shift in (0.05, -0.05):
        report = verify(cfg, simulate_eta_shift=shift)
        assert not report["passed"]
        assert any(f.startswith("click_rate") for f in report["failures"])


def test_verify_failure_exit_code(monkeypatch):
    import epfiber.cli as cli

    monkeypatch.setattr(cli, "verify", lambda cfg: verify(cfg, simulate_eta_shift=0.05))
    assert cli.main(["verify", "--distance", "1", "--trials", "100000"]) == 2
