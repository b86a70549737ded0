import math

import numpy as np
import pytest

from halfline_nls import closedform as cf
from halfline_nls import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def table(text):
    lines = [l for l in text.strip().splitlines() if not l.startswith("#")]
    cols = lines[0].split(",")
    return [dict(zip(cols, l.split(","))) for l in lines[1:]]


def test_bound_state_at_frequency(capsys):
    code, out, _ = run(capsys, "bound-state", "--p", "4", "--alpha", "1", "--omega", "4")
    d = kv(out)
    assert code == cli.EXIT_OK
    assert float(d["mass"]) == pytest.approx(6.0, rel=1e-14)
    assert float(d["energy"]) == pytest.approx(-3.0, rel=1e-14)
    assert float(d["shift"]) == pytest.approx(math.atanh(0.5) / 2.0, rel=1e-14)


def test_bound_state_by_mass_round_trips(capsys):
    code, out, _ = run(capsys, "bound-state", "--p", "4", "--alpha", "1", "--mu", "6")
    assert code == 0
    assert float(kv(out)["omega"]) == pytest.approx(4.0, rel=1e-10)


def test_bound_state_missing_exits_2(capsys):
    code, _, err = run(capsys, "bound-state", "--p", "4", "--alpha", "1", "--omega", "0.5")
    assert code == cli.EXIT_NO_STATE
    assert "halfline-nls" in err


def test_mass_out_of_range_exits_2(capsys):
    code, _, _ = run(capsys, "bound-state", "--p", "3", "--alpha", "1", "--mu", "1")
    assert code == cli.EXIT_NO_STATE


def test_bound_state_profile(tmp_path, capsys):
    path = tmp_path / "eta.txt"
    code, _, _ = run(capsys, "bound-state", "--p", "4", "--alpha", "1", "--omega", "4",
                     "--out", str(path), "--L", "10", "--n", "256")
    data = np.loadtxt(path)
    assert code == 0
    assert data.shape == (257, 2)
    assert data[0, 1] == pytest.approx(math.sqrt(2.0 * 4.0) / math.cosh(2.0 * (0 - math.atanh(0.5) / 2.0)), rel=1e-12)


def test_critical_thresholds_report_half_line_mass(capsys):
    code, out, _ = run(capsys, "thresholds", "--p", "6", "--alpha", "1")
    assert code == 0
    assert float(kv(out)["critical_mass_halfline"]) == pytest.approx(math.sqrt(3.0) * math.pi / 4.0, rel=1e-15)


def test_two_branch_thresholds_consistent(capsys):
    code, out, _ = run(capsys, "thresholds", "--p", "5", "--alpha", "1")
    d = kv(out)
    assert code == 0
    assert d["h_tilde_consistent"] == "true"
    assert d["h_tilde_above_gamma"] == "true"
    assert float(d["mu_star"]) < float(d["mu_tilde"]) < float(d["soliton_mass_alpha_sq"])


def test_curves_columns_and_omitted_rows(capsys):
    code, out, err = run(capsys, "curves", "--p", "4", "--alpha", "1", "--sweep", "0.5:8:16")
    rows = table(out)
    assert code == 0
    assert list(rows[0]) == ["omega", "mass", "energy", "dmass", "denergy"]
    omegas = np.linspace(0.5, 8.0, 16)
    assert len(rows) == int(np.sum(omegas > 1.0))
    assert "omitted" in err


def test_phase_diagram_two_branch_bands(capsys):
    code, out, _ = run(capsys, "phase-diagram", "--p", "5", "--alpha", "1", "--sweep", "2.5:4:61")
    rows = table(out)
    counts = [int(r["bound_state_count"]) for r in rows]
    exists = [r["ground_state_exists"] == "true" for r in rows]
    assert code == 0
    assert {0, 1, 2} <= set(counts)
    # existence switches on once, inside the two-branch band
    first = exists.index(True)
    assert all(exists[first:]) and not any(exists[:first])
    assert counts[first] == 2


def test_phase_diagram_repulsive_always_exists(capsys):
    code, out, _ = run(capsys, "phase-diagram", "--p", "3", "--alpha-sweep=-2:-0.5:4", "--sweep", "0.01:100:12:log")
    assert code == 0
    assert all(r["ground_state_exists"] == "true" for r in table(out))


def test_phase_diagram_critical_boundary(capsys):
    m = cf.CRITICAL_MASS_HALFLINE
    code, out, _ = run(capsys, "phase-diagram", "--p", "6", "--alpha-sweep=-1:1:2",
                       "--sweep", f"{0.5 * m!r}:{1.5 * m!r}:3")
    rows = table(out)
    assert code == 0
    levels = [(r["alpha"], r["energy_level"], r["ground_state_exists"]) for r in rows]
    assert levels[0] == ("-1.0", "finite", "true")
    assert levels[1][1] == "minus_infinity" and levels[1][2] == "false"
    assert levels[3] == ("1.0", "zero", "false")
    assert levels[5][1] == "minus_infinity"


def test_output_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["curves", "--p", "5", "--alpha", "1", "--sweep", "1.5:20:25:log", "--out", str(p)]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().startswith("# halfline-nls curves p=5.0 alpha=1.0")


@pytest.mark.parametrize("argv", [
    ["curves", "--p", "4", "--alpha", "1", "--sweep", "1:2:1"],
    ["curves", "--p", "4", "--alpha", "1", "--sweep", "0:2:4:log"],
    ["curves", "--p", "4", "--alpha", "1"],
    ["bound-state", "--p", "4", "--alpha", "1"],
    ["bound-state", "--p", "4", "--alpha", "1", "--omega", "4", "--mu", "6"],
    ["bound-state", "--p", "7", "--alpha", "1", "--omega", "4"],
    ["bound-state", "--p", "4", "--alpha", "0", "--omega", "4"],
    ["phase-diagram", "--p", "4", "--sweep", "1:2:3"],
    ["nonsense"],
])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == cli.EXIT_USAGE


def test_flow_writes_profile_and_reads_it_back(tmp_path, capsys):
    path = tmp_path / "u.txt"
    code, out, _ = run(capsys, "flow", "--p", "4", "--alpha", "1", "--mu", "6", "--L", "12", "--n", "1024",
                       "--out", str(path))
    d = kv(out)
    assert code == 0
    assert d["status"] == "converged"
    assert float(d["energy"]) == pytest.approx(-3.0, rel=1e-3)
    code, out2, _ = run(capsys, "flow", "--p", "4", "--alpha", "1", "--mu", "6", "--L", "12", "--n", "1024",
                        "--initial", str(path))
    assert code == 0
    assert float(kv(out2)["energy"]) == pytest.approx(float(d["energy"]), rel=1e-12)


def test_flow_rejects_mismatched_initial(tmp_path, capsys):
    path = tmp_path / "u.txt"
    np.savetxt(path, np.zeros((10, 2)))
    code, _, _ = run(capsys, "flow", "--p", "4", "--alpha", "1", "--mu", "6", "--n", "128", "--initial", str(path))
    assert code == cli.EXIT_USAGE


def test_sweep_parsing():
    s = cli.parse_sweep("1:100:3:log")
    assert np.allclose(s.values(), [1.0, 10.0, 100.0])
    assert s.spec() == "1.0:100.0:3:log"
    with pytest.raises(Exception):
        cli.parse_sweep("1:2")


def test_verify_critical_passes(capsys):
    code, out, _ = run(capsys, "verify", "--regime", "critical")
    assert code == cli.EXIT_OK
    assert all(l.startswith("PASS") for l in out.splitlines() if l.startswith(("PASS", "FAIL")))


def test_verify_detects_tampered_constant(monkeypatch, capsys):
    original = cf.theta
    monkeypatch.setattr(cf, "theta", lambda p: 1.01 * original(p))
    from halfline_nls import acceptance
    report = acceptance.run_suite(numbers=[3])
    assert not report.passed
    assert any(not r.passed for r in report.results)
