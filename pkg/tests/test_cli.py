import json
import subprocess
import sys

import numpy as np
import pytest

from diracfrac.cli import main, parse_config
from diracfrac.serialize import fmt, matrix_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_defaults():
    cfg = parse_config(["verify", "--family", "sigma"])
    assert cfg.seed == 42 and cfg.out is None and cfg.tolerance(1e-10) == 1e-10
    assert parse_config(["verify", "--family", "sigma", "--tol", "0"]).tolerance(1e-10) == 1e-15


@pytest.mark.parametrize("family,extra", [("sigma", []), ("lambda", []), ("phi", []), ("chi", []),
                                          ("quaternion", []), ("tau", ["--n", "4"]), ("tau", ["--n", "5"])])
def test_verify_families(capsys, family, extra):
    code, out, _ = run(capsys, "verify", "--family", family, "--trials", "20", *extra)
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["family"] == family


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "bogus"],
    ["verify", "--family", "tau"],
    ["verify", "--family", "tau", "--n", "1"],
    ["enumerate", "--n", "4"],
    ["frac", "--kind", "half", "--a", "-1", "--x", "1"],
    ["frac", "--kind", "half", "--a", "1", "--x", "0"],
    ["frac", "--kind", "half", "--a", "1", "--x", "1", "--j", "2", "--k", "2"],
    ["evolve", "--n", "1", "--a", "1", "--t", "0.1"],
    ["evolve", "--n", "3", "--a", "1", "--t", "0.1", "--grid", "100"],
    ["heat", "--n", "2", "--k", "-1", "--t", "0.1"],
    ["levy", "--nu", "1"],
    ["levy", "--nu", "x"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_unresolved_initial_data_is_usage_error(capsys):
    code, _, err = run(capsys, "evolve", "--n", "2", "--a", "1", "--t", "0.1", "--grid", "16",
                       "--init", "gaussian:sigma=0.05")
    assert code == 2 and "error" in err


def test_check_failure_exit_code(capsys):
    code, out, err = run(capsys, "heat", "--n", "3", "--k", "1", "--t", "0.3", "--grid", "64", "--tol", "1e-15")
    assert code == 1 and "passed=false" in err


def test_enumerate(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "3")
    cat = json.loads(out)
    assert code == 0
    assert cat["counts"]["unordered_up_to_member_phase"] == 24
    assert cat["contains"] == {"lambda": True, "phi": True}
    assert len(cat["triples"]) == cat["counts"]["unordered"]
    assert "cubic triples" in err


def test_frac_matrix_roundtrip(capsys):
    code, out, _ = run(capsys, "frac", "--kind", "half", "--a", "4", "--x", "2")
    m = matrix_from_json(json.loads(out)["matrix"])
    want = np.array([[0, 1 / np.sqrt(2 * np.pi) - 2j], [1 / np.sqrt(2 * np.pi) + 2j, 0]])
    assert code == 0
    np.testing.assert_allclose(m, want, atol=1e-15)


def test_frac_power_check(capsys):
    code, out, _ = run(capsys, "frac", "--kind", "third", "--a", "2", "--x", "1", "--check-power")
    check = json.loads(out)["power_check"]
    assert code == 0 and check["passed"] and check["max_error"] <= 1e-12


def test_evolve_csv(capsys):
    code, out, err = run(capsys, "evolve", "--n", "3", "--a", "1", "--t", "0.2", "--grid", "64")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "x,component,re,im" and len(lines) == 1 + 3 * 64
    assert "initial vector" in err


def test_bch_scan(capsys):
    code, out, _ = run(capsys, "evolve", "--n", "2", "--a", "1", "--t", "0", "--bch-scan")
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert code == 0 and len(rows) == 9
    assert 2.9 <= float(rows[0][2]) <= 3.1


def test_heat_csv(capsys):
    code, out, err = run(capsys, "heat", "--n", "2", "--k", "0", "--t", "0.5", "--grid", "64")
    assert code == 0 and out.startswith("x,re,im\n") and "passed=true" in err


def test_levy_identity(capsys):
    code, out, _ = run(capsys, "levy", "--nu", "1/2", "--check-identity", "--points", "5")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["max_error"] <= 1e-6


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--family", "lambda", "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["passed"]


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "tau", "--n", "3", "--seed", "7"],
    ["frac", "--kind", "half", "--a", "1", "--x", "0.5", "--check-power"],
    ["heat", "--n", "3", "--k", "1", "--t", "0.2", "--grid", "64"],
])
def test_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_seed_changes_samples(capsys):
    a = json.loads(run(capsys, "verify", "--family", "tau", "--n", "3", "--seed", "1")[1])
    b = json.loads(run(capsys, "verify", "--family", "tau", "--n", "3", "--seed", "2")[1])
    assert a["passed"] and b["passed"] and a != b


def test_seventeen_digit_format():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(np.pi)) == np.pi


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diracfrac", "verify", "--family", "sigma", "--trials", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
