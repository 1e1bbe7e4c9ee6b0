import os
import subprocess

import pytest

CLI = os.environ.get("URLLC_DIM_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="URLLC_DIM_CLI not set")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def write(tmp_path, text, name="cfg.json"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_solve_csv(tmp_path):
    cfg = write(tmp_path, '{"scheme": "MC", "m_nodes": 2}')
    res = run("--config", cfg, "--format", "csv", "solve")
    assert res.returncode == 0, res.stderr
    lines = res.stdout.splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert float(row["p_d"]) == pytest.approx(0.0328, abs=2e-4)


def test_exit_codes(tmp_path):
    assert run("bogus-command").returncode == 2
    assert run("--config", write(tmp_path, "{ nope"), "solve").returncode == 2
    assert run("--config", write(tmp_path, '{"trials": 0}'), "simulate").returncode == 3
    fixed = '{"policy": {"kind": "FIXED_META", "fixed_meta": 0.01}}'
    assert run("--config", write(tmp_path, fixed), "solve").returncode == 4
    assert run("--config", str(tmp_path / "missing.json"), "solve").returncode == 6
    res = run("--config", write(tmp_path, '{"trials": 0}'), "simulate")
    assert "kind=validation" in res.stderr


def test_domain_error_exit(tmp_path):
    # p_d at or above 0.5 has no finite channel use, so sizing fails in the math layer.
    cfg = write(tmp_path, '{"sinr_db": 10, "p_d": 0.6, "chase": "FINITE_BLOCKLENGTH"}')
    assert run("--config", cfg, "outage").returncode == 5


def test_reproduce_writes_csvs(tmp_path):
    res = run("reproduce", "--out", str(tmp_path))
    assert res.returncode == 0, res.stderr
    for name in ("table2.csv", "fig3.csv", "fig4.csv", "fig5.csv"):
        assert (tmp_path / name).exists()
    table2 = (tmp_path / "table2.csv").read_text().splitlines()
    assert table2[0] == "scheme,bler_target,channel_use,usage_eq,usage_paper,discrepancy_flag"
    assert table2[2].endswith("known-discrepancy")


def test_simulate_is_deterministic(tmp_path):
    cfg = write(tmp_path, '{"scheme": "MC", "m_nodes": 2, "p_d": 0.05, "trials": 50000}')
    a = run("--config", cfg, "--seed", "7", "--format", "csv", "--threads", "1", "simulate")
    b = run("--config", cfg, "--seed", "7", "--format", "csv", "--threads", "3", "simulate")
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    c = run("--config", cfg, "--seed", "8", "--format", "csv", "--threads", "1", "simulate")
    assert c.stdout != a.stdout


def test_sweep_and_out(tmp_path):
    out = tmp_path / "out"
    res = run("--format", "csv", "--out", str(out), "sweep", "--variable", "P_D", "--points", "5")
    assert res.returncode == 0, res.stderr
    assert res.stdout.splitlines()[0] == "p_d,policy,scheme,m,outage"
    assert (out / "sweep.csv").read_text() == res.stdout
