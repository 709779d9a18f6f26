import csv
import dataclasses
import io
import json
import subprocess
import sys

import pytest

from mllab import cli, inequalities, probe
from mllab.cli import main
from mllab.report import CSV_HEADER

SMALL = ["--grid", "alpha={1,2};beta={1.5,2.5};gamma={1,2};q={1};n={0,1};z=0.01:5:4"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    code, out, _ = run(["eval", "--alpha", "1", "--beta", "1", "--z", "1", "--format", "json"],
                       capsys)
    assert code == 0
    d = json.loads(out)
    assert d["value"] == pytest.approx(2.718281828459045, rel=1e-15) and d["converged"]


def test_eval_tail_and_normalized(capsys):
    code, out, _ = run(["eval", "--alpha", "1", "--beta", "1", "--z", "1", "--tail", "1",
                        "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(0.718281828459045, rel=1e-14)
    code, out, _ = run(["eval", "--alpha", "1", "--beta", "3", "--z", "1", "--normalized",
                        "--format", "json"], capsys)
    assert json.loads(out)["value"] == pytest.approx(2 * (2.718281828459045 - 2), rel=1e-14)


def test_check_passing_subset(capsys):
    code, out, _ = run(["check", "--checks", "eq6,eq8,eq666"] + SMALL, capsys)
    assert code == 0
    assert "total failures: 0" in out


def test_check_failure_exit_one(capsys, monkeypatch):
    info = inequalities.CHECKS["eq6"]

    def negated(*args, **kw):
        rec = info.func(*args, **kw)
        res = -abs(rec.residual) - 1.0
        return dataclasses.replace(rec, residual=res, rel_residual=res / rec.scale,
                                   passed=False, status=inequalities.FAIL)

    monkeypatch.setitem(inequalities.CHECKS, "eq6", dataclasses.replace(info, func=negated))
    code, out, _ = run(["check", "--checks", "eq6"] + SMALL, capsys)
    assert code == 1
    assert "total failures: 0" not in out


def test_search_counterexample_exit_three(capsys, monkeypatch):
    fake = probe.SearchResult("Problem1", 10, -0.5, {"alpha": 1.0, "beta": 1.0, "gamma": 0.2,
                                                     "q": 1.0, "n": 0, "z": 1.0},
                              probe.Verdict.CANDIDATE, evaluated=10, seed=1,
                              confirmed_residual=-0.5)
    monkeypatch.setattr(cli, "search_problem1", lambda *a, **k: fake)
    code, out, _ = run(["search", "--problem", "1", "--trials", "10"], capsys)
    assert code == 3
    assert "CounterexampleCandidate" in out


def test_search_clean_exit_zero(capsys):
    code, out, _ = run(["search", "--problem", "1", "--trials", "200", "--q-set", "1",
                        "--gamma-range", "1:5"], capsys)
    assert code == 0 and "NoCounterexampleFound" in out


@pytest.mark.parametrize("argv,flag", [
    (["eval", "--alpha", "-1", "--beta", "1", "--z", "1"], "--alpha"),
    (["eval", "--alpha", "1", "--beta", "1", "--z", "1", "--max-terms", "3"], "--max-terms"),
    (["eval", "--alpha", "1", "--beta", "1", "--z", "1", "--rel-tol", "0.1"], "--rel-tol"),
    (["check", "--checks", "nope"], "--checks"),
    (["check", "--grid", "z=1:0:5"], "--grid"),
    (["check", "--grid", "omega=1:2:3"], "--grid"),
    (["check", "--config", "/nonexistent.ini"], "--config"),
    (["probe", "--probes", "hn", "--z-grid", "{1,2}"], "--z-grid"),
    (["search", "--problem", "1", "--alpha-range", "0:1"], "--alpha"),
])
def test_domain_and_config_errors_exit_two(argv, flag, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert flag in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["eval", "--alpha", "x", "--beta", "1", "--z", "1"],
    ["eval", "--beta", "1", "--z", "1"],
    ["search", "--problem", "3"],
    ["check", "--format", "xml"],
])
def test_malformed_flags_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and "error" in err


def test_check_json_and_csv(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["check", "--checks", "eq6", "--format", "json", "--out", str(out)] + SMALL,
                     capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    s = doc["body"]["summary"]["eq6"]
    assert s["count"] == s["pass"] + s["fail"] + s["guard_excluded"] == 16
    assert len(doc["body"]["records"]) == 16
    assert len(doc["meta"]["body_sha256"]) == 64
    code, text, _ = run(["check", "--checks", "eq6", "--format", "csv"] + SMALL, capsys)
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_HEADER and len(rows) == 17


def test_check_body_deterministic(tmp_path, capsys):
    bodies = []
    for i in range(2):
        path = tmp_path / f"{i}.json"
        run(["check", "--checks", "eq6,a1", "--format", "json", "--out", str(path)] + SMALL,
            capsys)
        bodies.append(json.loads(path.read_text())["body"])
    assert json.dumps(bodies[0], sort_keys=True) == json.dumps(bodies[1], sort_keys=True)


def test_search_json_byte_identical(capsys):
    texts = []
    for _ in range(2):
        code, out, _ = run(["search", "--problem", "2", "--trials", "50", "--seed", "3",
                            "--format", "json"], capsys)
        texts.append(json.dumps(json.loads(out)["body"], sort_keys=True))
    assert texts[0] == texts[1]


def test_config_file_precedence(tmp_path, capsys):
    ini = tmp_path / "c.ini"
    ini.write_text("[series]\nmax_terms = 5000\n[grid]\npreset = smoke\nalpha = {1}\n")
    code, out, _ = run(["check", "--checks", "eq6", "--config", str(ini), "--format", "json",
                        "--no-records", "--grid", "beta={2}"], capsys)
    body = json.loads(out)["body"]
    assert body["config"]["series"]["max_terms"] == 5000
    assert body["config"]["grid"]["alpha"] == [1.0]
    assert body["config"]["grid"]["beta"] == [2.0]
    assert body["config"]["grid"]["preset"] == "smoke"


def test_probe_negative_z_failure(capsys):
    code, out, _ = run(["probe", "--probes", "successor_ratio", "--alpha", "1", "--gamma", "1",
                        "--q", "1", "--z=-0.5"], capsys)
    assert code == 1 and "VIOLATED" in out


def test_probe_ok(capsys):
    code, out, _ = run(["probe", "--probes", "hn", "--alpha", "1", "--beta", "1", "--n", "0"],
                       capsys)
    assert code == 0 and "ok" in out


def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0 and "KK1" in out and "successor_ratio" in out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "mllab", "eval", "--alpha", "2", "--beta", "1",
                        "--z", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and "1.5430806348152437" in r.stdout
