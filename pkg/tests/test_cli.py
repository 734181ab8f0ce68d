import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from logan_lab.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env)

    return invoke


def _csv(output):
    lines = output.strip().splitlines()
    return lines[0], [tuple(float(v) for v in line.split(",")) for line in lines[1:]]


def test_bessel_zeros_chebyshev_order(run):
    res = run("bessel-zeros", "--alpha", "-0.5", "--count", "2")
    assert res.exit_code == 0
    assert res.output.splitlines() == ["k,q", "1,1.5707963267948966", "2,4.71238898038469"]


def test_bessel_zeros_order_zero_json(run):
    res = run("bessel-zeros", "--alpha", "0", "--count", "1", "--format", "json")
    assert json.loads(res.output) == [{"k": 1, "q": 2.404825557695773}]


def test_bad_order_is_usage_error(run):
    res = run("bessel-zeros", "--alpha", "-1")
    assert res.exit_code == 2
    assert "alpha >= -1/2" in res.output


def test_eval_f(run):
    res = run("eval", "f", "--alpha", "-0.5", "--m", "0", "--grid", "0:10:0.1")
    header, rows = _csv(res.output)
    assert header == "t,value" and len(rows) == 101 and rows[0] == (0.0, 1.0)


def test_eval_p_nonincreasing(run):
    _, rows = _csv(run("eval", "p", "--alpha", "0", "--m", "1", "--grid", "0:1:0.01").output)
    v = np.array([r[1] for r in rows])
    assert len(v) == 101 and np.all(np.diff(v) <= 1e-15)


def test_eval_f_n_cosine_power(run):
    _, rows = _csv(run("eval", "F_n", "--alpha", "-0.5", "--n", "3", "--grid", "0:5:0.5").output)
    for t, v in rows:
        assert v == pytest.approx(math.cos(t / 3) ** 3, abs=1e-10)


@pytest.mark.parametrize("grid", ["0:1", "1:0:0.1", "0:1:0", "a:b:c"])
def test_malformed_grid(run, grid):
    assert run("eval", "f", "--alpha", "0", "--m", "0", "--grid", grid).exit_code == 2


def test_eval_requires_index(run):
    assert run("eval", "F_n", "--alpha", "0", "--grid", "0:1:0.5").exit_code == 2


def test_verify_logan_classics(run, tmp_path):
    out = tmp_path / "r.json"
    res = run("verify", "logan", "--alpha", "-0.5", "--m", "0,1", "--out", str(out), env={"LOGAN_LAB_THREADS": "1"})
    assert res.exit_code == 0, res.output
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1 and doc["passed"]
    products = sorted(r["product"] for r in doc["results"])
    assert products == pytest.approx([math.pi, 3 * math.pi], abs=1e-10)


def test_verify_posdef_example_and_determinism(run, tmp_path):
    args = ["verify", "posdef", "--alpha", "0.7", "--m", "2", "--points", "8", "--seed", "42", "--sets", "3"]
    docs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        res = run(*args, "--out", str(out), env={"LOGAN_LAB_THREADS": "1"})
        assert res.exit_code == 0, res.output
        doc = json.loads(out.read_text())
        doc.pop("timestamp")
        docs.append(doc)
    assert docs[0] == docs[1]
    eig = [c for c in docs[0]["checks"] if c["name"].endswith("min_eigenvalue")]
    assert eig and all(c["passed"] and c["value"] >= c["tolerance"] == -1e-8 for c in eig)


def test_verify_reports_failure(run, monkeypatch):
    from logan_lab import suites

    def broken(alpha, m, prof, **_):
        return [suites.Check.at_most("broken", 1.0, 0.0)], []

    monkeypatch.setitem(suites.SUITES, "logan", broken)
    res = CliRunner().invoke(main, ["verify", "logan", "--alpha", "0", "--m", "0"],
                                             env={"LOGAN_LAB_THREADS": "1"})
    assert res.exit_code == 1
    assert "FAIL broken" in res.stderr


def test_invalid_thread_count(run):
    res = run("verify", "logan", "--alpha", "0", "--m", "0", env={"LOGAN_LAB_THREADS": "zero"})
    assert res.exit_code == 2


def test_invalid_verify_inputs(run):
    assert run("verify", "logan", "--alpha", "-2").exit_code == 2
    assert run("verify", "logan", "--m", "x").exit_code == 2
    assert run("verify", "nope").exit_code == 2


def test_version(run):
    assert "0.1.0" in run("--version").output
