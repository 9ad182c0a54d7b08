import json
import subprocess
import sys

import pytest

from qsphere import cli


def run_json(argv, capsys):
    code = cli.main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def strip_elapsed(report):
    for c in report["checks"]:
        c.pop("elapsed")
    return report


@pytest.mark.parametrize("q", ["0.5", "1e-1", "3/2", "0", "abc"])
def test_bad_q_is_config_error(q, capsys):
    assert cli.main(["fock", "traces", "--q", q]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_cutoff_and_degree(capsys):
    assert cli.main(["fock", "--cutoff", "0"]) == 2
    assert cli.main(["quotient", "coinvariants", "--degree", "1"]) == 2


def test_bad_step_limit_env(monkeypatch):
    monkeypatch.setenv("QSPHERE_STEP_LIMIT", "many")
    assert cli.main(["chern", "pairing"]) == 2


def test_step_limit_env_applies_to_reduce(monkeypatch, capsys):
    monkeypatch.setenv("QSPHERE_STEP_LIMIT", "1")
    code, rep = run_json(["quotient", "reduce", "t44 t33 t22 t11 t12 t21 t34"], capsys)
    assert code == 1
    assert "StepLimitExceeded" in rep["checks"][0]["actual"]
    assert rep["config"]["step_limit"] == 1


def test_reduce_verb(capsys):
    code, rep = run_json(["quotient", "reduce", "t44 t11 t22 - t43 t12"], capsys)
    assert code == 0
    assert rep["checks"][0]["actual"] == "[q t11 t12 t21 + t12 t12 + t11]"


def test_json_schema_and_determinism(capsys):
    code1, r1 = run_json(["poisson", "coisotropy", "--subgroup", "conjugated"], capsys)
    code2, r2 = run_json(["poisson", "coisotropy", "--subgroup", "conjugated"], capsys)
    assert code1 == code2 == 0
    assert set(r1) == {"version", "config", "checks", "summary"}
    for c in r1["checks"]:
        assert set(c) >= {"id", "paper_anchor", "status", "expected", "actual", "elapsed"}
        assert c["paper_anchor"]
    assert strip_elapsed(r1) == strip_elapsed(r2)
    assert r1["summary"] == {"pass": 2, "fail": 0}


def test_coisotropy_table(capsys):
    code, rep = run_json(["poisson", "coisotropy"], capsys)
    status = {c["id"]: c["status"] for c in rep["checks"]}
    assert code == 0
    assert status["poisson.coisotropy.diag"] == "pass"
    assert "'coisotropic': False" in next(c["actual"] for c in rep["checks"] if c["id"] == "poisson.coisotropy.diag")
    assert "'coisotropic': True" in next(c["actual"] for c in rep["checks"] if c["id"] == "poisson.coisotropy.conjugated")


def test_vacuous_flag(capsys):
    code, rep = run_json(["fock", "relations", "--cutoff", "1"], capsys)
    assert code == 0
    assert all(c["flag"] == "vacuous" for c in rep["checks"])


def test_pairing(capsys):
    code, rep = run_json(["chern", "pairing"], capsys)
    assert code == 0
    pairing = next(c for c in rep["checks"] if c["id"] == "chern.pairing")
    assert pairing["expected"] == "-1" and pairing["actual"] == "-1"


def test_failing_suite_exits_one(capsys):
    # the quoted trace-norm bounds for sigma(a), sigma(b) are exceeded
    code, rep = run_json(["fock", "trace-class"], capsys)
    assert code == 1
    failed = {c["id"] for c in rep["checks"] if c["status"] == "fail"}
    assert failed == {"fock.tr|sigma(a)|.claimed", "fock.tr|sigma(b)|.claimed"}


def test_text_output(capsys):
    assert cli.main(["bundle", "verify-projector"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "0 failed" in out


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "qsphere.cli", "chern", "class", "--n", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "PASS" in r.stdout
