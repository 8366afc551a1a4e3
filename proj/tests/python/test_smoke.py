import json
import os
import subprocess

import pytest

import qcduality


def test_version():
    assert qcduality.__version__ == qcduality.version()
    assert qcduality.version().count(".") == 2


def test_identity_exact():
    assert qcduality.identity_holds("C", ["1/2", "3"], ["5/7"], "1/3", "2")
    assert qcduality.identity_holds("B", ["2"], ["1/3"], "0", "3/2")


def test_identity_rejects_collision():
    with pytest.raises(qcduality.QcdError):
        qcduality.identity_holds("C", ["1", "2"], ["-2"], "0", "1")


def test_duality_report():
    rep = qcduality.run("duality", {"model": {"root_system": "C", "z": [1, 2], "xi": [0, 0]}})
    assert rep["summary"]["status"] == "pass"
    assert rep["schema"] == 1


def test_nilpotency_closed_form():
    # C, N=2, xi=0: mu = sqrt(2) solves the single Bethe equation
    rep = qcduality.run("bethe", {"model": {"root_system": "C", "z": [1, 2], "m": 1, "xi": [0, 0]}})
    mu = [complex(*v) for v in rep["verdicts"][0]["mu"]]
    out = qcduality.nilpotency("C", [1, 2], mu, 0, 1)
    assert out["relative"] <= 1e-8


def test_main_exit_codes():
    code, out, _ = qcduality.main(["validate", "--kind", "B", "--g1", "1", "--g2", "0", "--g4", "0"])
    assert code == 1
    assert json.loads(out)["summary"]["status"] == "fail"
    code, _, err = qcduality.main(["bethe", "--kind", "Q"])
    assert code == 2 and "configuration error" in err


@pytest.mark.skipif("QCD_CLI" not in os.environ, reason="CLI binary path not given")
def test_cli_binary():
    proc = subprocess.run(
        [os.environ["QCD_CLI"], "identity", "--kind", "B", "--n", "1", "--m", "1", "--mode", "rational"],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["exact_zero"] == 50
