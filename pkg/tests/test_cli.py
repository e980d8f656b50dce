import json
import math
import subprocess
import sys

import pytest

from rvdcascade import __version__
from rvdcascade.cli import run


def _run(tmp_path, argv, cfg=None, name="r.json"):
    args = list(argv)
    if cfg is not None:
        cp = tmp_path / f"cfg_{name}"
        cp.write_text(json.dumps(cfg))
        args += ["--config", str(cp)]
    out = tmp_path / name
    code = run(args + ["--out", str(out)])
    return code, json.loads(out.read_text()), out.read_bytes()


def test_verify_limits_stage2_default(tmp_path):
    code, rep, _ = _run(tmp_path, ["verify-limits"])
    assert code == 0 and rep["passed"]
    assert abs(rep["result"]["exponent"] + 4 * math.pi) < 0.1 * 4 * math.pi
    assert rep["artifact"] == {"name": "rvdcascade", "version": __version__}
    assert rep["config"]["stage"] == 2 and rep["config"]["rate_tol"] == 0.1


def test_verify_limits_counterterm_pole(tmp_path, capsys):
    code, rep, _ = _run(tmp_path, ["verify-limits"], {"stage": 1, "a_minus": 0})
    assert code == 2
    assert "counterterm pole" in rep["error"]["message"]
    assert "counterterm pole" in capsys.readouterr().err


def test_verify_limits_stage4_n2_lists_basis(tmp_path):
    code, rep, _ = _run(tmp_path, ["verify-limits"], {"stage": 4, "N": 2})
    assert code == 0
    assert len(rep["result"]["basis"]) == 3


def test_config_errors(tmp_path):
    assert _run(tmp_path, ["verify-limits"], {"stage": 7})[0] == 2
    assert _run(tmp_path, ["verify-limits"], {"bogus": 1}, "b.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify-limits", "--config", str(bad), "--out", str(tmp_path / "x.json")]) == 2


def test_qheun_spectrum_example(tmp_path):
    code, rep, _ = _run(tmp_path, ["qheun", "spectrum"])
    assert code == 0
    (E,) = rep["result"]["eigenvalues"]
    assert abs(complex(*E) + 5.5) < 1e-10
    cons = rep["result"]["constraints_enforced"]
    assert set(cons) == {"leading x^{d+2} coefficient", "trailing x^0 coefficient"}
    assert all(abs(complex(*v)) < 1e-12 for v in cons.values())


def test_qheun_spectrum_no_sector(tmp_path):
    code, rep, _ = _run(tmp_path, ["qheun", "spectrum"], {"l3": 0.7, "l4": 0.8})
    assert code == 3 and rep["error"]["type"] == "NoPolynomialSector"


def test_qheun_continuum(tmp_path):
    code, rep, _ = _run(tmp_path, ["qheun", "continuum"], {"eps": [1e-2, 1e-3]})
    assert code == 0 and rep["result"]["slope"] >= 0.9


def test_qheun_continuum_draws(tmp_path):
    code, rep, _ = _run(tmp_path, ["qheun", "continuum"], {"draws": 5}, "d.json")
    assert code == 0 and len(rep["result"]["runs"]) == 10


def test_qheun_normal_form_symmetric(tmp_path):
    cfg = {"h1": 0.3, "l1": 0.3, "h2": -0.2, "l2": -0.2}
    code, rep, _ = _run(tmp_path, ["qheun", "normal-form"], cfg)
    assert code == 0
    heun = rep["result"]["heun"]
    assert abs(complex(*heun["delta"]) - 1) < 1e-12
    assert abs(complex(*heun["eps_hat"]) - 1) < 1e-12


def test_lax_match_d5(tmp_path):
    code, rep, _ = _run(tmp_path, ["lax-match", "d5", "--seed", "7"])
    assert code == 0
    assert len(rep["result"]["discrepancies"]) == 50
    assert rep["result"]["max_discrepancy"] < 1e-12


def test_lax_match_e6_names_slot(tmp_path):
    code, rep, _ = _run(tmp_path, ["lax-match", "e6"], {"draws": 3})
    assert code == 0
    assert "mid[x^0]" in rep["result"]["accessory_slot_excluded"]


def test_lax_match_e7_broken_constraint(tmp_path):
    cfg = {"params": {"q": 0.5, "b": [1, 1.1, 0.9, 1.2, 0.8, 1.3, 0.7, 2.0], "t": 1.1, "accessory": 0.4}}
    code, rep, _ = _run(tmp_path, ["lax-match", "e7"], cfg)
    assert code == 3 and rep["error"]["type"] == "ConstraintViolated"


def test_lax_match_zero_draws(tmp_path):
    assert _run(tmp_path, ["lax-match", "d5"], {"draws": 0})[0] == 2


def test_eval(tmp_path):
    code, rep, _ = _run(tmp_path, ["eval"], {"operator": "stage3", "form": "gauged", "k": 2})
    assert code == 0 and len(rep["result"]["value"]) == 2
    assert _run(tmp_path, ["eval"], {"operator": "nope"}, "n.json")[0] == 2


@pytest.mark.parametrize("argv,cfg", [
    (["verify-limits"], {"stage": 3}),
    (["qheun", "continuum", "--seed", "3"], {"draws": 3}),
    (["lax-match", "e7", "--seed", "11"], {"draws": 5}),
    (["eval"], None),
])
def test_determinism(tmp_path, argv, cfg):
    a = _run(tmp_path, argv, cfg, "a.json")[2]
    b = _run(tmp_path, argv, cfg, "b.json")[2]
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rvdcascade", "qheun", "spectrum"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["passed"] is True
