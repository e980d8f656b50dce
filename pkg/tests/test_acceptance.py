"""Acceptance criteria, one test and one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or ``python3 tests/test_acceptance.py``.
Tolerances are pinned here and are not tuned to the implementation.
"""
import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from rvdcascade.cascade import DegenParams, build_stage, trig_modulus, verify_limit  # noqa: E402
from rvdcascade.cli import run  # noqa: E402
from rvdcascade.laxlink import run_draws  # noqa: E402
from rvdcascade.qcalc import ModulusPair, e2pi, exp_pi  # noqa: E402
from rvdcascade.qheun import (QHeunParams, characteristic_value, continuum_slope,  # noqa: E402
                              heun_normal_form, polynomial_spectrum, riemann_scheme)
from rvdcascade.rvd import RvDParams, build_rvd  # noqa: E402
from rvdcascade.shiftops import (GaugeSpec, apply, conjugate_function, standard_basis,  # noqa: E402
                                 strip_samples)

import reference as ref  # noqa: E402

MU_REL_TOL = 1e-9
STAGE1_MIN_EXPONENT = 0.9
Q_PLUS = (1e-2, 1e-3, 1e-4)
R_VALUES = (1.0, 1.5, 2.0)
STATED_RATE = -2 * math.pi
RATE_REL_TOL = 0.10
GAUGE_SYMBOLIC_TOL = 1e-12
GAUGE_NUMERIC_TOL = 1e-9
CONTINUUM_EPS = (1e-2, 3e-3, 1e-3)
CONTINUUM_MIN_SLOPE = 0.9
CONTINUUM_DRAWS = 20
RIEMANN_TOL = 1e-10
FUCHS_TOL = 1e-12
LAX_DRAWS = 50
LAX_TOL = 1e-12
SPECTRUM_TOL = 1e-10

RESULTS = []


def _report(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _rand_c(rng, n, re=0.3, im=0.1):
    return rng.uniform(-re, re, n) + 1j * rng.uniform(-im, im, n)


def test_criterion_1_mu_independence():
    rng = np.random.default_rng(1)
    h = _rand_c(rng, 8)
    m = ModulusPair(1.1, 0.45)
    mu1, mu2 = complex(*rng.uniform(0.05, 0.4, 2) * (1, 0.2)), complex(*rng.uniform(0.05, 0.4, 2) * (1, 0.2))
    a, b = build_rvd(RvDParams(m, h, mu1)), build_rvd(RvDParams(m, h, mu2))
    worst = 0.0
    for z in strip_samples(20, rng):
        for f in standard_basis():
            x, y = apply(a, f, z), apply(b, f, z)
            worst = max(worst, abs(x - y) / max(1.0, abs(y)))
    _report(1, worst < MU_REL_TOL, f"mu-independence max rel diff {worst:.2e} (< {MU_REL_TOL:g}) at 20 points")


def test_criterion_2_stage1_limit():
    rng = np.random.default_rng(2)
    p = DegenParams(trig_modulus(0.4), _rand_c(rng, 8), (), 0.21 + 0.03j, 1)
    rep = verify_limit(1, p, scales=Q_PLUS)
    ok = rep.exponent >= STAGE1_MIN_EXPONENT
    _report(2, ok, f"stage-1 fitted exponent {rep.exponent:.3f} (>= {STAGE1_MIN_EXPONENT}) over q_+ {Q_PLUS}")


def test_criterion_3_stages_2_to_4_limits():
    rng = np.random.default_rng(3)
    parts, ok = [], True
    for N in (1, 2):
        mu = 0.21 + 0.03j if N == 1 else 0.17 + 0.02j
        p1 = DegenParams(trig_modulus(0.4), _rand_c(rng, 8), (), mu, N)
        rep = verify_limit(1, p1, scales=Q_PLUS)
        ok &= rep.exponent >= STAGE1_MIN_EXPONENT
        parts.append(f"N={N} stage1 exp {rep.exponent:.2f}")
        p = DegenParams(trig_modulus(0.4), _rand_c(rng, 4), _rand_c(rng, 4), mu, N)
        for stage in (2, 3, 4):
            rep = verify_limit(stage, p, scales=R_VALUES, expected_rate=STATED_RATE, rate_tol=RATE_REL_TOL)
            ok &= rep.passed
            parts.append(f"N={N} stage{stage} rate {rep.exponent:.3f}")
    _report(3, ok, f"rates vs {STATED_RATE:.4f} +- {RATE_REL_TOL:.0%}: " + ", ".join(parts))


def _gauge_for(stage):
    return {1: (GaugeSpec(2), 1), 2: (GaugeSpec(0, -1), None), 3: (GaugeSpec(-2), 1),
            4: (GaugeSpec(1, 1), -1)}[stage]


def test_criterion_4_gauge_identities():
    rng = np.random.default_rng(4)
    am = 0.37
    sym_worst, num_worst = 0.0, 0.0
    refs = {1: ref.A1t, 2: ref.A2t, 3: ref.A3t, 4: ref.A4t}
    pts = strip_samples(6, rng)
    for stage in (1, 2, 3, 4):
        if stage == 1:
            p = DegenParams(trig_modulus(am), _rand_c(rng, 8), (), 0.0, 1)
        else:
            p = DegenParams(trig_modulus(am), _rand_c(rng, 4), _rand_c(rng, 4), 0.0, 1)
        sym = build_stage(stage, "gauged", p)
        for z in pts:
            want = refs[stage](p.h, am, z) if stage == 1 else refs[stage](p.h, p.l, am, z)
            for a, b in zip(sym.coefficients_at(z), want):
                sym_worst = max(sym_worst, abs(a - b) / max(1.0, abs(b)))
        gauge, scal = _gauge_for(stage)
        if scal is None:
            scal = exp_pi(am) * np.prod([e2pi(x) for x in p.l])
        num = conjugate_function(build_stage(stage, "plain", p).sampled(), lambda z: gauge(z, p.modulus))
        for z in pts:
            for a, b in zip(sym.coefficients_at(z), num.coefficients_at(z)):
                num_worst = max(num_worst, abs(a - scal * b) / max(1.0, abs(a)))
        if stage == 3:
            bar = build_stage(3, "barred", p)
            for z in pts:
                for a, b in zip(bar.coefficients_at(z), ref.qthird_barred(p.h, p.l, am, e2pi(z))):
                    sym_worst = max(sym_worst, abs(a - b) / max(1.0, abs(b)))
    ok = sym_worst < GAUGE_SYMBOLIC_TOL and num_worst < GAUGE_NUMERIC_TOL
    _report(4, ok, f"symbolic vs hand-coded {sym_worst:.2e} (< {GAUGE_SYMBOLIC_TOL:g}), "
                   f"numeric conjugation {num_worst:.2e} (< {GAUGE_NUMERIC_TOL:g})")


def test_criterion_5_continuum_limit():
    from rvdcascade.cli import random_continuum
    slopes, riem, fuchs = [], 0.0, 0.0
    for i in range(CONTINUUM_DRAWS):
        cp = random_continuum(np.random.default_rng([5, i]))
        for f in ([1], [0, 0, 1], [0.2, -1, 0, 1]):
            slopes.append(continuum_slope(cp, f, 1.3 + 0.2j, CONTINUUM_EPS))
        riem = max(riem, riemann_scheme(cp).max_mismatch)
        fuchs = max(fuchs, abs(heun_normal_form(cp).fuchs_defect()))
    ok = min(slopes) >= CONTINUUM_MIN_SLOPE and riem < RIEMANN_TOL and fuchs < FUCHS_TOL
    _report(5, ok, f"min continuum slope {min(slopes):.3f} (>= {CONTINUUM_MIN_SLOPE}), "
                   f"Riemann mismatch {riem:.1e} (< {RIEMANN_TOL:g}), Fuchs defect {fuchs:.1e} (< {FUCHS_TOL:g})")


def test_criterion_6_lax_dictionaries():
    worst, ok = {}, True
    for fam in ("d5", "e6", "e7"):
        res = run_draws(fam, LAX_DRAWS, seed=6)
        worst[fam] = max(r.discrepancy for r in res)
        ok &= all(r.passed for r in res) and worst[fam] < LAX_TOL
    _report(6, ok, f"{LAX_DRAWS} draws each, max discrepancy "
                   + ", ".join(f"{k.upper()} {v:.1e}" for k, v in worst.items()) + f" (< {LAX_TOL:g})")


def _scan_roots(p, d, lo=-30, hi=30, n=60001):
    grid = np.linspace(lo, hi, n)
    sign = lambda E: np.sign(characteristic_value(p, d, E).real)
    vals = np.array([sign(E) for E in grid])
    roots = []
    for i in np.nonzero(vals[:-1] != vals[1:])[0]:
        a, b = grid[i], grid[i + 1]
        for _ in range(80):
            m = (a + b) / 2
            a, b = (m, b) if sign(m) == sign(a) else (a, m)
        roots.append((a + b) / 2)
    return sorted(roots)


def test_criterion_7_polynomial_spectrum():
    p0 = QHeunParams.from_values(0.25, h1=2.0, h2=3.0, h3=3 / 8, l1=1.0, l2=2.0, l3=0.5, l4=1.0)
    e0 = polynomial_spectrum(p0, 0).eigenvalues[0]
    err0 = abs(e0 - (-5.5))
    q, h1, h2, l1, l2, l4 = 0.3, 1.3, 0.7, 0.9, 1.1, 0.6
    l3 = 1 / q
    Kt = h1 * h2 * q + l1 * l2 * l3 * l4 / q
    s = Kt / math.sqrt(l1 * l2 * l3 * l4 * h1 * h2)
    x = (s + math.sqrt(s * s - 4)) / 2
    p1 = QHeunParams.from_values(q, h1=h1, h2=h2, h3=x * x, l1=l1, l2=l2, l3=l3, l4=l4)
    eig = sorted(e.real for e in polynomial_spectrum(p1, 1).eigenvalues)
    scan = _scan_roots(p1, 1)
    err1 = max(abs(a - b) for a, b in zip(eig, scan)) if len(scan) == len(eig) else math.inf
    ok = err0 < SPECTRUM_TOL and err1 < SPECTRUM_TOL
    _report(7, ok, f"d=0 E={e0.real:.12f} (err {err0:.1e}), d=1 scan vs recurrence {err1:.1e} (< {SPECTRUM_TOL:g})")


def test_criterion_8_determinism():
    import tempfile
    cases = [(["verify-limits"], {}), (["verify-limits"], {"stage": 1, "N": 2}),
             (["qheun", "spectrum"], {}), (["qheun", "continuum"], {"draws": 3}),
             (["qheun", "normal-form"], {}), (["lax-match", "d5"], {"draws": 5}),
             (["lax-match", "e6"], {"draws": 5}), (["lax-match", "e7"], {"draws": 5}), (["eval"], {})]
    same = 0
    with tempfile.TemporaryDirectory() as d:
        cfg = os.path.join(d, "cfg.json")
        for argv, c in cases:
            with open(cfg, "w") as fh:
                json.dump(c, fh)
            outs = []
            for k in range(2):
                out = os.path.join(d, f"r{k}.json")
                run(argv + ["--config", cfg, "--seed", "42", "--out", out])
                with open(out, "rb") as fh:
                    outs.append(fh.read())
            same += outs[0] == outs[1]
    _report(8, same == len(cases), f"{same}/{len(cases)} CLI reports byte-identical on rerun")


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            fails += 1
    sys.exit(1 if fails else 0)
