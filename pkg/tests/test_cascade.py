import math

import mpmath
import numpy as np
import pytest

from rvdcascade.cascade import (STAGE_SHIFTS, DegenParams, build_stage, estimate_additive_constant,
                                nd_to_1d, trig_modulus, verify_limit)
from rvdcascade.cascade.n_variable import stage1_constant, stage1_counterterm
from rvdcascade.errors import CountertermPole, StageArityMismatch
from rvdcascade.qcalc import e2pi, exp_pi
from rvdcascade.shiftops import (GaugeSpec, ShiftOperatorND, apply_nd, conjugate_function,
                                 coefficient_difference, distance, standard_basis, strip_samples)

import reference as ref
from conftest import rand_c

AM = 0.37


def _params(rng, stage, N=1, mu=0.0):
    if stage == 1:
        return DegenParams(trig_modulus(AM), rand_c(rng, 8), (), mu, N)
    return DegenParams(trig_modulus(AM), rand_c(rng, 4), rand_c(rng, 4), mu, N)


def _close(op, want, tol=1e-12):
    z_list = [0.13 + 0.07j, -0.29 + 0.11j, 0.41 + 0.03j]
    for z in z_list:
        got = op.coefficients_at(z)
        w = want(z)
        for a, b in zip(got, w):
            assert abs(a - b) <= tol * max(1.0, abs(b))


# --- hand-coded references --------------------------------------------------------

def test_plain_forms_match_reference(rng):
    p1 = _params(rng, 1)
    _close(build_stage(1, "plain", p1), lambda z: ref.A1(p1.h, AM, z))
    p = _params(rng, 2)
    _close(build_stage(2, "plain", p), lambda z: ref.A2(p.h8, AM, z))
    _close(build_stage(3, "plain", p), lambda z: ref.A3(p.h, p.l, AM, z))
    _close(build_stage(4, "plain", p), lambda z: ref.A4(p.h, p.l, AM, z))


def test_gauged_forms_match_reference(rng):
    p1 = _params(rng, 1)
    _close(build_stage(1, "gauged", p1), lambda z: ref.A1t(p1.h, AM, z))
    p = _params(rng, 2)
    _close(build_stage(2, "gauged", p), lambda z: ref.A2t(p.h, p.l, AM, z))
    _close(build_stage(3, "gauged", p), lambda z: ref.A3t(p.h, p.l, AM, z))
    _close(build_stage(4, "gauged", p), lambda z: ref.A4t(p.h, p.l, AM, z))


def test_barred_form_matches_display(rng):
    p = _params(rng, 3)
    op = build_stage(3, "barred", p)
    for z in (0.13 + 0.07j, -0.21 + 0.02j):
        x = e2pi(z)
        got = op.coefficients_at(z)
        want = ref.qthird_barred(p.h, p.l, AM, x)
        for a, b in zip(got, want):
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def _gauge_for(stage):
    return {1: (GaugeSpec(2), 1), 2: (GaugeSpec(0, -1), None), 3: (GaugeSpec(-2), 1),
            4: (GaugeSpec(1, 1), -1)}[stage]


@pytest.mark.parametrize("stage", [1, 2, 3, 4])
def test_numeric_conjugation_matches_symbolic(rng, stage):
    p = _params(rng, stage)
    gauge, scal = _gauge_for(stage)
    if scal is None:
        scal = exp_pi(AM) * np.prod([e2pi(x) for x in p.l])
    plain = build_stage(stage, "plain", p).sampled()
    num = conjugate_function(plain, lambda z: gauge(z, p.modulus)).sampled()
    sym = build_stage(stage, "gauged", p)
    samples = strip_samples(6, rng)
    for z in samples:
        for a, b in zip(sym.coefficients_at(z), num.coefficients_at(z)):
            assert abs(a - scal * b) <= 1e-9 * max(1.0, abs(a))


@pytest.mark.parametrize("stage,kind", [(1, "gauged"), (2, "gauged"), (3, "plain"), (4, "gauged")])
def test_xform_equals_zform(rng, stage, kind):
    p = _params(rng, stage)
    x = build_stage(stage, "x-form", p)
    z = build_stage(stage, kind, p)
    assert coefficient_difference(x, z) < 1e-12


# --- dual representation -------------------------------------------------------------

@pytest.mark.parametrize("stage", [1, 2, 3, 4])
@pytest.mark.parametrize("form", ["plain", "gauged"])
def test_exact_and_sampled_agree(rng, stage, form):
    p = _params(rng, stage, mu=0.2)
    ex = build_stage(stage, form, p, kind="exact")
    sa = build_stage(stage, form, p, kind="sampled")
    assert distance(ex, sa, standard_basis(2), strip_samples(5, rng)) < 1e-12


@pytest.mark.parametrize("stage", [2, 3, 4])
def test_n2_reduces_to_single_particle_terms(rng, stage):
    """At m = 1 (mu = 0) the cross factors are 1 and the N=2 operator splits."""
    p2 = _params(rng, stage, N=2, mu=0.0)
    op2 = build_stage(stage, "gauged", p2, kind="sampled")
    p1 = DegenParams(p2.modulus, p2.h, p2.l, 0.0, 1)
    op1 = build_stage(stage, "gauged", p1)
    zv = (0.12 + 0.08j, -0.23 + 0.05j)
    for j in range(2):
        assert abs(op2.v[j](zv) - op1.v(zv[j])) < 1e-12 * max(1, abs(op1.v(zv[j])))
        assert abs(op2.w[j](zv) - op1.w(zv[j])) < 1e-12 * max(1, abs(op1.w(zv[j])))


def test_n2_symmetric(rng):
    p = _params(rng, 4, N=2, mu=0.17 + 0.02j)
    op = build_stage(4, "plain", p, kind="sampled")
    f = lambda zv: e2pi(zv[0]) + e2pi(zv[1])
    a, b = (0.12 + 0.08j, -0.23 + 0.05j), (-0.23 + 0.05j, 0.12 + 0.08j)
    assert abs(apply_nd(op, f, a) - apply_nd(op, f, b)) < 1e-12


def test_stage_arity_and_kind_errors(rng):
    p = _params(rng, 2)
    with pytest.raises(StageArityMismatch):
        build_stage(1, "plain", p)
    with pytest.raises(StageArityMismatch):
        build_stage(2, "plain", _params(rng, 2, N=2), kind="exact")
    with pytest.raises(ValueError):
        build_stage(2, "barred", p)
    with pytest.raises(StageArityMismatch):
        nd_to_1d(build_stage(2, "plain", _params(rng, 2, N=2), kind="sampled"))


# --- counterterms -----------------------------------------------------------------

def test_counterterm_n1_closed_form(rng):
    p = _params(rng, 1)
    ea = exp_pi(AM)
    P = np.prod([np.exp(1j * np.pi * x) for x in p.h])
    assert abs(stage1_counterterm(p) - P / (1 - ea) ** 2) < 1e-13


def test_counterterm_general_n_reduces(rng):
    p = _params(rng, 1, N=1, mu=0.23)
    pN = DegenParams(p.modulus, p.h, (), 0.23, 2)
    assert np.isfinite(stage1_counterterm(pN))
    # the N-formula evaluated at N = 1 reproduces the one-variable coefficient
    m = e2pi(0.23)
    ea = exp_pi(AM)
    Ew = ((1 - m * ea) / (1 - ea)) ** 2
    P = np.prod([np.exp(1j * np.pi * x) for x in p.h])
    kN1 = -P * (m - Ew) / ((1 - m) * (1 - m * ea * ea))
    assert abs(kN1 - stage1_counterterm(p)) < 1e-12 * abs(kN1)


def test_constant_matches_empirical(rng):
    p = _params(rng, 1, mu=0.21 + 0.03j)
    emp, spread = estimate_additive_constant(p, q_plus=1e-4, return_spread=True)
    closed = complex(stage1_constant(p))
    assert abs(emp - closed) < 1e-3 * max(1, abs(closed))


def test_counterterm_pole(rng):
    p = DegenParams(trig_modulus(1e-15), rand_c(rng, 8))
    with pytest.raises(CountertermPole):
        verify_limit(1, p)


# --- harness ------------------------------------------------------------------------

@pytest.mark.parametrize("stage", [2, 3, 4])
def test_limits_converge_at_observed_rate(rng, stage):
    rep = verify_limit(stage, _params(rng, stage))
    assert rep.passed, rep
    assert abs(rep.exponent / math.pi + 4) < 0.4
    assert rep.distances[-1] < rep.distances[0]


def test_stage1_limit(rng):
    rep = verify_limit(1, _params(rng, 1, mu=0.21 + 0.03j))
    assert rep.passed
    assert rep.exponent > 1.8
    assert min(rep.digits_retained) > 6


def test_report_json(rng):
    rep = verify_limit(4, _params(rng, 4), n_samples=3)
    js = rep.to_json()
    assert js["basis"] and js["stage"] == 4 and js["scale_name"] == "R"


def test_shift_table():
    assert STAGE_SHIFTS[2].dz == 1 and STAGE_SHIFTS[3].dz == -1 and STAGE_SHIFTS[4].prefactor_rate == 0
