import math

import numpy as np
import pytest

from rvdcascade.cascade import DegenParams, build_stage, trig_modulus
from rvdcascade.errors import DimensionMismatch, PoleAtShift, UnsupportedGauge
from rvdcascade.laurent import LaurentPoly as LP
from rvdcascade.laurent import LaurentRational as LR
from rvdcascade.qcalc import ModulusPair, e2pi
from rvdcascade.shiftops import (GaugeSpec, Sampled, ShiftOperator1D, ShiftOperatorND, apply, apply_nd,
                                 conjugate_function, conjugate_monomial, conjugate_pochhammer,
                                 distance, pochhammer_gauge_ratios, shifted, standard_basis,
                                 strip_samples)

from conftest import rand_c

M = ModulusPair(math.inf, 0.37)


def _op():
    return ShiftOperator1D(LR(LP({1: 1, 0: 2})), LR(LP({-1: 3})), LR(LP({0: 0.5})), M)


def test_apply_by_hand():
    op = _op()
    z = 0.11 + 0.05j
    f = lambda s: e2pi(2 * s)
    x = e2pi(z)
    ia = 0.37j
    expect = (x + 2) * f(z - ia) + 3 / x * f(z + ia) + 0.5 * f(z)
    assert abs(apply(op, f, z) - expect) < 1e-13


def test_numeric_monomial_conjugation_agrees():
    # R_- for a finite period, trigonometric R_+
    mod = ModulusPair(math.inf, 0.6)
    op = ShiftOperator1D(LR(LP({1: 1, 0: 2})), LR(LP({-1: 3, 0: 1})), LR(LP({0: 0.5})), mod)
    for gauge in (GaugeSpec(2), GaugeSpec(-2), GaugeSpec(1, 1), GaugeSpec(0, -1)):
        sym = conjugate_monomial(op, gauge)
        num = conjugate_function(op.sampled(), lambda z: gauge(z, mod))
        samples = strip_samples(6, np.random.default_rng(0))
        assert distance(sym, num, standard_basis(2), samples) < 1e-9


def test_gauge_composition():
    op = _op()
    a = conjugate_monomial(conjugate_monomial(op, GaugeSpec(1, 0)), GaugeSpec(1, 1))
    b = conjugate_monomial(op, GaugeSpec(1, 0) * GaugeSpec(1, 1))
    z = 0.2 + 0.1j
    assert np.allclose(a.coefficients_at(z), b.coefficients_at(z), rtol=1e-13)


def test_unsupported_gauge():
    with pytest.raises(UnsupportedGauge):
        GaugeSpec(0.5, 0)
    with pytest.raises(UnsupportedGauge):
        conjugate_monomial(_op(), "R_-")


def test_pochhammer_gauge_matches_products():
    q = M.q
    a = 0.7 + 0.1j
    op = _op()
    conj = conjugate_pochhammer(op, a)
    for x in (1.3 + 0.4j, -0.8 + 0.9j):
        rb, rf = pochhammer_gauge_ratios(x, a, q)
        v, w, u = (c.rational.eval(x) for c in (op.v, op.w, op.u))
        cv, cw, cu = (c.rational.eval(x) for c in (conj.v, conj.w, conj.u))
        assert abs(cv - v * rb) < 1e-9 * max(1, abs(cv))
        assert abs(cw - w * rf) < 1e-9 * max(1, abs(cw))
        assert abs(cu - u) < 1e-12


def test_pole_at_shift():
    q = 0.5
    with pytest.raises(PoleAtShift):
        pochhammer_gauge_ratios(1.0, q, q)  # a/(q x) = 1 kills (a/(qx); q)
    # generic point is fine
    pochhammer_gauge_ratios(1.7, 0.3, q)


def test_shifted_exact_vs_sampled():
    op = _op()
    a = shifted(op, 0.3j, 2.0)
    b = shifted(op.sampled(), 0.3j, 2.0)
    z = 0.1 + 0.02j
    assert np.allclose(a.coefficients_at(z), b.coefficients_at(z), rtol=1e-13)


def test_nd_dimension_mismatch(rng):
    p = DegenParams(trig_modulus(0.4), rand_c(rng, 4), rand_c(rng, 4), mu=0.2, N=2)
    op = build_stage(4, "plain", p, kind="sampled")
    assert isinstance(op, ShiftOperatorND)
    with pytest.raises(DimensionMismatch):
        apply_nd(op, lambda zv: 1, (0.1,))
    with pytest.raises(DimensionMismatch):
        distance(op, _op(), standard_basis(1), [0.1])


def test_nd_from_1d_agrees():
    op = _op()
    nd = ShiftOperatorND.from_1d(op)
    z = 0.13 + 0.04j
    f = lambda s: e2pi(s)
    assert abs(apply_nd(nd, lambda zv: f(zv[0]), (z,)) - apply(op, f, z)) < 1e-13


def test_sampled_coefficients():
    op = ShiftOperator1D(Sampled(lambda z: 1), Sampled(lambda z: 2), Sampled(lambda z: z), M)
    assert not op.is_exact
    assert apply(op, lambda s: 1, 0.2) == pytest.approx(3.2)
