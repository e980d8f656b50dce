"""Exact (Laurent-rational) one-variable operators of the four stages.

The variable of every coefficient is w = x = exp(2 pi i z). Plain forms are
the limit operators of each stage and gauged forms follow from them by
quasi-periodic conjugation. The x-forms are written directly in the
multiplicative variable so that they can be compared with the z-forms.
"""
from __future__ import annotations

from ..laurent import LaurentPoly as LP
from ..laurent import LaurentRational as LR
from ..qcalc import e2pi, epi, exp_pi
from ..shiftops import (GaugeSpec, ShiftOperator1D, conjugate_monomial,
                        conjugate_pochhammer)
from .params import DegenParams


def _prod(xs, start=1):
    out = start
    for x in xs:
        out = out * x
    return out


def _lin_inv(c):
    """1 - c w^{-1}."""
    return LP({0: 1, -1: -c})


def _lin(c):
    """1 - c w."""
    return LP({0: 1, 1: -c})


def _mono(k, c=1):
    return LP({k: c})


# --- stage 1 -------------------------------------------------------------------

def stage1_plain(p: DegenParams) -> ShiftOperator1D:
    am = p.modulus.a_minus
    ea, sq = exp_pi(am), exp_pi(-am)
    H = [e2pi(h) for h in p.h]
    P = _prod(epi(h) for h in p.h)
    S = sum(x + 1 / x for x in H)
    num = _prod((_lin_inv(Hn * sq) for Hn in H), LP.const(1))
    den = LP({0: 1, -2: -1}) * LP({0: 1, -2: -sq * sq})
    V = LR(num, den)
    W = V.subs_inverse()
    Pm = _prod(Hn - 1 for Hn in H)
    Pp = _prod(Hn + 1 for Hn in H)
    U = (LR(LP.const(Pm / 2), _lin(ea) * _lin_inv(ea))
         + LR(LP.const(Pp / 2), _lin(-ea) * _lin_inv(-ea))
         + LR(LP({1: S, -1: S, 2: -(ea + sq), -2: -(ea + sq)}) * (P * sq)))
    return ShiftOperator1D(V, W, U, p.modulus)


def stage1_gauged(p: DegenParams) -> ShiftOperator1D:
    return conjugate_monomial(stage1_plain(p), GaugeSpec(m=2))


def stage1_xform(p: DegenParams) -> ShiftOperator1D:
    """Gauged stage-1 operator written with q = exp(-2 pi a_-) and x."""
    q = p.modulus.q
    qh = p.modulus.sqrt_q
    H = [e2pi(h) for h in p.h]
    num = _prod((LP({1: 1, 0: -Hn * qh}) for Hn in H), LP.const(1)).shift(-6)
    den = LP({0: q, -2: -q}) * LP({0: 1, -2: -q})
    Vt = LR(num, den)
    # W~(x) = V~(1/x)
    Wt = Vt.subs_inverse()
    return ShiftOperator1D(Vt, Wt, stage1_plain(p).u, p.modulus)


# --- stage 2 -------------------------------------------------------------------

def stage2_plain(p: DegenParams) -> ShiftOperator1D:
    am = p.modulus.a_minus
    ea, sq = exp_pi(am), exp_pi(-am)
    h = p.h8
    H = [e2pi(x) for x in h]
    P58 = _prod(H[4:])
    P8 = _prod(epi(x) for x in h)
    V = _prod((_lin_inv(Hn * sq) for Hn in H[:4]), _mono(2, P58))
    W = _prod((_lin(Hn * sq) for Hn in H[4:]), _mono(-2, ea * ea))
    s_up = sum(H[:4]) + sum(1 / x for x in H[4:])
    s_dn = sum(1 / x for x in H[:4]) + sum(H[4:])
    U = (LP({1: s_up * sq, 2: -(1 + sq * sq)}) * P58
         + LP({-1: s_dn * sq, -2: -(1 + sq * sq)}) * P8)
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


def stage2_gauged(p: DegenParams) -> ShiftOperator1D:
    ea = exp_pi(p.modulus.a_minus)
    L = [e2pi(x) for x in p.l]
    return conjugate_monomial(stage2_plain(p), GaugeSpec(n=-1)).scaled(ea * _prod(L))


def stage2_xform(p: DegenParams) -> ShiftOperator1D:
    """The multiplicative form A^<2>(x) of the gauged stage-2 operator."""
    qh = p.modulus.sqrt_q
    H = [e2pi(x) for x in p.h]
    L = [e2pi(x) for x in p.l]
    root = _prod(epi(x) for x in p.h + p.l)  # prod h_n^{1/2} l_n^{1/2}
    V = LP.from_roots([Hn * qh for Hn in H]).shift(-2)
    W = LP.from_roots([Ln / qh for Ln in L]).shift(-2)
    c = qh + 1 / qh
    U = LP({2: -c, 1: sum(H) + sum(L)}) + LP({-2: -c, -1: sum(1 / x for x in H + L)}) * root
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


# --- stage 3 -------------------------------------------------------------------

def _cosh_pair(h3, h4):
    return epi(h3 - h4) + epi(h4 - h3)


def stage3_plain(p: DegenParams) -> ShiftOperator1D:
    am = p.modulus.a_minus
    ea, sq = exp_pi(am), exp_pi(-am)
    H = [e2pi(x) for x in p.h]
    L = [e2pi(x) for x in p.l]
    V = _prod((_lin_inv(Hn * sq) for Hn in H[:2]), _mono(2))
    W = _prod((_lin_inv(Ln * ea) for Ln in L), _mono(2))
    k = epi(p.h[0] + p.h[1]) * _cosh_pair(p.h[2], p.h[3]) * _prod(epi(x) for x in p.l)
    U = LP({1: H[0] + H[1] + sum(L), 2: -(ea + sq), -1: k})
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


def stage3_gauged(p: DegenParams) -> ShiftOperator1D:
    return conjugate_monomial(stage3_plain(p), GaugeSpec(m=-2))


def stage3_xform(p: DegenParams) -> ShiftOperator1D:
    """The multiplicative form A^<3>(x) (operator part of the third-stage equation)."""
    qh = p.modulus.sqrt_q
    H = [e2pi(x) for x in p.h]
    L = [e2pi(x) for x in p.l]
    # (l1 l2 l3 l4 h1 h2)^{1/2} (h3^{1/2} h4^{-1/2} + h3^{-1/2} h4^{1/2})
    k = _prod(epi(x) for x in p.l + p.h[:2]) * _cosh_pair(p.h[2], p.h[3])
    V = LP.from_roots([H[0] * qh, H[1] * qh])
    W = LP.from_roots([Ln / qh for Ln in L]).shift(-2)
    U = LP({2: -(qh + 1 / qh), 1: H[0] + H[1] + sum(L), -1: k})
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


def stage3_barred(p: DegenParams) -> ShiftOperator1D:
    """x * v o A^<3>(x) o v^{-1} with v(x) = (l_4 q^{1/2}/x; q)_infinity.

    After relabelling (h_3, h_4, l_4) -> (h~, 1, h_3) this is the gauge
    transformed third-stage operator with three-factor shift coefficients.
    """
    a = e2pi(p.l[3]) * p.modulus.sqrt_q
    op = conjugate_pochhammer(stage3_xform(p), a)
    x = LR.monomial(1)
    return ShiftOperator1D(op.v.rational * x, op.w.rational * x, op.u.rational * x, p.modulus)


# --- stage 4 -------------------------------------------------------------------

def stage4_plain(p: DegenParams) -> ShiftOperator1D:
    am = p.modulus.a_minus
    ea, sq = exp_pi(am), exp_pi(-am)
    H = [e2pi(x) for x in p.h]
    L = [e2pi(x) for x in p.l]
    V = _prod((_lin_inv(Hn * sq) for Hn in H[:2]), LP.const(sq * sq))
    W = _prod((_lin_inv(Ln * ea) for Ln in L[:2]), _mono(2, L[2] * L[3]))
    k = epi(p.h[0] + p.h[1]) * _cosh_pair(p.h[2], p.h[3]) * _prod(epi(x) for x in p.l)
    U = LP({1: L[2] + L[3], -1: k})
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


def stage4_gauged(p: DegenParams) -> ShiftOperator1D:
    return conjugate_monomial(stage4_plain(p), GaugeSpec(m=1, n=1)).scaled(-1)


def stage4_xform(p: DegenParams) -> ShiftOperator1D:
    """The multiplicative form A^<4>(x); h_3 enters through h_3/h_4 (h_4 = 1 normalization)."""
    qh = p.modulus.sqrt_q
    H = [e2pi(x) for x in p.h]
    L = [e2pi(x) for x in p.l]
    k = _prod(epi(x) for x in p.l + p.h[:2]) * _cosh_pair(p.h[2], p.h[3])
    V = LP.from_roots([H[0] * qh, H[1] * qh]).shift(-1)
    W = LP.from_roots([L[0] / qh, L[1] / qh], lead=L[2] * L[3]).shift(-1)
    U = LP({1: -(L[2] + L[3]), -1: -k})
    return ShiftOperator1D(LR(V), LR(W), LR(U), p.modulus)


PLAIN = {1: stage1_plain, 2: stage2_plain, 3: stage3_plain, 4: stage4_plain}
GAUGED = {1: stage1_gauged, 2: stage2_gauged, 3: stage3_gauged, 4: stage4_gauged}
XFORM = {1: stage1_xform, 2: stage2_xform, 3: stage3_xform, 4: stage4_xform}
