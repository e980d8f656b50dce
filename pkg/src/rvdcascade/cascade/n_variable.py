"""N-variable degenerate operators as sampled coefficient maps.

At ``N = 1`` these give an independent sampled representation of the exact
one-variable operators (the dual-representation check in the tests).
"""
from __future__ import annotations

from itertools import combinations

from ..qcalc import e2pi, epi, exp_pi
from ..shiftops import GaugeSpec, ShiftOperatorND, conjugate_monomial
from .params import DegenParams


def _prod(xs, start=1):
    out = start
    for x in xs:
        out = out * x
    return out


def _pairs_sum(xs):
    return sum((a * b for a, b in combinations(xs, 2)), 0)


def _cross(xs, j, m):
    """prod_{k != j} (1 - m x_k/x_j) / (1 - x_k/x_j)."""
    xj = xs[j]
    return _prod((1 - m * xk / xj) / (1 - xk / xj) for k, xk in enumerate(xs) if k != j)


class _Consts:
    def __init__(self, p: DegenParams):
        am = p.modulus.a_minus
        self.ea = exp_pi(am)
        self.sq = exp_pi(-am)
        self.m = e2pi(p.mu)
        self.N = p.N
        self.H = [e2pi(x) for x in p.h]
        self.L = [e2pi(x) for x in p.l]


def _make(vfun, wfun, ufun, p: DegenParams) -> ShiftOperatorND:
    xs = lambda zv: [e2pi(z) for z in zv]
    vs = tuple((lambda zv, j=j: vfun(j, xs(zv))) for j in range(p.N))
    ws = tuple((lambda zv, j=j: wfun(j, xs(zv))) for j in range(p.N))
    return ShiftOperatorND(vs, ws, lambda zv: ufun(xs(zv)), p.modulus, p.N)


# --- stage 1 -------------------------------------------------------------------

def stage1_plain_nd(p: DegenParams) -> ShiftOperatorND:
    c = _Consts(p)
    ea, sq, m, H, N = c.ea, c.sq, c.m, c.H, c.N
    P = _prod(epi(x) for x in p.h)
    S = sum(x + 1 / x for x in H)
    Km = _prod(x - 1 for x in H)
    Kp = _prod(x + 1 for x in H)
    D = (m - 1) * (m * ea * ea - 1)
    mu_fac = (epi(p.mu) - epi(-p.mu)) * (epi(p.mu) * ea - epi(-p.mu) * sq)

    def V(j, xs):
        xj = xs[j]
        single = _prod(1 - Hn * sq / xj for Hn in H) / ((1 - xj**-2) * (1 - sq * sq * xj**-2))
        cross = _prod((1 - m * xk / xj) * (1 - m / (xk * xj)) / ((1 - xk / xj) * (1 - 1 / (xk * xj)))
                      for k, xk in enumerate(xs) if k != j)
        return single * cross

    def W(j, xs):
        return V(j, [1 / x for x in xs])

    def U(xs):
        # product form minus its z-independent part K m^N/(2D)
        t1 = Km / (2 * D) * (_prod(m + D / ((1 - x * ea) * (1 - ea / x)) for x in xs) - m**N)
        t2 = Kp / (2 * D) * (_prod(m + D / ((1 + x * ea) * (1 + ea / x)) for x in xs) - m**N)
        cs = [x + 1 / x for x in xs]
        t3 = sq * m ** (N - 1) * P * (S * sum(cs) - (sq + ea) * sum(x * x + 1 / (x * x) for x in xs)
                                      + mu_fac * _pairs_sum(cs))
        return t1 + t2 + t3

    return _make(V, W, U, p)


def stage1_gauged_nd(p: DegenParams) -> ShiftOperatorND:
    return conjugate_monomial(stage1_plain_nd(p), GaugeSpec(m=2))


def stage1_counterterm(p: DegenParams):
    """Coefficient kappa_N of q_+^{-2} that cancels the divergence of the full operator.

    kappa_N = -P [m^N - E^N] / ((1 - m)(1 - m e^{2 pi a_-})) with
    E = ((1 - m e^{pi a_-})/(1 - e^{pi a_-}))^2; at N = 1 this is P/(1 - e^{pi a_-})^2.
    """
    ea = exp_pi(p.modulus.a_minus)
    P = _prod(epi(x) for x in p.h)
    if p.N == 1:
        return P / (1 - ea) ** 2
    m = e2pi(p.mu)
    Ew = ((1 - m * ea) / (1 - ea)) ** 2
    return -P * (m**p.N - Ew**p.N) / ((1 - m) * (1 - m * ea * ea))


def stage1_constant(p: DegenParams):
    """Closed-form additive constant C of the one-variable first degeneration (corrected form)."""
    ea = exp_pi(p.modulus.a_minus)
    H = [e2pi(x) for x in p.h]
    P = _prod(epi(x) for x in p.h)
    cs = [x + 1 / x for x in H]
    s2 = _pairs_sum(cs)
    Pm = _prod(x - 1 for x in H)
    Pp = _prod(x + 1 for x in H)
    d = (1 - ea) ** 2
    return P * ((1 + ea**-2) + (12 + s2) / d) + (Pm + Pp) / (2 * d)


# --- stage 2 -------------------------------------------------------------------

def stage2_plain_nd(p: DegenParams) -> ShiftOperatorND:
    h8 = p.h8
    c = _Consts(DegenParams(p.modulus, h8, (), p.mu, p.N))
    ea, sq, m, H, N = c.ea, c.sq, c.m, c.H, c.N
    P58 = _prod(H[4:])
    P8 = _prod(epi(x) for x in h8)
    s_up = sum(H[:4]) + sum(1 / x for x in H[4:])
    s_dn = sum(1 / x for x in H[:4]) + sum(H[4:])
    mk = m ** (N - 1)
    cr = sq * sq * (m - 1) * (m * ea * ea - 1) / m

    def V(j, xs):
        xj = xs[j]
        return xj**2 * mk * _prod(1 - Hn * sq / xj for Hn in H[:4]) * P58 * _cross(xs, j, m)

    def W(j, xs):
        xj = xs[j]
        cross = _prod((1 - m * xj / xk) / (1 - xj / xk) for k, xk in enumerate(xs) if k != j)
        return ea * ea * xj**-2 * _prod(1 - xj * Hn * sq for Hn in H[4:]) * cross

    def U(xs):
        inv = [1 / x for x in xs]
        a = s_up * sq * sum(xs) - (1 + sq * sq) * sum(x * x for x in xs) + cr * _pairs_sum(xs)
        b = s_dn * sq * sum(inv) - (1 + sq * sq) * sum(x * x for x in inv) + cr * _pairs_sum(inv)
        return mk * (P58 * a + P8 * b)

    return _make(V, W, U, p)


def stage2_gauged_nd(p: DegenParams) -> ShiftOperatorND:
    ea = exp_pi(p.modulus.a_minus)
    L = _prod(e2pi(x) for x in p.l)
    scal = ea * L * e2pi(-(p.N - 1) * p.mu)
    return conjugate_monomial(stage2_plain_nd(p), GaugeSpec(n=-1)).scaled(scal)


# --- stage 3 -------------------------------------------------------------------

def _k34(p):
    return (epi(p.h[0] + p.h[1]) * (epi(p.h[2] - p.h[3]) + epi(p.h[3] - p.h[2]))
            * _prod(epi(x) for x in p.l))


def stage3_plain_nd(p: DegenParams) -> ShiftOperatorND:
    c = _Consts(p)
    ea, sq, m, H, L = c.ea, c.sq, c.m, c.H, c.L
    k = _k34(p)
    cr = sq * (m - 1) * (m * ea * ea - 1) / m

    def V(j, xs):
        xj = xs[j]
        return xj**2 * _prod(1 - Hn * sq / xj for Hn in H[:2]) * _cross(xs, j, m)

    def W(j, xs):
        xj = xs[j]
        return xj**2 * _prod(1 - Ln * ea / xj for Ln in L) * _cross(xs, j, 1 / m)

    def U(xs):
        return ((H[0] + H[1] + sum(L)) * sum(xs) - (ea + sq) * sum(x * x for x in xs)
                + cr * _pairs_sum(xs) + k * sum(1 / x for x in xs))

    return _make(V, W, U, p)


def stage3_gauged_nd(p: DegenParams) -> ShiftOperatorND:
    return conjugate_monomial(stage3_plain_nd(p), GaugeSpec(m=-2))


# --- stage 4 -------------------------------------------------------------------

def stage4_plain_nd(p: DegenParams) -> ShiftOperatorND:
    c = _Consts(p)
    ea, sq, m, H, L = c.ea, c.sq, c.m, c.H, c.L
    k = _k34(p)

    def V(j, xs):
        return sq * sq * _prod(1 - Hn * sq / xs[j] for Hn in H[:2]) * _cross(xs, j, m)

    def W(j, xs):
        xj = xs[j]
        return xj**2 * L[2] * L[3] * _prod(1 - Ln * ea / xj for Ln in L[:2]) * _cross(xs, j, 1 / m)

    def U(xs):
        return (L[2] + L[3]) * sum(xs) + k * sum(1 / x for x in xs)

    return _make(V, W, U, p)


def stage4_gauged_nd(p: DegenParams) -> ShiftOperatorND:
    return conjugate_monomial(stage4_plain_nd(p), GaugeSpec(m=1, n=1)).scaled(-1)


PLAIN_ND = {1: stage1_plain_nd, 2: stage2_plain_nd, 3: stage3_plain_nd, 4: stage4_plain_nd}
GAUGED_ND = {1: stage1_gauged_nd, 2: stage2_gauged_nd, 3: stage3_gauged_nd, 4: stage4_gauged_nd}
