"""The full (elliptic-level) Ruijsenaars-van Diejen operator.

Coefficients are theta-type products and are therefore built as sampled
(black-box) coefficients. For ``N = 1`` the result is a
:class:`~rvdcascade.shiftops.ShiftOperator1D`, otherwise a
:class:`~rvdcascade.shiftops.ShiftOperatorND`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

from .errors import MuDenominatorZero
from .qcalc import ModulusPair, TruncationPolicy, cexp, epi, pi_of, r_pm, to_mp
from .shiftops import Sampled, ShiftOperator1D, ShiftOperatorND


@dataclass(frozen=True)
class RvDParams:
    modulus: ModulusPair
    h: tuple
    mu: complex
    N: int = 1
    policy: TruncationPolicy | None = None

    def __post_init__(self):
        if len(self.h) != 8:
            raise ValueError(f"need 8 parameters h_n, got {len(self.h)}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "h", tuple(self.h))

    def to_mp(self) -> "RvDParams":
        return RvDParams(self.modulus.to_mp(), to_mp(self.h), to_mp(self.mu), self.N, self.policy)


class _RvDPieces:
    """Shared ingredients of the one- and N-variable operators."""

    def __init__(self, p: RvDParams):
        self.p = p
        m = p.modulus
        ap, am = m.a_plus, m.a_minus
        self.ap, self.am = ap, am
        R = self.R
        h = p.h
        self.omega = (0, 0.5, 0.5j * ap, -0.5 - 0.5j * ap)
        e2 = cexp(-2 * pi_of(ap) * ap)
        prod = lambda xs: _prod(xs)
        self.pt = (
            prod(R(hn) for hn in h),
            prod(R(hn - 0.5) for hn in h),
            e2 * prod(epi(-hn) * R(hn - 0.5j * ap) for hn in h),
            e2 * prod(epi(hn) * R(hn + 0.5 + 0.5j * ap) for hn in h),
        )
        self.c = 0.5j * (ap + am)
        den = 2 * R(p.mu - 0.5j * ap) * R(p.mu - 1j * am - 0.5j * ap)
        scale = 2 * abs(R(p.mu + 0.25)) + 1e-300
        if abs(den) < 1e-12 * scale:
            raise MuDenominatorZero(f"U-term denominator vanishes at mu={p.mu}")
        self.den = den
        self.E_omega = tuple(self.E(t, self.omega[t]) for t in range(4))

    def R(self, z):
        return r_pm(z, self.p.modulus, "+", self.p.policy)

    def E(self, t, z):
        R, mu, c, w = self.R, self.p.mu, self.c, self.omega[t]
        return R(z + mu - c - w) * R(z - mu + c - w) / (R(z - c - w) * R(z + c - w))

    def V_single(self, z):
        R, am, ap = self.R, self.am, self.ap
        num = _prod(R(z - hn - 0.5j * am) for hn in self.p.h)
        return num / (R(2 * z + 0.5j * ap) * R(2 * z - 1j * am + 0.5j * ap))

    def cross(self, zj, zk):
        R, mu, ap = self.R, self.p.mu, self.ap
        return (R(zj - zk - mu + 0.5j * ap) * R(zj + zk - mu + 0.5j * ap)
                / (R(zj - zk + 0.5j * ap) * R(zj + zk + 0.5j * ap)))

    def U_single(self, z):
        return sum(self.pt[t] * (self.E(t, z) - self.E_omega[t]) for t in range(4)) / self.den

    def V_nd(self, j, zv):
        out = self.V_single(zv[j])
        for k, zk in enumerate(zv):
            if k != j:
                out *= self.cross(zv[j], zk)
        return out

    def U_nd(self, zv):
        N = len(zv)
        tot = 0
        for t in range(4):
            tot += self.pt[t] * (_prod(self.E(t, zj) for zj in zv) - self.E_omega[t] ** N)
        return tot / self.den


def _prod(xs):
    out = 1
    for x in xs:
        out = out * x
    return out


def build_rvd(params: RvDParams):
    """Build A_+(h; z) as a sampled shift operator."""
    pieces = _RvDPieces(params)
    if params.N == 1:
        return ShiftOperator1D(
            Sampled(pieces.V_single),
            Sampled(lambda z: pieces.V_single(-z)),
            Sampled(pieces.U_single),
            params.modulus,
        )
    neg = lambda zv: tuple(-zk for zk in zv)
    vs = tuple(partial(lambda j, zv: pieces.V_nd(j, zv), j) for j in range(params.N))
    ws = tuple(partial(lambda j, zv: pieces.V_nd(j, neg(zv)), j) for j in range(params.N))
    return ShiftOperatorND(vs, ws, pieces.U_nd, params.modulus, params.N)
