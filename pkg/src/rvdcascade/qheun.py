"""The q-Heun equation, its polynomial sector and its q -> 1 limit.

The equation (stage-4 eigenvalue problem) reads

    (x - h1 q^{1/2})(x - h2 q^{1/2}) g(x/q) + l3 l4 (x - l1 q^{-1/2})(x - l2 q^{-1/2}) g(qx)
      - {(l3 + l4) x^2 + E x + K} g(x) = 0,

with K = (l1 l2 l3 l4 h1 h2)^{1/2} (h3^{1/2} + h3^{-1/2}). All parameters are
kept as logarithms so that the half powers have a fixed branch.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (ConfluentSingularities, InvalidModulus, NoPolynomialSector,
                     ResonantExponents, SingularPoint)
from .laurent import LaurentPoly, LaurentRational
from .qcalc import ModulusPair
from .shiftops import ShiftOperator1D

_NAMES = ("h1", "h2", "h3", "l1", "l2", "l3", "l4")


@dataclass(frozen=True)
class QHeunParams:
    """Logarithmic store: ``log_q`` and ``logs[name]`` for h1, h2, h3, l1..l4."""

    log_q: complex
    logs: dict
    E: complex = 0.0

    def __post_init__(self):
        missing = set(_NAMES) - set(self.logs)
        if missing:
            raise ValueError(f"missing parameters {sorted(missing)}")
        # a few ulps of slack so that q = exp(i*theta) is rejected reliably
        if not (complex(self.log_q).real < -1e-12):
            raise InvalidModulus("need |q| < 1")

    @classmethod
    def from_values(cls, q, E=0.0, **vals) -> "QHeunParams":
        """Build from multiplicative values using principal logarithms."""
        return cls(cmath.log(q), {k: cmath.log(vals[k]) for k in _NAMES}, E)

    @classmethod
    def from_additive(cls, a_minus, h, l, E=0.0) -> "QHeunParams":
        """Parameters of the stage-4 x-form: h = e^{2 pi i h_n}, h3 -> h3/h4."""
        tp = 2j * math.pi
        logs = {"h1": tp * h[0], "h2": tp * h[1], "h3": tp * (h[2] - h[3]),
                "l1": tp * l[0], "l2": tp * l[1], "l3": tp * l[2], "l4": tp * l[3]}
        return cls(-2 * math.pi * a_minus, logs, E)

    def with_E(self, E) -> "QHeunParams":
        return QHeunParams(self.log_q, dict(self.logs), E)

    def value(self, name):
        return cmath.exp(self.logs[name])

    @property
    def q(self):
        return cmath.exp(self.log_q)

    @property
    def sqrt_q(self):
        return cmath.exp(self.log_q / 2)

    @property
    def K(self):
        lg = self.logs
        root = cmath.exp((lg["l1"] + lg["l2"] + lg["l3"] + lg["l4"] + lg["h1"] + lg["h2"]) / 2)
        return root * (cmath.exp(lg["h3"] / 2) + cmath.exp(-lg["h3"] / 2))

    @property
    def modulus(self) -> ModulusPair:
        return ModulusPair(math.inf, -self.log_q / (2 * math.pi))

    def values(self) -> dict:
        return {k: self.value(k) for k in _NAMES}


def qheun_polys(p: QHeunParams):
    """Backward, forward and zero-shift coefficients as polynomials in x (E included)."""
    v = p.values()
    sq = p.sqrt_q
    back = LaurentPoly.from_roots([v["h1"] * sq, v["h2"] * sq])
    fwd = LaurentPoly.from_roots([v["l1"] / sq, v["l2"] / sq], lead=v["l3"] * v["l4"])
    mid = LaurentPoly({2: -(v["l3"] + v["l4"]), 1: -p.E, 0: -p.K})
    return back, fwd, mid


def build_qheun(p: QHeunParams) -> ShiftOperator1D:
    back, fwd, mid = qheun_polys(p)
    return ShiftOperator1D(LaurentRational(back), LaurentRational(fwd), LaurentRational(mid), p.modulus)


def apply_to_polynomial(p: QHeunParams, g: LaurentPoly) -> LaurentPoly:
    """Exact action of the q-Heun operator on a Laurent polynomial."""
    back, fwd, mid = qheun_polys(p)
    q = p.q
    return back * g.subs_scale(1 / q) + fwd * g.subs_scale(q) + mid * g


# --- local exponents -------------------------------------------------------------

@dataclass
class LocalExponents:
    """Characteristic values lambda (trial solution x^{log lambda / log q})."""

    at_zero: tuple
    at_infinity: tuple
    rho_zero: tuple
    rho_infinity: tuple
    resonant_zero: bool
    resonant_infinity: bool
    quadratic_zero: tuple
    quadratic_infinity: tuple


def _resonant(l1, l2, log_q, tol=1e-9) -> bool:
    r = cmath.log(l1 / l2) / log_q
    n = round(r.real)
    return abs(l1 / l2 - cmath.exp(n * log_q)) < tol * max(1.0, abs(l1 / l2))


def local_exponents(p: QHeunParams, strict: bool = False) -> LocalExponents:
    """Dominant balances of x^rho at x = 0 and x = infinity.

    At 0: (l1 l2 l3 l4/q) lam^2 - K lam + h1 h2 q = 0, whose roots are
    q (h1 h2/(l1 l2 l3 l4))^{1/2} h3^{+-1/2}. At infinity:
    l3 l4 lam^2 - (l3 + l4) lam + 1 = 0 with roots 1/l3, 1/l4.
    """
    lg = p.logs
    base = p.log_q + (lg["h1"] + lg["h2"] - lg["l1"] - lg["l2"] - lg["l3"] - lg["l4"]) / 2
    log0 = (base + lg["h3"] / 2, base - lg["h3"] / 2)
    loginf = (-lg["l3"], -lg["l4"])
    v = p.values()
    quad0 = (v["l1"] * v["l2"] * v["l3"] * v["l4"] / p.q, -p.K, v["h1"] * v["h2"] * p.q)
    quadi = (v["l3"] * v["l4"], -(v["l3"] + v["l4"]), 1.0)
    lam0 = tuple(cmath.exp(x) for x in log0)
    lami = tuple(cmath.exp(x) for x in loginf)
    res0 = _resonant(*lam0, p.log_q)
    resi = _resonant(*lami, p.log_q)
    if strict and (res0 or resi):
        raise ResonantExponents("exponent difference lies in the q-lattice")
    return LocalExponents(lam0, lami, tuple(x / p.log_q for x in log0), tuple(x / p.log_q for x in loginf),
                          res0, resi, quad0, quadi)


# --- polynomial sector ---------------------------------------------------------------

@dataclass
class SpectrumResult:
    degree: int
    eigenvalues: list
    constraints: dict
    matrix: list = field(default_factory=list)


def _recurrence_coeffs(p: QHeunParams, d: int):
    v = p.values()
    q, sq = p.q, p.sqrt_q
    h1, h2, l1, l2, l3, l4 = (v[k] for k in ("h1", "h2", "l1", "l2", "l3", "l4"))
    alpha = lambda k: q**-k * (1 - l3 * q**k) * (1 - l4 * q**k)
    beta = lambda k: -(h1 + h2) * sq * q**-k - l3 * l4 * (l1 + l2) * q**k / sq
    gamma = lambda k: h1 * h2 * q ** (1 - k) + l1 * l2 * l3 * l4 * q ** (k - 1) - p.K
    return alpha, beta, gamma


def sector_constraints(p: QHeunParams, d: int) -> dict:
    """Leading (x^{d+2}) and trailing (x^0) coefficients that must vanish."""
    alpha, _, gamma = _recurrence_coeffs(p, d)
    return {"leading": alpha(d), "trailing": gamma(0)}


def recurrence_matrix(p: QHeunParams, d: int) -> np.ndarray:
    """Tridiagonal T with T c = E c for g = sum_k c_k x^k."""
    alpha, beta, gamma = _recurrence_coeffs(p, d)
    T = np.zeros((d + 1, d + 1), dtype=complex)
    for k in range(d + 1):
        T[k, k] = beta(k)
        if k >= 1:
            T[k, k - 1] = alpha(k - 1)
        if k + 1 <= d:
            T[k, k + 1] = gamma(k + 1)
    return T


def characteristic_value(p: QHeunParams, d: int, E) -> complex:
    """det(T - E) by the three-term recurrence."""
    alpha, beta, gamma = _recurrence_coeffs(p, d)
    prev, cur = 1.0, beta(0) - E
    for k in range(1, d + 1):
        prev, cur = cur, (beta(k) - E) * cur - alpha(k - 1) * gamma(k) * prev
    return cur


def characteristic_polynomial(p: QHeunParams, d: int) -> Polynomial:
    alpha, beta, gamma = _recurrence_coeffs(p, d)
    E = Polynomial([0, 1])
    prev, cur = Polynomial([1]), beta(0) - E
    for k in range(1, d + 1):
        prev, cur = cur, (beta(k) - E) * cur - alpha(k - 1) * gamma(k) * prev
    return cur


def polynomial_spectrum(p: QHeunParams, d: int, tol: float = 1e-10, polish: int = 3) -> SpectrumResult:
    """All E admitting a degree-d polynomial solution (E in ``p`` is ignored)."""
    if not (0 < abs(p.q) < 1) or abs(complex(p.q).imag) > 1e-14 or complex(p.q).real <= 0:
        raise InvalidModulus("spectra are supported for real q in (0, 1)")
    if d < 0:
        raise ValueError("degree must be non-negative")
    cons = sector_constraints(p, d)
    scale = max(1.0, abs(p.K))
    bad = [k for k, val in cons.items() if abs(val) > tol * (1.0 if k == "leading" else scale)]
    if bad:
        raise NoPolynomialSector(
            f"degree-{d} sector needs the {' and '.join(bad)} coefficient(s) to vanish: "
            + ", ".join(f"{k}={cons[k]:.3e}" for k in bad))
    roots = characteristic_polynomial(p, d).roots() if d > 0 else np.array([_recurrence_coeffs(p, d)[1](0)])
    out = []
    for E in np.atleast_1d(roots):
        E = complex(E)
        for _ in range(polish):
            h = 1e-7 * max(1.0, abs(E))
            f0 = characteristic_value(p, d, E)
            df = (characteristic_value(p, d, E + h) - characteristic_value(p, d, E - h)) / (2 * h)
            if df == 0:
                break
            E -= f0 / df
        out.append(E)
    out.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return SpectrumResult(d, out, {k: complex(v) for k, v in cons.items()},
                          recurrence_matrix(p, d).tolist())


def polynomial_solution(p: QHeunParams, d: int, E) -> LaurentPoly:
    """Monic degree-d polynomial in the kernel of T - E (via SVD null vector)."""
    T = recurrence_matrix(p, d) - E * np.eye(d + 1)
    _, _, vh = np.linalg.svd(T)
    c = vh[-1].conj()
    c = c / c[-1]
    return LaurentPoly({k: complex(ck) for k, ck in enumerate(c)})


# --- continuum limit ---------------------------------------------------------------

@dataclass(frozen=True)
class ContinuumParams:
    """Exponent parameters of the q = 1 + eps family."""

    t1: complex
    t2: complex
    h1: complex
    h2: complex
    h3: complex
    l1: complex
    l2: complex
    l3: complex
    l4: complex
    E_tilde: complex = 0.0
    eps: float = 1e-3

    @property
    def E1(self):
        return (self.l3 + self.l4) * (self.t1 + self.t2) + (self.l1 + self.h1) * self.t1 + (self.l2 + self.h2) * self.t2

    @property
    def l_tilde(self):
        return self.l1 + self.l2 + self.l3 + self.l4 - self.h1 - self.h2

    @property
    def B_tilde(self):
        # both t-terms carry a minus sign (symmetric in the labels 1 <-> 2)
        l34 = self.l3 + self.l4
        return (self.E_tilde
                - self.t1 / 2 * (self.h1**2 + (l34 + self.l1 - 1) ** 2 - 0.5)
                - self.t2 / 2 * (self.h2**2 + (l34 + self.l2 - 1) ** 2 - 0.5))

    def with_eps(self, eps) -> "ContinuumParams":
        return ContinuumParams(**{**self.__dict__, "eps": eps})

    def to_qheun(self) -> QHeunParams:
        """Exponential reparametrization h1 -> t1 q^{h1}, ..., E -> E(eps)."""
        lq = math.log1p(self.eps)
        lt1, lt2 = cmath.log(self.t1), cmath.log(self.t2)
        logs = {"h1": lt1 + self.h1 * lq, "h2": lt2 + self.h2 * lq, "h3": self.h3 * lq,
                "l1": lt1 + self.l1 * lq, "l2": lt2 + self.l2 * lq,
                "l3": self.l3 * lq, "l4": self.l4 * lq}
        q = 1 + self.eps
        E = -(2 * (self.t1 + self.t2) + (q - 1) * self.E1 + (q - 1) ** 2 * self.E_tilde)
        cls = QHeunParams if lq < 0 else _QHeunAnyQ
        return cls(lq, logs, E)


class _QHeunAnyQ(QHeunParams):
    """q-Heun parameters without the |q| < 1 restriction (continuum checks only)."""

    def __post_init__(self):
        missing = set(_NAMES) - set(self.logs)
        if missing:
            raise ValueError(f"missing parameters {sorted(missing)}")


def _as_poly(f) -> Polynomial:
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, LaurentPoly):
        if f.min_deg < 0:
            raise ValueError("test function must be a polynomial")
        return Polynomial([f.coeff(k) for k in range(f.max_deg + 1)])
    return Polynomial(np.asarray(f, dtype=complex))


def fuchs_coefficients(cp: ContinuumParams):
    """(P2, P1, P0) of the limiting Fuchsian operator P2 g'' + P1 g' + P0 g."""
    x = Polynomial([0, 1])
    t1, t2 = cp.t1, cp.t2
    lt = cp.l_tilde
    P2 = x**2 * (x - t1) * (x - t2)
    M = (1 + cp.h2 - cp.l2) * x * (x - t1) + (1 + cp.h1 - cp.l1) * x * (x - t2) + (lt - 1) * (x - t1) * (x - t2)
    P1 = M * x
    P0 = (cp.l3 * cp.l4 * x**2 + cp.B_tilde * x
          + t1 * t2 * (lt / 2 - 1 + cp.h3 / 2) * (lt / 2 - 1 - cp.h3 / 2))
    return P2, P1, P0


def fuchs_apply(cp: ContinuumParams, f, x) -> complex:
    g = _as_poly(f)
    P2, P1, P0 = fuchs_coefficients(cp)
    return P2(x) * g.deriv(2)(x) + P1(x) * g.deriv(1)(x) + P0(x) * g(x)


def qheun_lhs(cp: ContinuumParams, f, x) -> complex:
    """Left side of the exponentially reparametrized q-Heun equation, q = 1 + eps."""
    g = _as_poly(f)
    q = 1 + cp.eps
    qp = lambda a: q**a
    t1, t2 = cp.t1, cp.t2
    v = (x - t1 * qp(cp.h1) * q**0.5) * (x - t2 * qp(cp.h2) * q**0.5)
    w = qp(cp.l3 + cp.l4) * (x - t1 * qp(cp.l1) / q**0.5) * (x - t2 * qp(cp.l2) / q**0.5)
    K = t1 * t2 * qp((cp.l1 + cp.l2 + cp.l3 + cp.l4 + cp.h1 + cp.h2) / 2) * (qp(cp.h3 / 2) + qp(-cp.h3 / 2))
    u = -((qp(cp.l3) + qp(cp.l4)) * x**2
          - (2 * (t1 + t2) + (q - 1) * cp.E1 + (q - 1) ** 2 * cp.E_tilde) * x + K)
    return v * g(x / q) + w * g(q * x) + u * g(x)


def continuum_residual(cp: ContinuumParams, f, x) -> complex:
    """eps^{-2} * (q-Heun lhs) - (Fuchsian lhs), expected O(eps)."""
    for s in (0, cp.t1, cp.t2):
        if abs(x - s) < 1e-8 * max(1.0, abs(s)):
            raise SingularPoint(f"x={x} is a singular point")
    return qheun_lhs(cp, f, x) / cp.eps**2 - fuchs_apply(cp, f, x)


def continuum_slope(cp: ContinuumParams, f, x, eps_list=(1e-2, 3e-3, 1e-3)) -> float:
    res = [abs(continuum_residual(cp.with_eps(e), f, x)) for e in eps_list]
    return float(np.polyfit(np.log(eps_list), np.log(res), 1)[0])


# --- Riemann scheme and Heun form ------------------------------------------------------

@dataclass
class RiemannScheme:
    points: tuple
    exponents: tuple  # pairs, aligned with points
    indicial_roots: tuple
    max_mismatch: float


def _check_points(cp: ContinuumParams):
    if abs(cp.t1 - cp.t2) < 1e-12 * max(1.0, abs(cp.t1)):
        raise ConfluentSingularities("t1 and t2 coincide")
    if abs(cp.t1) < 1e-14 or abs(cp.t2) < 1e-14:
        raise ConfluentSingularities("t1 or t2 coincides with 0")


def _deflate(P: Polynomial, a, times: int) -> Polynomial:
    for _ in range(times):
        P, r = divmod(P, Polynomial([-a, 1]))
    return P


def _zero_order(P: Polynomial, a, tol=1e-9) -> int:
    n = 0
    while n < P.degree() and abs(P(a)) < tol * max(1.0, np.max(np.abs(P.coef))):
        P = _deflate(P, a, 1)
        n += 1
    return n


def _indicial_finite(P2, P1, P0, a):
    """Indicial roots at a finite regular singular point from exact deflation."""
    m = _zero_order(P2, a)
    S = _deflate(P2, a, m)
    # (x-a) P1/P2 = P1 (x-a)^{1-m}/S ; (x-a)^2 P0/P2 = P0 (x-a)^{2-m}/S
    p0 = (_deflate(P1, a, m - 1) if m >= 1 else P1 * Polynomial([-a, 1]))(a) / S(a)
    if m >= 2:
        q0 = _deflate(P0, a, m - 2)(a) / S(a)
    else:
        q0 = (P0 * Polynomial([-a, 1]) ** (2 - m))(a) / S(a)
    return tuple(np.roots([1, p0 - 1, q0]))


def _indicial_infinity(P2, P1, P0):
    """g ~ x^{-rho}: rho(rho+1) a2 - rho a1 + a0 = 0 with top coefficients."""
    a2 = P2.coef[4]
    a1 = P1.coef[3] if len(P1.coef) > 3 else 0
    a0 = P0.coef[2] if len(P0.coef) > 2 else 0
    return tuple(np.roots([a2, a2 - a1, a0]))


def _match_pairs(a, b) -> float:
    a, b = list(a), list(b)
    d1 = max(abs(a[0] - b[0]), abs(a[1] - b[1]))
    d2 = max(abs(a[0] - b[1]), abs(a[1] - b[0]))
    return float(min(d1, d2))


def riemann_scheme(cp: ContinuumParams, tol: float = 1e-10) -> RiemannScheme:
    _check_points(cp)
    lt, h3 = cp.l_tilde, cp.h3
    ex = ((1 - lt / 2 + h3 / 2, 1 - lt / 2 - h3 / 2),
          (0, cp.l1 - cp.h1),
          (0, cp.l2 - cp.h2),
          (cp.l3, cp.l4))
    P2, P1, P0 = fuchs_coefficients(cp)
    roots = (_indicial_finite(P2, P1, P0, 0), _indicial_finite(P2, P1, P0, cp.t1),
             _indicial_finite(P2, P1, P0, cp.t2), _indicial_infinity(P2, P1, P0))
    mism = max(_match_pairs(e, r) for e, r in zip(ex, roots))
    return RiemannScheme((0, cp.t1, cp.t2, "inf"), ex, roots, mism)


@dataclass(frozen=True)
class HeunParams:
    t: complex
    gamma: complex
    delta: complex
    eps_hat: complex
    alpha: complex
    beta: complex
    accessory: complex

    def fuchs_defect(self) -> complex:
        return self.gamma + self.delta + self.eps_hat - self.alpha - self.beta - 1


class TransportedOperator:
    """Fuchsian operator after g = x^rho G and x = t1 z, normalized to leading 1.

    Represented as y'' + (A1(z)/B(z)) y' + (A0(z)/B(z)) y with B = z(z-1)(z-t).
    """

    def __init__(self, cp: ContinuumParams, rho):
        P2, P1, P0 = fuchs_coefficients(cp)
        x = Polynomial([0, 1])
        # x^{-rho} L x^rho = P2 G'' + (2 rho P2/x + P1) G' + (rho(rho-1) P2/x^2 + rho P1/x + P0) G
        D = _deflate(P2, 0, 2)
        M = _deflate(P1, 0, 1)
        Q2 = x * D
        Q1 = 2 * rho * D + M
        Q0 = rho * (rho - 1) * D + rho * M + P0
        if abs(Q0(0)) > 1e-9 * max(1.0, np.max(np.abs(Q0.coef))):
            raise ValueError("rho is not an indicial root at 0")
        Q0 = _deflate(Q0, 0, 1)
        # now Q2 G'' + Q1 G' + Q0 G = 0 with Q2 = x D; substitute x = t1 z
        t1 = cp.t1
        sub = lambda P: Polynomial(P.coef * t1 ** np.arange(len(P.coef)))
        lead = Q2.coef[-1] * t1 ** (len(Q2.coef) - 1)
        # y'' + t1 Q1(t1 z)/Q2(t1 z) y' + t1^2 Q0(t1 z)/Q2(t1 z) y
        self.B = sub(Q2) / lead
        self.A1 = sub(Q1) * t1 / lead
        self.A0 = sub(Q0) * t1**2 / lead
        self.t = cp.t2 / cp.t1

    def apply(self, f, z) -> complex:
        g = _as_poly(f)
        B = self.B(z)
        return g.deriv(2)(z) + self.A1(z) / B * g.deriv(1)(z) + self.A0(z) / B * g(z)

    def residue(self, point) -> complex:
        """Residue of A1/B at a simple root of B."""
        return self.A1(point) / self.B.deriv(1)(point)


def heun_apply(hp: HeunParams, f, z) -> complex:
    g = _as_poly(f)
    t = hp.t
    coef1 = hp.gamma / z + hp.delta / (z - 1) + hp.eps_hat / (z - t)
    coef0 = (hp.alpha * hp.beta * z - hp.accessory) / (z * (z - 1) * (z - t))
    return g.deriv(2)(z) + coef1 * g.deriv(1)(z) + coef0 * g(z)


def heun_normal_form(cp: ContinuumParams, tol: float = 1e-10) -> HeunParams:
    """Heun parameters after g(x) = x^{1 - l~/2 - h3/2} y(x/t1)."""
    _check_points(cp)
    rho = 1 - cp.l_tilde / 2 - cp.h3 / 2
    op = TransportedOperator(cp, rho)
    t = op.t
    gamma, delta, eps_hat = op.residue(0), op.residue(1), op.residue(t)
    # A0 = alpha beta z - accessory
    ab = op.A0.coef[1] if len(op.A0.coef) > 1 else 0
    acc = -op.A0.coef[0]
    alpha, beta = cp.l3 + rho, cp.l4 + rho
    closed = {"gamma": 1 - cp.h3, "delta": 1 + cp.h1 - cp.l1, "eps_hat": 1 + cp.h2 - cp.l2}
    got = {"gamma": gamma, "delta": delta, "eps_hat": eps_hat}
    for k in closed:
        if abs(closed[k] - got[k]) > 1e-8 * max(1.0, abs(closed[k])):
            raise ArithmeticError(f"transported {k}={got[k]} disagrees with closed form {closed[k]}")
    if abs(ab - alpha * beta) > 1e-8 * max(1.0, abs(ab)):
        raise ArithmeticError("transported alpha*beta disagrees with the exponent at infinity")
    hp = HeunParams(t, closed["gamma"], closed["delta"], closed["eps_hat"], alpha, beta, acc)
    if abs(hp.fuchs_defect()) > 1e-12 * max(1.0, abs(alpha) + abs(beta)):
        raise ArithmeticError("Fuchs relation violated")
    return hp
