"""Second-order shift operators in one and N variables.

A one-variable operator acts as

    (A f)(z) = v(z) f(z - i a_-) + w(z) f(z + i a_-) + u(z) f(z).

With ``x = exp(2 pi i z)`` and ``q = exp(-2 pi a_-)`` the two shifts are
``g(x/q)`` and ``g(q x)``, so an operator with :class:`Exact` coefficients is
the same object in the z-form and the x-form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath

from .errors import CoefficientPole, DimensionMismatch, PoleAtShift, UnsupportedGauge
from .laurent import LaurentPoly, LaurentRational, as_rational
from .qcalc import ModulusPair, TruncationPolicy, e2pi, epi, exp_pi, q_pochhammer, r_pm

POLE_TOL = 1e-8


class Coefficient:
    """A coefficient function of z (abstract)."""

    def __call__(self, z):
        raise NotImplementedError


@dataclass(frozen=True)
class Exact(Coefficient):
    """Rational function of ``w = exp(2 pi i z)``."""

    rational: LaurentRational

    def __call__(self, z):
        return self.rational.eval(e2pi(z), POLE_TOL)

    def at_x(self, x):
        return self.rational.eval(x, POLE_TOL)


@dataclass(frozen=True)
class Sampled(Coefficient):
    """Black-box coefficient ``z -> value``."""

    fn: Callable

    def __call__(self, z):
        return self.fn(z)


def as_coefficient(c) -> Coefficient:
    if isinstance(c, Coefficient):
        return c
    if isinstance(c, (LaurentRational, LaurentPoly)):
        return Exact(as_rational(c))
    if callable(c):
        return Sampled(c)
    return Exact(LaurentRational.const(c))


def _ia(a):
    return 1j * a


@dataclass(frozen=True)
class ShiftOperator1D:
    v: Coefficient
    w: Coefficient
    u: Coefficient
    modulus: ModulusPair

    def __post_init__(self):
        object.__setattr__(self, "v", as_coefficient(self.v))
        object.__setattr__(self, "w", as_coefficient(self.w))
        object.__setattr__(self, "u", as_coefficient(self.u))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Exact) for c in (self.v, self.w, self.u))

    @property
    def rationals(self) -> tuple[LaurentRational, LaurentRational, LaurentRational]:
        if not self.is_exact:
            raise TypeError("operator has sampled coefficients")
        return self.v.rational, self.w.rational, self.u.rational

    def coefficients_at(self, z):
        return self.v(z), self.w(z), self.u(z)

    def scaled(self, c) -> "ShiftOperator1D":
        return ShiftOperator1D(*(_scale_coef(k, c) for k in (self.v, self.w, self.u)), self.modulus)

    def add_constant(self, c) -> "ShiftOperator1D":
        return ShiftOperator1D(self.v, self.w, _add_coef(self.u, c), self.modulus)

    def sampled(self) -> "ShiftOperator1D":
        """Same operator with every coefficient wrapped as a black box."""
        return ShiftOperator1D(Sampled(self.v), Sampled(self.w), Sampled(self.u), self.modulus)

    def with_modulus(self, modulus: ModulusPair) -> "ShiftOperator1D":
        return ShiftOperator1D(self.v, self.w, self.u, modulus)


def _scale_coef(c: Coefficient, s) -> Coefficient:
    if isinstance(c, Exact):
        return Exact(c.rational * s)
    return Sampled(lambda z, c=c: s * c(z))


def _add_coef(c: Coefficient, s) -> Coefficient:
    if isinstance(c, Exact):
        return Exact(c.rational + s)
    return Sampled(lambda z, c=c: c(z) + s)


def _mul_monomial(c: Coefficient, k: int, s) -> Coefficient:
    """Multiply a coefficient by ``s * w^k``."""
    if isinstance(c, Exact):
        return Exact(c.rational * LaurentRational.monomial(k, s))
    return Sampled(lambda z, c=c: c(z) * s * e2pi(k * z))


def _mul_rational(c: Coefficient, r: LaurentRational) -> Coefficient:
    if isinstance(c, Exact):
        return Exact(c.rational * r)
    return Sampled(lambda z, c=c: c(z) * r.eval(e2pi(z), POLE_TOL))


def apply(op: ShiftOperator1D, f: Callable, z):
    ia = _ia(op.modulus.a_minus)
    v, w, u = op.coefficients_at(z)
    return v * f(z - ia) + w * f(z + ia) + u * f(z)


def _apply_with(coefs, f, z, ia):
    v, w, u = coefs
    return v * f(z - ia) + w * f(z + ia) + u * f(z)


@dataclass(frozen=True)
class ShiftOperatorND:
    """N-variable operator sum_j [v_j f(z - i a e_j) + w_j f(z + i a e_j)] + u f."""

    v: tuple
    w: tuple
    u: Callable
    modulus: ModulusPair
    N: int

    def __post_init__(self):
        if len(self.v) != self.N or len(self.w) != self.N:
            raise DimensionMismatch("need N forward and N backward coefficients")

    @classmethod
    def from_1d(cls, op: ShiftOperator1D) -> "ShiftOperatorND":
        return cls((lambda zv: op.v(zv[0]),), (lambda zv: op.w(zv[0]),),
                   lambda zv: op.u(zv[0]), op.modulus, 1)

    def coefficients_at(self, zv):
        return tuple(c(zv) for c in self.v), tuple(c(zv) for c in self.w), self.u(zv)

    def scaled(self, s) -> "ShiftOperatorND":
        return ShiftOperatorND(tuple((lambda zv, c=c: s * c(zv)) for c in self.v),
                               tuple((lambda zv, c=c: s * c(zv)) for c in self.w),
                               lambda zv: s * self.u(zv), self.modulus, self.N)

    def add_constant(self, s) -> "ShiftOperatorND":
        return ShiftOperatorND(self.v, self.w, lambda zv: self.u(zv) + s, self.modulus, self.N)


def _shift_vec(zv, j, d):
    return tuple(zk + d if k == j else zk for k, zk in enumerate(zv))


def _apply_nd_with(coefs, f, zv, ia):
    vs, ws, u = coefs
    out = u * f(zv)
    for j in range(len(zv)):
        out += vs[j] * f(_shift_vec(zv, j, -ia)) + ws[j] * f(_shift_vec(zv, j, ia))
    return out


def apply_nd(op: ShiftOperatorND, f: Callable, zv):
    zv = tuple(zv)
    if len(zv) != op.N:
        raise DimensionMismatch(f"operator has N={op.N}, point has {len(zv)} coordinates")
    return _apply_nd_with(op.coefficients_at(zv), f, zv, _ia(op.modulus.a_minus))


# --- gauges -----------------------------------------------------------------

@dataclass(frozen=True)
class GaugeSpec:
    """Gauge factor ``R_-(z)^m * exp(pi i n z)``."""

    m: int = 0
    n: int = 0

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise UnsupportedGauge("only integer powers of R_- and exp(pi i z) are quasi-periodic gauges")

    def __mul__(self, other: "GaugeSpec") -> "GaugeSpec":
        return GaugeSpec(self.m + other.m, self.n + other.n)

    def __call__(self, z, modulus: ModulusPair, policy: TruncationPolicy | None = None):
        return r_pm(z, modulus, "-", policy) ** self.m * epi(self.n * z)


def conjugate_monomial(op, gauge: GaugeSpec | tuple):
    """Return g^{-1} o op o g for g = R_-(z)^m exp(pi i n z).

    Quasi-periodicity R_-(z -/+ i a_-) = -e^{pi a_-} e^{+/- 2 pi i z} R_-(z) turns
    the conjugation into monomial factors on the shifted coefficients; the
    zero-shift term is unchanged.
    """
    if not isinstance(gauge, GaugeSpec):
        if not (isinstance(gauge, tuple) and len(gauge) == 2):
            raise UnsupportedGauge(f"unsupported gauge {gauge!r}")
        gauge = GaugeSpec(*gauge)
    m, n = gauge.m, gauge.n
    if m == 0 and n == 0:
        return op
    ea = exp_pi(op.modulus.a_minus)
    # g(z - ia)/g(z) = (-e^{pi a} w)^m e^{pi n a};  g(z + ia)/g(z) = (-e^{pi a}/w)^m e^{-pi n a}
    sv = (-ea) ** m * ea**n
    sw = (-ea) ** m * ea ** (-n)
    if isinstance(op, ShiftOperator1D):
        return ShiftOperator1D(_mul_monomial(op.v, m, sv), _mul_monomial(op.w, -m, sw), op.u, op.modulus)
    if isinstance(op, ShiftOperatorND):
        vs = tuple((lambda zv, c=c, j=j: c(zv) * sv * e2pi(m * zv[j])) for j, c in enumerate(op.v))
        ws = tuple((lambda zv, c=c, j=j: c(zv) * sw * e2pi(-m * zv[j])) for j, c in enumerate(op.w))
        return ShiftOperatorND(vs, ws, op.u, op.modulus, op.N)
    raise TypeError(f"cannot conjugate {type(op).__name__}")


def conjugate_function(op: ShiftOperator1D, g: Callable) -> ShiftOperator1D:
    """Numerical conjugation g^{-1} o op o g with g evaluated pointwise."""
    ia = _ia(op.modulus.a_minus)
    return ShiftOperator1D(
        Sampled(lambda z: op.v(z) * g(z - ia) / g(z)),
        Sampled(lambda z: op.w(z) * g(z + ia) / g(z)),
        op.u, op.modulus)


def conjugate_ratio(op: ShiftOperator1D, fwd_ratio, q=None) -> ShiftOperator1D:
    """Return g^{-1} o op o g for a gauge with ``g(qx)/g(x) = r(x)`` rational.

    Then ``g(x/q)/g(x) = 1/r(x/q)``.
    """
    r = as_rational(fwd_ratio)
    q = op.modulus.q if q is None else q
    back = 1 / r.subs_scale(1 / q)
    return ShiftOperator1D(_mul_rational(op.v, back), _mul_rational(op.w, r), op.u, op.modulus)


def conjugate_power(op: ShiftOperator1D, q_to_s) -> ShiftOperator1D:
    """Conjugation by ``x^s`` given the number ``q^s`` (fixes the branch)."""
    return ShiftOperator1D(_scale_coef(op.v, 1 / q_to_s), _scale_coef(op.w, q_to_s), op.u, op.modulus)


def conjugate_pochhammer(op: ShiftOperator1D, a) -> ShiftOperator1D:
    """Return v o op o v^{-1} for v(x) = (a/x; q)_infinity.

    Telescoping gives v(x)/v(x/q) = 1 - a/x and v(x)/v(qx) = x/(x - a/q).
    """
    if a == 0:
        return op
    q = op.modulus.q
    back = LaurentRational(LaurentPoly({0: 1, -1: -a}))
    fwd = LaurentRational(LaurentPoly({1: 1}), LaurentPoly({1: 1, 0: -a / q}))
    return ShiftOperator1D(_mul_rational(op.v, back), _mul_rational(op.w, fwd), op.u, op.modulus)


def pochhammer_gauge_ratios(x, a, q, policy: TruncationPolicy | None = None):
    """Numerical (v(x)/v(x/q), v(x)/v(qx)) from truncated products."""
    v0 = q_pochhammer(a / x, q, policy)
    vb = q_pochhammer(a * q / x, q, policy)
    vf = q_pochhammer(a / (q * x), q, policy)
    if vb == 0 or vf == 0:
        raise PoleAtShift(f"telescoped factor vanishes at x={x}")
    return v0 / vb, v0 / vf


# --- combinators --------------------------------------------------------------

def shifted(op, dz, scale=1):
    """Coefficients c(z) -> scale * c(z + dz); shifts of f are untouched.

    For the one-variable exact case this is the substitution w -> w e^{2 pi i dz}.
    For N variables ``dz`` is added to every coordinate.
    """
    if isinstance(op, ShiftOperator1D):
        if op.is_exact:
            s = e2pi(dz)
            return ShiftOperator1D(*(Exact(c.rational.subs_scale(s) * scale)
                                     for c in (op.v, op.w, op.u)), op.modulus)
        return ShiftOperator1D(*(Sampled(lambda z, c=c: scale * c(z + dz))
                                 for c in (op.v, op.w, op.u)), op.modulus)
    if isinstance(op, ShiftOperatorND):
        mv = lambda zv: tuple(zk + dz for zk in zv)
        return ShiftOperatorND(tuple((lambda zv, c=c: scale * c(mv(zv))) for c in op.v),
                               tuple((lambda zv, c=c: scale * c(mv(zv))) for c in op.w),
                               lambda zv: scale * op.u(mv(zv)), op.modulus, op.N)
    raise TypeError(f"cannot shift {type(op).__name__}")


# --- distance -------------------------------------------------------------------

@dataclass(frozen=True)
class BasisFunction:
    label: str
    fn: Callable

    def __call__(self, z):
        return self.fn(z)


def standard_basis(kmax: int = 3) -> list[BasisFunction]:
    return [BasisFunction(f"exp(2 pi i {k} z)", lambda z, k=k: e2pi(k * z)) for k in range(-kmax, kmax + 1)]


def symmetric_basis_2() -> list[BasisFunction]:
    return [
        BasisFunction("1", lambda zv: 1),
        BasisFunction("exp(2 pi i z1) + exp(2 pi i z2)", lambda zv: e2pi(zv[0]) + e2pi(zv[1])),
        BasisFunction("exp(2 pi i (z1 + z2))", lambda zv: e2pi(zv[0] + zv[1])),
    ]


def distance(op1, op2, basis: Sequence, samples: Sequence) -> float:
    """max over basis x samples of |A1 f - A2 f| / (1 + |A2 f|)."""
    if not basis or not samples:
        raise ValueError("basis and samples must be nonempty")
    nd = isinstance(op1, ShiftOperatorND)
    if nd != isinstance(op2, ShiftOperatorND):
        raise DimensionMismatch("cannot compare one- and N-variable operators")
    ia = _ia(op1.modulus.a_minus)
    ia2 = _ia(op2.modulus.a_minus)
    best = 0.0
    for z in samples:
        c1 = op1.coefficients_at(z)
        c2 = op2.coefficients_at(z)
        for f in basis:
            if nd:
                a1 = _apply_nd_with(c1, f, tuple(z), ia)
                a2 = _apply_nd_with(c2, f, tuple(z), ia2)
            else:
                a1 = _apply_with(c1, f, z, ia)
                a2 = _apply_with(c2, f, z, ia2)
            d = abs(a1 - a2) / (1 + abs(a2))
            best = max(best, float(d))
    return best


def coefficient_difference(op1: ShiftOperator1D, op2: ShiftOperator1D) -> float:
    """Largest relative cross-multiplied coefficient difference of exact operators."""
    return max(a.difference(b) for a, b in zip(op1.rationals, op2.rationals))


def strip_samples(n: int, rng, im: float = 0.1) -> list[complex]:
    """Sample points on Im z = im with real parts in [-1/2, 1/2)."""
    return [complex(x, im) for x in rng.uniform(-0.5, 0.5, n)]
