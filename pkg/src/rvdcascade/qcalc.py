"""Truncated theta-type products, q-Pochhammer symbols and exponential helpers.

Every scalar helper dispatches on its argument type: Python numbers go through
:mod:`cmath`, mpmath numbers stay in mpmath at the ambient working precision.
This lets the limit harness re-run the same formulas at raised precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath

from .errors import InvalidModulus, OutsideStrip, TruncationExceeded

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def is_mp(*xs) -> bool:
    return any(isinstance(x, _MP_TYPES) for x in xs)


def to_mp(x):
    """Promote a number (or nested tuple/list of numbers) to mpmath."""
    if isinstance(x, (tuple, list)):
        return type(x)(to_mp(v) for v in x)
    if isinstance(x, _MP_TYPES):
        return x
    if isinstance(x, complex):
        return mpmath.mpc(x.real, x.imag)
    return mpmath.mpf(x)


def to_complex(x) -> complex:
    return complex(x)


def cexp(x):
    return mpmath.exp(x) if is_mp(x) else cmath.exp(x)


def clog(x):
    return mpmath.log(x) if is_mp(x) else cmath.log(x)


def csqrt(x):
    return mpmath.sqrt(x) if is_mp(x) else cmath.sqrt(x)


def pi_of(x):
    return mpmath.pi if is_mp(x) else math.pi


def e2pi(x):
    """exp(2 pi i x)."""
    if is_mp(x):
        return mpmath.expjpi(2 * x)
    return cmath.exp(2j * math.pi * x)


def epi(x):
    """exp(pi i x)."""
    if is_mp(x):
        return mpmath.expjpi(x)
    return cmath.exp(1j * math.pi * x)


def exp_pi(x):
    """exp(pi x) (real exponential, complex argument allowed)."""
    if is_mp(x):
        return mpmath.exp(mpmath.pi * x)
    return cmath.exp(math.pi * x)


def _real(x):
    return x.real if hasattr(x, "real") else x


def _imag(x):
    return x.imag if hasattr(x, "imag") else 0


@dataclass(frozen=True)
class ModulusPair:
    """The two period parameters a_+ and a_-.

    ``a_plus`` may be ``math.inf`` for the trigonometric (degenerate) stages,
    where only a_- matters.
    """

    a_plus: complex
    a_minus: complex

    def __post_init__(self):
        for name in ("a_plus", "a_minus"):
            val = getattr(self, name)
            if not _real(val) > 0:
                raise InvalidModulus(f"{name} must have positive real part, got {val!r}")

    @property
    def q_plus(self):
        if _real(self.a_plus) == math.inf:
            return 0.0
        return cexp(-pi_of(self.a_plus) * self.a_plus)

    @property
    def q_minus(self):
        return cexp(-pi_of(self.a_minus) * self.a_minus)

    @property
    def q(self):
        """The multiplicative shift q = exp(-2 pi a_-)."""
        return cexp(-2 * pi_of(self.a_minus) * self.a_minus)

    @property
    def sqrt_q(self):
        """q^{1/2} = exp(-pi a_-), fixed by the additive store."""
        return cexp(-pi_of(self.a_minus) * self.a_minus)

    def period(self, sign: str):
        if sign == "+":
            return self.a_plus
        if sign == "-":
            return self.a_minus
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")

    def to_mp(self) -> "ModulusPair":
        ap = self.a_plus if _real(self.a_plus) == math.inf else to_mp(self.a_plus)
        return ModulusPair(ap, to_mp(self.a_minus))

    @classmethod
    def from_q_plus(cls, q_plus: float, a_minus) -> "ModulusPair":
        return cls(-math.log(q_plus) / math.pi, a_minus)


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-17
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")

    @classmethod
    def for_precision(cls, dps: int) -> "TruncationPolicy":
        return cls(tol=10.0 ** (-(dps + 2)))


DEFAULT_POLICY = TruncationPolicy()


def _policy_for(x, policy):
    if policy is not None:
        return policy
    if is_mp(x):
        return TruncationPolicy.for_precision(mpmath.mp.dps)
    return DEFAULT_POLICY


def r_pm(z, modulus: ModulusPair, sign: str = "+", policy: TruncationPolicy | None = None):
    """Truncated product R_{+/-}(z) = prod_k (1 - q^{2k-1} e^{2 pi i z})(1 - q^{2k-1} e^{-2 pi i z}).

    ``q`` is ``exp(-pi a_sign)``. The product is cut once the remaining tail
    sum ``sum_{k>K} 2|q|^{2k-1} e^{2 pi |Im z|}`` drops below ``policy.tol``.
    """
    a = modulus.period(sign)
    if _real(a) == math.inf:
        return 1.0 if not is_mp(z) else mpmath.mpf(1)
    policy = _policy_for(z, policy)
    width = 2 * max(abs(_real(modulus.a_plus)) if _real(modulus.a_plus) != math.inf else 0,
                    abs(_real(modulus.a_minus)))
    if abs(_imag(z)) > width + 1e-12:
        raise OutsideStrip(f"|Im z| = {abs(_imag(z))} exceeds strip half-width {width}")
    q = cexp(-pi_of(a) * a)
    aq = abs(q)
    if aq == 0:
        return 1.0 if not is_mp(z) else mpmath.mpf(1)
    w = e2pi(z)
    wi = 1 / w
    growth = math.exp(2 * math.pi * abs(float(_imag(z))))
    aq_f = float(aq)
    q2 = q * q
    qk = q  # q^{2k-1}
    prod = 1
    for k in range(1, policy.max_terms + 1):
        prod *= (1 - qk * w) * (1 - qk * wi)
        qk *= q2
        # tail estimate for k' > k
        tail = 2 * aq_f ** (2 * k + 1) * growth / (1 - aq_f * aq_f)
        if tail < policy.tol:
            return prod
    raise TruncationExceeded(f"r_pm did not converge within {policy.max_terms} factors")


def q_pochhammer(a, q, policy: TruncationPolicy | None = None):
    """(a; q)_infinity = prod_{k>=0} (1 - a q^k), truncated at ``policy.tol``."""
    aq = float(abs(q))
    if not aq < 1:
        raise InvalidModulus(f"|q| must be < 1, got {aq}")
    policy = _policy_for(a if is_mp(a) else q, policy)
    aa = float(abs(a))
    if aa == 0:
        return 1.0 if not is_mp(a, q) else mpmath.mpf(1)
    prod = 1
    qk = 1
    for k in range(policy.max_terms):
        prod *= 1 - a * qk
        qk *= q
        tail = aa * aq ** (k + 1) / (1 - aq)
        if tail < policy.tol:
            return prod
    raise TruncationExceeded(f"q_pochhammer did not converge within {policy.max_terms} factors")
