"""Laurent polynomials and rational functions in a single variable.

The variable is usually ``w = exp(2 pi i z)`` (equivalently ``x``). Coefficients
are stored sparsely as ``{exponent: coefficient}`` and may be Python or mpmath
complex numbers.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .errors import CoefficientPole


def _is_zero(c) -> bool:
    return c == 0


class LaurentPoly:
    """Sparse Laurent polynomial ``sum_k c_k w^k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        self.coeffs = {int(k): c for k, c in (coeffs or {}).items() if not _is_zero(c)}

    # constructors
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def linear(cls, c0, c1, k: int = 1) -> "LaurentPoly":
        """``c0 + c1 w^k``."""
        return cls({0: c0}) + cls({k: c1})

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "LaurentPoly":
        """``lead * prod (w - r)``."""
        p = cls.const(lead)
        for r in roots:
            p = p * cls({1: 1, 0: -r})
        return p

    # structure
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_deg(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_deg(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def coeff(self, k: int):
        return self.coeffs.get(k, 0)

    def lead(self):
        return self.coeffs[self.max_deg] if self.coeffs else 0

    def scale_norm(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    # arithmetic
    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, complex] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need LaurentRational")
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``w^k``."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def subs_scale(self, s) -> "LaurentPoly":
        """Return ``p(s w)``."""
        return LaurentPoly({k: c * s**k for k, c in self.coeffs.items()})

    def subs_inverse(self) -> "LaurentPoly":
        """Return ``p(1/w)``."""
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def __call__(self, w):
        if not self.coeffs:
            return 0 * w
        lo, hi = self.min_deg, self.max_deg
        # Horner on the ordinary polynomial part, then the monomial factor
        acc = 0
        for k in range(hi, lo - 1, -1):
            acc = acc * w + self.coeffs.get(k, 0)
        return acc * w**lo

    def magnitude(self, w) -> float:
        """sum |c_k| |w|^k, the scale used for pole detection."""
        aw = abs(w)
        return float(sum(abs(c) * aw**k for k, c in self.coeffs.items()))

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly({k: fn(c) for k, c in self.coeffs.items()})

    def chop(self, tol: float) -> "LaurentPoly":
        """Drop coefficients smaller than ``tol`` times the largest one."""
        s = self.scale_norm()
        return LaurentPoly({k: c for k, c in self.coeffs.items() if abs(c) > tol * s})

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Polynomial long division, treating both as ordinary polynomials in w
        after removing their lowest powers (which are restored on the quotient)."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        a_shift, b_shift = self.min_deg, other.min_deg
        a = self.shift(-a_shift)
        b = other.shift(-b_shift)
        rem = dict(a.coeffs)
        db, lb = b.max_deg, b.lead()
        quot: dict[int, complex] = {}
        while rem:
            dr = max(rem)
            if dr < db:
                break
            c = rem.pop(dr) / lb
            quot[dr - db] = c
            for k, bc in b.coeffs.items():
                if k == db:
                    continue
                kk = k + dr - db
                rem[kk] = rem.get(kk, 0) - c * bc
        return (LaurentPoly(quot).shift(a_shift - b_shift),
                LaurentPoly(rem).shift(a_shift - b_shift))

    def close_to(self, other: "LaurentPoly", tol: float = 1e-12) -> bool:
        return max_coeff_diff(self, other) <= tol

    def __repr__(self):
        terms = " + ".join(f"({c})w^{k}" for k, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({terms or '0'})"


def _as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, LaurentRational):
        return NotImplemented
    try:
        complex(x)
    except (TypeError, ValueError):
        return NotImplemented
    return LaurentPoly.const(x)


def max_coeff_diff(p: LaurentPoly, q: LaurentPoly, relative: bool = False) -> float:
    keys = set(p.coeffs) | set(q.coeffs)
    if not keys:
        return 0.0
    d = max(abs(p.coeff(k) - q.coeff(k)) for k in keys)
    if relative:
        d /= max(1.0, p.scale_norm(), q.scale_norm())
    return float(d)


def poly_gcd(a: LaurentPoly, b: LaurentPoly, tol: float = 1e-10) -> LaurentPoly:
    """Numerical Euclid gcd of ordinary polynomial parts, made monic."""
    a = a.shift(-a.min_deg)
    b = b.shift(-b.min_deg)
    scale = max(a.scale_norm(), b.scale_norm(), 1e-300)
    while not b.chop(tol).is_zero() and b.chop(tol).scale_norm() > tol * scale:
        b = b.chop(tol)
        _, r = a.divmod(b)
        a, b = b, r.chop(tol)
        if not b.is_zero():
            b = b.shift(-b.min_deg)
    a = a.shift(-a.min_deg)
    return a * (1 / a.lead())


class LaurentRational:
    """Quotient ``num/den`` of Laurent polynomials, kept in canonical form:
    the denominator has lowest exponent 0 and leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num) if not isinstance(num, LaurentPoly) else num
        den = LaurentPoly.const(1) if den is None else (_as_poly(den) if not isinstance(den, LaurentPoly) else den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        k = den.min_deg
        lead = den.shift(-k).lead()
        self.num = num.shift(-k) * (1 / lead)
        self.den = den.shift(-k) * (1 / lead)

    @classmethod
    def const(cls, c) -> "LaurentRational":
        return cls(LaurentPoly.const(c))

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentRational":
        return cls(LaurentPoly.monomial(k, c))

    def is_polynomial(self) -> bool:
        return self.den.max_deg == 0

    def __add__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.coeffs == other.den.coeffs:
            return LaurentRational(self.num + other.num, self.den)
        return LaurentRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentRational(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rat(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return LaurentRational(self.num**n, self.den**n)
        return LaurentRational(self.den**-n, self.num**-n)

    def subs_scale(self, s) -> "LaurentRational":
        return LaurentRational(self.num.subs_scale(s), self.den.subs_scale(s))

    def subs_inverse(self) -> "LaurentRational":
        return LaurentRational(self.num.subs_inverse(), self.den.subs_inverse())

    def eval(self, w, pole_tol: float = 1e-8):
        d = self.den(w)
        if abs(d) < pole_tol * max(self.den.magnitude(w), 1e-300):
            raise CoefficientPole(f"denominator vanishes at w={w}")
        return self.num(w) / d

    __call__ = eval

    def cancel(self, tol: float = 1e-10) -> "LaurentRational":
        """Remove common polynomial factors (numerical gcd)."""
        if self.is_polynomial() or self.num.is_zero():
            return self
        g = poly_gcd(self.num, self.den, tol)
        if g.max_deg == 0:
            return self
        n, rn = self.num.divmod(g)
        d, rd = self.den.divmod(g)
        return LaurentRational(n, d)

    def to_poly(self, tol: float = 1e-10) -> LaurentPoly:
        """Return the numerator/denominator quotient, requiring exact division."""
        r = self.cancel(tol)
        q, rem = r.num.divmod(r.den)
        if rem.scale_norm() > tol * max(1.0, r.num.scale_norm()):
            raise ValueError("rational function is not a Laurent polynomial")
        return q

    def difference(self, other: "LaurentRational") -> float:
        """Max coefficient of num1*den2 - num2*den1, relative to the scale of the products."""
        other = _as_rat(other)
        a = self.num * other.den
        b = other.num * self.den
        return max_coeff_diff(a, b, relative=True)

    def close_to(self, other, tol: float = 1e-12) -> bool:
        return self.difference(other) <= tol

    def __repr__(self):
        return f"LaurentRational({self.num!r} / {self.den!r})"


def _as_rat(x):
    if isinstance(x, LaurentRational):
        return x
    if isinstance(x, LaurentPoly):
        return LaurentRational(x)
    p = _as_poly(x)
    if p is NotImplemented:
        return NotImplemented
    return LaurentRational(p)


def as_rational(x) -> LaurentRational:
    r = _as_rat(x)
    if r is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to LaurentRational")
    return r
