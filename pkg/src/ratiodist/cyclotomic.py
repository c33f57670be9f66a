"""Exact arithmetic in Z[zeta_p] scaled by powers of q.

Every character sum in the package lives here: values are stored as a
primitive integer vector in the power basis 1, zeta, ..., zeta**(p-2)
(reduced through 1 + zeta + ... + zeta**(p-1) = 0) together with a scale
num / q**qexp.  The canonical form makes equality an exact tuple
comparison; no identity is ever checked in floating point.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

from .field import check_cap

__all__ = [
    "CycNum",
    "chi",
    "complex_embed",
    "completed_square_sum",
    "gauss_sum",
    "gauss_sum_embedding",
    "orthogonality_sum",
    "verify_gauss_square",
]


class CycNum:
    """An element of (1/q**k) * Z[zeta_p] in canonical form."""

    __slots__ = ("p", "q", "coeffs", "num", "qexp")

    def __init__(self, p, q, coeffs, num=1, qexp=0):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != p - 1:
            raise ValueError(f"need {p - 1} power-basis coefficients, got {len(coeffs)}")
        num = int(num)
        qexp = int(qexp)
        if qexp < 0:
            raise ValueError("the scale denominator exponent must be nonnegative")
        g = math.gcd(*coeffs) if any(coeffs) else 0
        if g == 0 or num == 0:
            coeffs = [0] * (p - 1)
            num, qexp = 0, 0
        else:
            if g > 1:
                coeffs = [c // g for c in coeffs]
                num *= g
            if num < 0:
                num = -num
                coeffs = [-c for c in coeffs]
            while qexp > 0 and num % q == 0:
                num //= q
                qexp -= 1
        self.p = p
        self.q = q
        self.coeffs = tuple(coeffs)
        self.num = num
        self.qexp = qexp

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p, q):
        return cls(p, q, [0] * (p - 1))

    @classmethod
    def one(cls, p, q):
        return cls.rational(p, q, 1)

    @classmethod
    def rational(cls, p, q, num, qexp=0):
        """The rational number num / q**qexp."""
        return cls(p, q, [1] + [0] * (p - 2), num, qexp)

    @classmethod
    def zeta_power(cls, p, q, j):
        """zeta**j for any integer j, reduced into the power basis."""
        counts = [0] * p
        counts[j % p] = 1
        return cls.from_counts(p, q, counts)

    @classmethod
    def from_counts(cls, p, q, counts, num=1, qexp=0):
        """Build from weights on all p powers of zeta, folding away zeta**(p-1)."""
        if len(counts) != p:
            raise ValueError(f"need {p} weights, got {len(counts)}")
        top = counts[p - 1]
        return cls(p, q, [c - top for c in counts[: p - 1]], num, qexp)

    # -- ring structure -------------------------------------------------------

    def _check_compatible(self, other):
        if self.p != other.p or self.q != other.q:
            raise ValueError(
                f"mixing Z[zeta_{self.p}]/q={self.q} with Z[zeta_{other.p}]/q={other.q}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = CycNum.rational(self.p, self.q, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        self._check_compatible(other)
        e = max(self.qexp, other.qexp)
        a = self.num * self.q ** (e - self.qexp)
        b = other.num * self.q ** (e - other.qexp)
        coeffs = [a * x + b * y for x, y in zip(self.coeffs, other.coeffs)]
        return CycNum(self.p, self.q, coeffs, 1, e)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.p, self.q, [-c for c in self.coeffs], self.num, self.qexp)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycNum.rational(self.p, self.q, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycNum(self.p, self.q, self.coeffs, self.num * other, self.qexp)
        if not isinstance(other, CycNum):
            return NotImplemented
        self._check_compatible(other)
        p = self.p
        counts = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        counts[(i + j) % p] += a * b
        return CycNum.from_counts(
            p, self.q, counts, self.num * other.num, self.qexp + other.qexp
        )

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("only nonnegative powers are defined")
        out = CycNum.one(self.p, self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self):
        """Complex conjugation zeta**j -> zeta**(-j); an exact involution."""
        counts = [0] * self.p
        for j, c in enumerate(self.coeffs):
            counts[(-j) % self.p] += c
        return CycNum.from_counts(self.p, self.q, counts, self.num, self.qexp)

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycNum.rational(self.p, self.q, other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return (self.p, self.q, self.coeffs, self.num, self.qexp) == (
            other.p,
            other.q,
            other.coeffs,
            other.num,
            other.qexp,
        )

    def __hash__(self):
        return hash((self.p, self.q, self.coeffs, self.num, self.qexp))

    def __bool__(self):
        return self.num != 0

    # -- views ---------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num * self.coeffs[0] if self.coeffs else 0, self.q**self.qexp)

    def as_integer(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self!r} is not an integer")
        return f.numerator

    def embed(self) -> complex:
        """Numerical value at zeta = exp(2*pi*i/p); for reports only."""
        z = sum(
            c * cmath.exp(2j * cmath.pi * j / self.p) for j, c in enumerate(self.coeffs)
        )
        return z * self.num / self.q**self.qexp

    def report(self) -> dict:
        """Lossless serialization plus a 12-significant-digit embedding."""
        z = self.embed()
        return {
            "coeffs": list(self.coeffs),
            "scale_num": self.num,
            "scale_qexp": self.qexp,
            "embed_re": f"{z.real:.12g}",
            "embed_im": f"{z.imag:.12g}",
        }

    def __repr__(self):
        return f"CycNum(p={self.p}, q={self.q}, coeffs={self.coeffs}, num={self.num}, qexp={self.qexp})"


def chi(field, x: int) -> CycNum:
    """Additive character zeta_p**trace(x)."""
    return CycNum.zeta_power(field.p, field.q, field.trace(x))


def complex_embed(z: CycNum) -> complex:
    return z.embed()


def orthogonality_sum(field, beta, cap=None) -> CycNum:
    """Direct sum of chi(beta . alpha) over all alpha in F_q**n.

    Equals q**n at beta = 0 and vanishes otherwise; computed by summation,
    not by the identity, so it can serve as a check of it.
    """
    beta = tuple(beta)
    n = len(beta)
    check_cap(field.q**n, cap, f"orthogonality sum over F_{field.designation()}^{n}")
    counts = [0] * field.p
    for alpha in itertools.product(range(field.q), repeat=n):
        r = 0
        for b, a in zip(beta, alpha):
            r = (r + field.trace(field.mul(b, a))) % field.p
        counts[r] += 1
    return CycNum.from_counts(field.p, field.q, counts)


_GAUSS_ONE: dict = {}


def _gauss_one(field) -> CycNum:
    g = _GAUSS_ONE.get(field)
    if g is None:
        counts = [0] * field.p
        for s in range(1, field.q):
            counts[field.trace(s)] += field.eta(s)
        g = CycNum.from_counts(field.p, field.q, counts)
        _GAUSS_ONE[field] = g
    return g


def gauss_sum(field, a: int) -> CycNum:
    """Sum of eta(s) * chi(a*s) over nonzero s, computed by direct summation.

    The multiplicative shift law (the value is eta(a) times the base sum) is
    re-derived and checked on every call with a != 1.
    """
    if a == 0:
        raise ValueError("the Gauss sum needs a != 0")
    if a == 1:
        return _gauss_one(field)
    counts = [0] * field.p
    for s in range(1, field.q):
        counts[field.trace(field.mul(a, s))] += field.eta(s)
    g = CycNum.from_counts(field.p, field.q, counts)
    if g != field.eta(a) * _gauss_one(field):
        raise ArithmeticError(f"Gauss sum shift law failed at a={a} over F_{field.designation()}")
    return g


def verify_gauss_square(field) -> bool:
    """Exact identity in Z[zeta_p]: the base Gauss sum squares to eta(-1) * q."""
    g = _gauss_one(field)
    target = CycNum.rational(field.p, field.q, field.eta(field.neg(1)) * field.q)
    return g * g == target


def gauss_sum_embedding(field) -> complex:
    """Classical closed-form complex value of the base Gauss sum."""
    root = math.sqrt(field.q)
    if field.p % 4 == 1:
        return complex((-1) ** (field.ell - 1) * root, 0.0)
    return (-1) ** (field.ell - 1) * (1j**field.ell) * root


def completed_square_sum(field, a: int, b: int) -> CycNum:
    """Direct sum of chi(a*s**2 + b*s) over all s, checked against its closed form.

    Completing the square turns the sum into eta(a) * G * chi(b**2 / (-4a))
    with G the base Gauss sum; both sides are computed independently and an
    exact mismatch raises.
    """
    if a == 0:
        raise ValueError("completing the square needs a != 0")
    counts = [0] * field.p
    for s in range(field.q):
        counts[field.trace(field.add(field.mul(a, field.sq(s)), field.mul(b, s)))] += 1
    direct = CycNum.from_counts(field.p, field.q, counts)
    four = 4 % field.p
    shift = field.div(field.sq(b), field.neg(field.mul(four, a)))
    closed = field.eta(a) * _gauss_one(field) * chi(field, shift)
    if direct != closed:
        raise ArithmeticError(
            f"completed-square identity failed at a={a}, b={b} over F_{field.designation()}"
        )
    return direct
