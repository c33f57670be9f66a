"""Small odd-characteristic finite fields with a deterministic element encoding.

An element of F_q, q = p**ell, is an integer index in [0, q): the base-p
digits of the index are the coordinates of the element in the power basis
{1, a, ..., a**(ell-1)} of a root `a` of the modulus polynomial.  Prime
fields are the ell = 1 case, where the index is simply the residue.  The
modulus is always the lexicographically smallest monic irreducible
polynomial over F_p (coefficient vectors compared constant term first), so
indices mean the same element in every run and on every machine.
"""

from __future__ import annotations

import itertools
import os
from functools import cached_property

import numpy as np

__all__ = [
    "CAP_ENV",
    "DEFAULT_CAP",
    "CapExceededError",
    "Field",
    "check_cap",
    "configured_cap",
    "is_prime",
    "smallest_irreducible",
]

CAP_ENV = "RATIODIST_CAP"
DEFAULT_CAP = 1 << 24

# q x q lookup tables are only built for fields at most this large
_TABLE_LIMIT = 1024


class CapExceededError(ValueError):
    """An enumeration would exceed the configured point cap."""


def configured_cap() -> int:
    """Default enumeration cap, overridable through the RATIODIST_CAP variable."""
    raw = os.environ.get(CAP_ENV, "").strip()
    return int(raw) if raw else DEFAULT_CAP


def check_cap(npoints: int, cap: int | None, what: str) -> None:
    """Refuse an enumeration of `npoints` points when it exceeds the cap."""
    limit = configured_cap() if cap is None else cap
    if npoints > limit:
        raise CapExceededError(f"{what}: {npoints} points exceeds the cap of {limit}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_deg(c) -> int:
    for i in range(len(c) - 1, -1, -1):
        if c[i]:
            return i
    return -1


def _poly_rem(a, b, p):
    """Remainder of a modulo monic b; coefficients constant term first."""
    a = [c % p for c in a]
    db = _poly_deg(b)
    while True:
        da = _poly_deg(a)
        if da < db:
            return a
        lead = a[da]
        shift = da - db
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - lead * b[i]) % p


def _is_irreducible(poly, p) -> bool:
    """Trial division by every monic polynomial of degree up to deg/2."""
    deg = _poly_deg(poly)
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            div = list(tail) + [1]
            if _poly_deg(_poly_rem(poly, div, p)) < 0:
                return False
    return True


def smallest_irreducible(p: int, ell: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ell over F_p.

    Candidates are ordered by their coefficient tuple (constant term first),
    which makes the choice reproducible.  Degree 1 returns the polynomial x.
    """
    if ell == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=ell):
        cand = list(tail) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise ArithmeticError(f"no irreducible of degree {ell} over F_{p}")  # unreachable


class Field:
    """The field F_q, q = p**ell with p an odd prime; elements are int indices."""

    def __init__(self, p: int, ell: int = 1, modulus=None, cap: int | None = None):
        if p % 2 == 0:
            raise ValueError("even characteristic is not supported: the quadratic character needs odd q")
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is composite")
        if ell < 1:
            raise ValueError(f"extension degree must be at least 1, got {ell}")
        q = p**ell
        check_cap(q, cap, f"field of order {p}^{ell}")
        if ell > 1 and q > _TABLE_LIMIT:
            raise CapExceededError(
                f"extension field of order {q} is beyond the q <= {_TABLE_LIMIT} table limit"
            )
        self.p = p
        self.ell = ell
        self.q = q
        if modulus is None:
            modulus = smallest_irreducible(p, ell)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != ell + 1 or modulus[ell] != 1:
                raise ValueError(f"modulus must be monic of degree {ell}")
            if ell > 1 and not _is_irreducible(list(modulus), p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._two_squares = None

    @classmethod
    def parse(cls, text, cap: int | None = None) -> "Field":
        """Build a field from its designation: '7' for primes, 'p^ell' such as '3^2'."""
        s = str(text).strip()
        if "^" in s:
            p_str, ell_str = s.split("^", 1)
            return cls(int(p_str), int(ell_str), cap=cap)
        q = int(s)
        if q < 2:
            raise ValueError(f"{q} is not an odd prime power")
        d = 2
        while d * d <= q:
            if q % d == 0:
                ell = 0
                m = q
                while m % d == 0:
                    m //= d
                    ell += 1
                if m != 1:
                    raise ValueError(f"{q} is not an odd prime power")
                return cls(d, ell, cap=cap)
            d += 1
        return cls(q, 1, cap=cap)

    def designation(self) -> str:
        return str(self.p) if self.ell == 1 else f"{self.p}^{self.ell}"

    def __repr__(self):
        return f"Field({self.designation()})"

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.ell, self.modulus) == (other.p, other.ell, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.ell, self.modulus))

    # -- element encoding -------------------------------------------------

    def _digits(self, a: int):
        return [(a // self.p**i) % self.p for i in range(self.ell)]

    def _index(self, digits) -> int:
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(digits))

    def elements(self):
        return range(self.q)

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a + b) % self.q
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        if self.ell == 1:
            return (-a) % self.q
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a * b) % self.q
        return int(self.mul_table[a, b])

    def sq(self, a: int) -> int:
        return self.mul(a, a)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.ell == 1:
            return pow(a, self.q - 2, self.q)
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a = self.inv(a)
            k = -k
        out = 1
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def eta(self, x: int) -> int:
        """Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 at 0."""
        return int(self.eta_table[x])

    def trace(self, x: int) -> int:
        """Absolute trace x + x**p + ... down to F_p, returned in [0, p)."""
        return int(self.trace_table[x])

    # -- distinguished solutions fixed by index order ----------------------

    def sqrt_minus_one(self):
        """Smallest index i with i*i = -1, or None when q ≡ 3 (mod 4)."""
        if self.q % 4 != 1:
            return None
        m1 = self.neg(1)
        for i in range(self.q):
            if self.mul(i, i) == m1:
                return i
        raise ArithmeticError("unreachable: -1 is a square when q ≡ 1 (mod 4)")

    def sum_two_squares_minus_one(self):
        """Lexicographically least pair (a, b) with a**2 + b**2 = -1."""
        if self._two_squares is None:
            m1 = self.neg(1)
            for a in range(self.q):
                b = next(
                    (b for b in range(self.q) if self.add(self.sq(a), self.sq(b)) == m1),
                    None,
                )
                if b is not None:
                    self._two_squares = (a, b)
                    break
            else:
                raise ArithmeticError("unreachable: -1 is a sum of two squares in odd characteristic")
        return self._two_squares

    # -- lookup tables for the vectorized kernels --------------------------

    def _require_tables(self):
        if self.q > _TABLE_LIMIT:
            raise CapExceededError(
                f"vectorized tables need q <= {_TABLE_LIMIT}, got q = {self.q}"
            )

    @cached_property
    def add_table(self):
        self._require_tables()
        if self.ell == 1:
            i = np.arange(self.q, dtype=np.int64)
            t = (i[:, None] + i[None, :]) % self.q
        else:
            digs = np.array([self._digits(a) for a in range(self.q)], dtype=np.int64)
            t = np.zeros((self.q, self.q), dtype=np.int64)
            for k in range(self.ell):
                t += ((digs[:, None, k] + digs[None, :, k]) % self.p) * self.p**k
        t = np.ascontiguousarray(t.astype(np.int32))
        t.setflags(write=False)
        return t

    @cached_property
    def neg_table(self):
        if self.ell == 1:
            t = (-np.arange(self.q, dtype=np.int64)) % self.q
        else:
            t = np.array(
                [self._index([(-d) % self.p for d in self._digits(a)]) for a in range(self.q)],
                dtype=np.int64,
            )
        t = t.astype(np.int32)
        t.setflags(write=False)
        return t

    @cached_property
    def sub_table(self):
        t = np.ascontiguousarray(self.add_table[:, self.neg_table])
        t.setflags(write=False)
        return t

    @cached_property
    def mul_table(self):
        self._require_tables()
        if self.ell == 1:
            i = np.arange(self.q, dtype=np.int64)
            t = (i[:, None] * i[None, :]) % self.q
        else:
            digs = [self._digits(a) for a in range(self.q)]
            t = np.zeros((self.q, self.q), dtype=np.int64)
            for a in range(self.q):
                da = digs[a]
                for b in range(a, self.q):
                    out = [0] * (2 * self.ell - 1)
                    for i, x in enumerate(da):
                        if x:
                            for j, y in enumerate(digs[b]):
                                out[i + j] = (out[i + j] + x * y) % self.p
                    rem = _poly_rem(out, list(self.modulus), self.p)
                    rem += [0] * (self.ell - len(rem))
                    v = self._index(rem[: self.ell])
                    t[a, b] = v
                    t[b, a] = v
        t = np.ascontiguousarray(t.astype(np.int32))
        t.setflags(write=False)
        return t

    @cached_property
    def inv_table(self):
        t = np.argmax(self.mul_table == 1, axis=1).astype(np.int32)
        t[0] = 0  # sentinel: 0 has no inverse
        t.setflags(write=False)
        return t

    @cached_property
    def sq_table(self):
        if self.ell == 1:
            i = np.arange(self.q, dtype=np.int64)
            t = (i * i) % self.q
        else:
            t = np.diagonal(self.mul_table).copy()
        t = t.astype(np.int32)
        t.setflags(write=False)
        return t

    @cached_property
    def eta_table(self):
        t = np.full(self.q, -1, dtype=np.int8)
        t[0] = 0
        t[np.asarray(self.sq_table[1:])] = 1
        t.setflags(write=False)
        return t

    @cached_property
    def trace_table(self):
        if self.ell == 1:
            t = np.arange(self.q, dtype=np.int16)
        else:
            vals = []
            for a in range(self.q):
                acc = a
                term = a
                for _ in range(self.ell - 1):
                    term = self.power(term, self.p)
                    acc = self.add(acc, term)
                if acc >= self.p:
                    raise ArithmeticError("trace left the prime subfield")  # unreachable
                vals.append(acc)
            t = np.array(vals, dtype=np.int16)
        t.setflags(write=False)
        return t

    @cached_property
    def trace_bilinear(self):
        """B[a, b] = trace(a*b), so transform kernels sum plain integers mod p."""
        self._require_tables()
        if self.ell == 1:
            i = np.arange(self.q, dtype=np.int64)
            t = (i[:, None] * i[None, :]) % self.q
        else:
            t = self.trace_table[self.mul_table]
        t = np.ascontiguousarray(t.astype(np.int16))
        t.setflags(write=False)
        return t
