"""The norm-ratio map, zero spheres, ratio spheres, and their closed-form transforms.

The ambient dimension d is even and splits points as x = (x', x'') with
halves of length d/2.  The norm of a vector is the field value sum of
squared coordinates; the ratio map sends (x, y) to norm(x'-y')/norm(x''-y'')
when the tail norm is invertible and to 0 otherwise.  Level sets of the
ratio map at the origin are the ratio spheres; the zero locus of the norm
in a half-space is the zero sphere.  Every closed-form transform value is
compared against the direct transform by the verify_* drivers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cyclotomic import CycNum, _gauss_one
from .field import Field, check_cap
from .fourier import PointSet, dft, index_coords

__all__ = [
    "VerifyResult",
    "norm_value",
    "phi",
    "ratio_sphere",
    "rt_ft_closed",
    "s0_ft_closed",
    "s0_ft_rational",
    "verify_rt_ft",
    "verify_s0_ft",
    "zero_sphere",
]


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of an exhaustive exact comparison."""

    ok: bool
    checked: int
    failure: dict | None = None


def norm_value(field: Field, coords) -> int:
    """Sum of squared coordinates, as a field element index."""
    acc = 0
    for c in coords:
        acc = field.add(acc, field.sq(c))
    return acc


@lru_cache(maxsize=32)
def norm_table(field: Field, n: int) -> np.ndarray:
    """norm of every point of F_q**n, indexed by point code."""
    coords = index_coords(field.q, n)
    sq = field.sq_table
    add = field.add_table
    acc = sq[coords[:, 0]].astype(np.int64)
    for k in range(1, n):
        acc = add[acc, sq[coords[:, k]]]
    acc.setflags(write=False)
    return acc


@lru_cache(maxsize=16)
def ratio_table(field: Field, d: int) -> np.ndarray:
    """ratio-at-origin of every point of F_q**d, indexed by point code."""
    if d % 2 or d < 2:
        raise ValueError(f"ambient dimension must be even, got {d}")
    half = norm_table(field, d // 2)
    Q = field.q ** (d // 2)
    idx = np.arange(field.q**d, dtype=np.int64)
    nlo = half[idx % Q]
    nhi = half[idx // Q]
    vals = field.mul_table[nlo, field.inv_table[nhi]].astype(np.int64)
    vals[nhi == 0] = 0
    vals.setflags(write=False)
    return vals


def phi(field: Field, x, y) -> int:
    """Ratio of head and tail difference norms; 0 when the tail norm vanishes."""
    x = tuple(x)
    y = tuple(y)
    d = len(x)
    if len(y) != d:
        raise ValueError("points must share a dimension")
    if d % 2:
        raise ValueError(f"the ratio map needs an even dimension, got {d}")
    diff = [field.sub(a, b) for a, b in zip(x, y)]
    head = norm_value(field, diff[: d // 2])
    tail = norm_value(field, diff[d // 2 :])
    if tail == 0:
        return 0
    return field.div(head, tail)


def zero_sphere(field: Field, n: int, cap=None) -> PointSet:
    """All points of F_q**n with vanishing norm, by exhaustive enumeration."""
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    check_cap(field.q**n, cap, f"zero sphere in F_{field.designation()}^{n}")
    codes = np.flatnonzero(norm_table(field, n) == 0)
    return PointSet(field, n, codes)


def ratio_sphere(field: Field, d: int, t: int, cap=None) -> PointSet:
    """Level set of the ratio map at the origin, by exhaustive enumeration."""
    if d % 2 or d < 2:
        raise ValueError(f"ambient dimension must be even, got {d}")
    if not 0 <= t < field.q:
        raise ValueError(f"level {t} is not a field element index")
    check_cap(field.q**d, cap, f"ratio sphere in F_{field.designation()}^{d}")
    codes = np.flatnonzero(ratio_table(field, d) == t)
    return PointSet(field, d, codes)


def s0_ft_closed(field: Field, n: int, mprime) -> CycNum:
    """Closed-form normalized transform of the zero sphere in F_q**n at m'.

    Evaluates delta_0(m')/q plus the Gauss-power character sum over
    invertible scalings of norm(m'), all in exact cyclotomic arithmetic.
    Needs n >= 2: in one dimension the zero sphere degenerates to the origin.
    """
    mprime = tuple(mprime)
    if len(mprime) != n:
        raise ValueError(f"frequency must have {n} coordinates")
    if n < 2:
        raise ValueError("the closed form needs half-dimension n >= 2")
    is_zero = all(c == 0 for c in mprime)
    return _s0_closed_by_norm(field, n, is_zero, norm_value(field, mprime))


@lru_cache(maxsize=4096)
def _s0_closed_by_norm(field: Field, n: int, is_zero: bool, nv: int) -> CycNum:
    p, q = field.p, field.q
    total = CycNum.rational(p, q, 1, 1) if is_zero else CycNum.zero(p, q)
    counts = [0] * p
    for r in range(1, q):
        w = field.eta(r) if n % 2 else 1
        counts[field.trace(field.mul(r, nv))] += w
    rsum = CycNum.from_counts(p, q, counts)
    sign = field.eta(field.neg(1)) if n % 2 else 1
    return total + CycNum.rational(p, q, sign, n + 1) * _gauss_one(field) ** n * rsum


def s0_ft_rational(field: Field, n: int, mprime) -> CycNum:
    """Rational specialization of the zero-sphere transform, by case dispatch.

    The case is chosen from n mod 4 and the character value at -1, never by
    the caller; disagreements with the general closed form are test failures.
    """
    mprime = tuple(mprime)
    if len(mprime) != n:
        raise ValueError(f"frequency must have {n} coordinates")
    if n < 2:
        raise ValueError("the rational case values need half-dimension n >= 2")
    is_zero = all(c == 0 for c in mprime)
    return _s0_rational_by_norm(field, n, is_zero, norm_value(field, mprime))


@lru_cache(maxsize=4096)
def _s0_rational_by_norm(field: Field, n: int, is_zero: bool, nv: int) -> CycNum:
    p, q = field.p, field.q
    eta_m1 = field.eta(field.neg(1))
    out = CycNum.zero(p, q)
    if is_zero:
        out = out + CycNum.rational(p, q, 1, 1)
    if n % 2 == 0:
        # even half-dimension: the Gauss power is a signed power of q
        a = 1 if n % 4 == 0 else eta_m1
        if nv == 0:
            out = out + CycNum.rational(p, q, a, n // 2)
        out = out + CycNum.rational(p, q, -a, (n + 2) // 2)
        return out
    # odd half-dimension: the value is a signed quadratic-character multiple
    if nv == 0:
        return out
    sgn = field.eta(field.neg(nv)) if n % 4 == 3 else field.eta(nv)
    return out + CycNum.rational(p, q, sgn, (n + 1) // 2)


def verify_s0_ft(field: Field, n: int, cap=None) -> VerifyResult:
    """Compare the direct transform of the zero sphere against both closed forms.

    Every frequency of F_q**n is checked with exact equality; the first
    counterexample, if any, is reported with full cyclotomic data.
    """
    sphere = zero_sphere(field, n, cap)
    table = dft(sphere, cap)
    norms = norm_table(field, n)
    for m in range(field.q**n):
        direct = table.normalized(m)
        nv = int(norms[m])
        closed = _s0_closed_by_norm(field, n, m == 0, nv)
        cases = _s0_rational_by_norm(field, n, m == 0, nv)
        if direct != closed or closed != cases:
            return VerifyResult(
                False,
                m + 1,
                {
                    "m": m,
                    "direct": direct.report(),
                    "closed": closed.report(),
                    "rational_cases": cases.report(),
                },
            )
    return VerifyResult(True, field.q**n)


def rt_ft_closed(field: Field, d: int, t: int, m) -> CycNum:
    """Closed-form normalized transform of the ratio sphere of level t != 0 at m.

    Combines the delta term at the zero frequency, the product of
    zero-sphere transforms of the two halves, and a signed Gauss-power term
    switching on whether t * norm(m') equals norm(m'').  Level 0 has no
    closed form here: the zero ratio sphere is handled by enumeration only.
    """
    if t == 0:
        raise ValueError("the ratio-sphere closed form needs t != 0")
    if d % 2 or d < 4:
        raise ValueError(f"ambient dimension must be even and >= 4, got {d}")
    m = tuple(m)
    if len(m) != d:
        raise ValueError(f"frequency must have {d} coordinates")
    n = d // 2
    lo, hi = m[:n], m[n:]
    return _rt_closed_by_parts(
        field,
        d,
        t,
        all(c == 0 for c in m),
        all(c == 0 for c in lo),
        norm_value(field, lo),
        all(c == 0 for c in hi),
        norm_value(field, hi),
    )


@lru_cache(maxsize=65536)
def _rt_closed_by_parts(field, d, t, m_zero, lo_zero, lo_norm, hi_zero, hi_norm):
    p, q = field.p, field.q
    n = d // 2
    total = CycNum.rational(p, q, 1, 1) if m_zero else CycNum.zero(p, q)
    total = total - _s0_closed_by_norm(field, n, lo_zero, lo_norm) * _s0_closed_by_norm(
        field, n, hi_zero, hi_norm
    )
    gpow = field.eta(field.neg(1)) ** n  # the d-th Gauss power over q**(d/2)
    sgn = 1 if n % 2 == 0 else field.eta(field.neg(t))
    on_level = field.mul(t, lo_norm) == hi_norm
    return total + CycNum.rational(p, q, gpow * sgn * ((q - 1) if on_level else -1), n + 1)


def verify_rt_ft(field: Field, d: int, cap=None) -> VerifyResult:
    """Compare ratio-sphere transforms against the closed form, all t != 0, all m."""
    q = field.q
    n = d // 2
    half = norm_table(field, n)
    Q = q**n
    idx = np.arange(q**d, dtype=np.int64)
    lo_idx = idx % Q
    hi_idx = idx // Q
    checked = 0
    for t in range(1, q):
        table = dft(ratio_sphere(field, d, t, cap), cap)
        for m in range(q**d):
            direct = table.normalized(m)
            closed = _rt_closed_by_parts(
                field,
                d,
                t,
                m == 0,
                bool(lo_idx[m] == 0),
                int(half[lo_idx[m]]),
                bool(hi_idx[m] == 0),
                int(half[hi_idx[m]]),
            )
            checked += 1
            if direct != closed:
                return VerifyResult(
                    False,
                    checked,
                    {"t": t, "m": m, "direct": direct.report(), "closed": closed.report()},
                )
    return VerifyResult(True, checked)
