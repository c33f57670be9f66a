"""Pair counts for the norm-ratio map: brute force and the exact spectral route.

For a set E and a field value t, nu(t) counts ordered pairs (x, y) in E x E
whose ratio-map value is t.  The brute route walks all |E|**2 pairs.  The
spectral route, valid for t != 0, expands the ratio-sphere transform inside
the pair count and evaluates four exact terms from the transform table of
E; integrality of the result is asserted, which makes every call a
self-test of the whole transform stack.  The two routes are compared
exactly by the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclotomic import CycNum
from .field import CapExceededError, Field
from .fourier import PointSet, dft, gram_cyc, random_pointset
from .varieties import _s0_closed_by_norm, norm_table, ratio_table

__all__ = [
    "PAIR_BUDGET",
    "nu_brute",
    "nu_fourier",
    "nu_fourier_profile",
    "nu_lower_bound",
    "nu_lower_bound_d4",
    "nu_profile_brute",
    "phi_image",
    "threshold_experiment",
]

PAIR_BUDGET = 10**7

# pair-block elements processed at once by the brute kernel
_PAIR_BLOCK = 1 << 22


def nu_profile_brute(pset: PointSet, budget=None) -> np.ndarray:
    """Pair counts for every t at once, by one pass over all |E|**2 pairs."""
    F = pset.field
    d = pset.n
    if d % 2:
        raise ValueError(f"the ratio map needs an even dimension, got {d}")
    size = len(pset)
    limit = PAIR_BUDGET if budget is None else budget
    if size * size > limit:
        raise CapExceededError(f"brute pair count: {size * size} pairs exceeds the budget of {limit}")
    counts = np.zeros(F.q, dtype=np.int64)
    if size == 0:
        return counts
    rtab = ratio_table(F, d)
    X = pset.coords()
    sub = F.sub_table
    weights = F.q ** np.arange(d, dtype=np.int64)
    block = max(1, _PAIR_BLOCK // max(1, size * d))
    for start in range(0, size, block):
        stop = min(size, start + block)
        diffs = sub[X[start:stop, None, :], X[None, :, :]].astype(np.int64)
        codes = diffs @ weights
        counts += np.bincount(rtab[codes].ravel(), minlength=F.q)
    return counts


def nu_brute(pset: PointSet, t: int, budget=None) -> int:
    """Exact pair count at one level t; walks all pairs, so prefer the profile
    when several levels are needed."""
    if not 0 <= t < pset.field.q:
        raise ValueError(f"level {t} is not a field element index")
    return int(nu_profile_brute(pset, budget)[t])


# -- spectral route ----------------------------------------------------------


@lru_cache(maxsize=16)
def _spectral_layout(field: Field, d: int):
    """Frequency bookkeeping shared by every set over (field, d).

    Frequencies are grouped by the transform class of each half (zero
    vector / null nonzero / square norm / nonsquare norm): the zero-sphere
    transform is constant on those classes, so the weighted frequency sum
    collapses to one Gram accumulation per class pair.
    """
    q = field.q
    n = d // 2
    half_norm = norm_table(field, n)
    idx = np.arange(q**d, dtype=np.int64)
    Q = q**n
    lo = idx % Q
    hi = idx // Q
    eta = field.eta_table
    half_cls = np.where(
        np.arange(Q) == 0, 0, np.where(half_norm == 0, 1, np.where(eta[half_norm] == 1, 2, 3))
    )
    key = half_cls[lo] * 4 + half_cls[hi]
    pair_rows = {}
    for a in range(4):
        for b in range(4):
            rows = np.flatnonzero(key == a * 4 + b)
            if rows.size:
                pair_rows[(a, b)] = rows
    # representative norms per class, for the class-constant transform values
    nonsquare = next(x for x in range(1, q) if field.eta(x) == -1)
    reps = {0: (True, 0), 1: (False, 0), 2: (False, 1), 3: (False, nonsquare)}
    lo_norm = half_norm[lo]
    hi_norm = half_norm[hi]
    return pair_rows, reps, lo_norm, hi_norm


@lru_cache(maxsize=256)
def _level_rows(field: Field, d: int, t: int) -> np.ndarray:
    """Frequencies m with t * norm(m') = norm(m'')."""
    _, _, lo_norm, hi_norm = _spectral_layout(field, d)
    rows = np.flatnonzero(field.mul_table[t, lo_norm] == hi_norm)
    rows.setflags(write=False)
    return rows


@dataclass
class _SpectralCounts:
    field: Field
    d: int
    size: int
    coeffs: np.ndarray
    class_sums: dict


def _spectral_prepare(pset: PointSet, cap=None) -> _SpectralCounts:
    F = pset.field
    d = pset.n
    if d % 2 or d < 4:
        raise ValueError(f"the spectral count needs an even dimension >= 4, got {d}")
    table = dft(pset, cap)
    pair_rows, _, _, _ = _spectral_layout(F, d)
    class_sums = {
        ab: gram_cyc(F, table.coeffs[rows]) for ab, rows in pair_rows.items()
    }
    return _SpectralCounts(F, d, len(pset), table.coeffs, class_sums)


def _spectral_value(prep: _SpectralCounts, t: int) -> int:
    F = prep.field
    p, q, d = F.p, F.q, prep.d
    n = d // 2
    _, reps, _, _ = _spectral_layout(F, d)
    svals = {c: _s0_closed_by_norm(F, n, *reps[c]) for c in range(4)}
    # leading term |E|**2 / q
    total = CycNum.rational(p, q, prep.size * prep.size, 1)
    # weighted frequency sum with both half transforms
    for (a, b), zsum in prep.class_sums.items():
        total = total - svals[a] * svals[b] * zsum
    # signed Gauss-power terms on the matched-norm frequency set
    gpow = F.eta(F.neg(1)) ** n
    sgn = 1 if n % 2 == 0 else F.eta(F.neg(t))
    level = gram_cyc(F, prep.coeffs[_level_rows(F, d, t)])
    total = total + CycNum.rational(p, q, gpow * sgn, n) * level
    total = total - CycNum.rational(p, q, gpow * sgn * prep.size * q ** (n - 1))
    if not total.is_rational:
        raise ArithmeticError(f"spectral count at t={t} is not rational: {total!r}")
    value = total.as_fraction()
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"spectral count at t={t} is not a nonnegative integer: {value}")
    return int(value)


def nu_fourier(pset: PointSet, t: int, cap=None) -> int:
    """Exact pair count at a nonzero level via the spectral identity."""
    if t == 0:
        raise ValueError("the spectral identity only covers t != 0; use the brute count at 0")
    if not 0 < t < pset.field.q:
        raise ValueError(f"level {t} is not a nonzero field element index")
    return _spectral_value(_spectral_prepare(pset, cap), t)


def nu_fourier_profile(pset: PointSet, cap=None) -> dict:
    """Spectral pair counts for every nonzero level, sharing one transform."""
    prep = _spectral_prepare(pset, cap)
    return {t: _spectral_value(prep, t) for t in range(1, pset.field.q)}


def phi_image(pset: PointSet, budget=None, cap=None) -> set:
    """All attained ratio values: brute when the pair count fits, else spectral.

    The spectral route covers the nonzero levels; 0 is attained by every
    nonempty set through its diagonal pairs.
    """
    size = len(pset)
    if size == 0:
        return set()
    limit = PAIR_BUDGET if budget is None else budget
    if size * size <= limit:
        profile = nu_profile_brute(pset, budget)
        return {int(t) for t in np.flatnonzero(profile)}
    counts = nu_fourier_profile(pset, cap)
    return {0} | {t for t, v in counts.items() if v > 0}


# -- executable lower bounds -------------------------------------------------


def nu_lower_bound_d4(size_e: int, q: int) -> Fraction:
    """(1/q + 1/q**2) |E| (|E| - q**2): the four-dimensional coverage bound.

    Positive exactly above the q**2 threshold; every nonzero level count of
    a set in F_q**4 with q ≡ 3 (mod 4) is at least this value.
    """
    return (Fraction(1, q) + Fraction(1, q * q)) * size_e * (size_e - q * q)


def nu_lower_bound(size_e: int, q: int, d: int, case: str) -> Fraction:
    """Per-case lower bound for nonzero level counts in F_q**d.

    Case "A" (d ≡ 4 mod 8, q ≡ 3 mod 4) keeps the matched-norm term and
    three spectral remainders; case "B" (d ≡ 0 mod 4) and case "part2"
    (d ≡ 2 mod 4) only use transform decay.  A nonpositive value carries no
    information (the bound is vacuous below its threshold).
    """
    e = size_e
    if case == "A":
        if d % 8 != 4:
            raise ValueError(f"case A needs d ≡ 4 (mod 8), got d={d}")
        if q % 4 != 3:
            raise ValueError(f"case A needs q ≡ 3 (mod 4), got q={q}")
        tail = q ** ((3 * d - 8) // 4) + q ** ((d - 4) // 2) + q ** ((d - 2) // 2)
        return Fraction(e * e, q) - Fraction(e * e, q * q) - tail * e
    if case == "B":
        if d % 4 != 0:
            raise ValueError(f"case B needs d ≡ 0 (mod 4), got d={d}")
        return Fraction(e * e, q) - Fraction(4 * e * e, q * q) - 4 * q ** ((3 * d - 4) // 4) * e
    if case == "part2":
        if d % 4 != 2:
            raise ValueError(f"case part2 needs d ≡ 2 (mod 4), got d={d}")
        return Fraction(e * e, q) - Fraction(e * e, q * q) - 3 * q ** ((3 * d - 6) // 4) * e
    raise ValueError(f"unknown case {case!r}; expected 'A', 'B', or 'part2'")


# -- seeded experiments --------------------------------------------------------


def _nonzero_profile(pset: PointSet, budget=None, cap=None) -> dict:
    """Pair counts at every nonzero level, brute when affordable."""
    size = len(pset)
    limit = PAIR_BUDGET if budget is None else budget
    if size * size <= limit:
        profile = nu_profile_brute(pset, budget)
        return {t: int(profile[t]) for t in range(1, pset.field.q)}
    return nu_fourier_profile(pset, cap)


def threshold_experiment(
    field: Field,
    d: int,
    sizes,
    samples: int,
    seed: int,
    budget=None,
    cap=None,
    planted=(),
) -> list:
    """Coverage statistics of seeded uniform random subsets, one record per size.

    Each record reports the fraction of samples whose ratio image is all of
    F_q and exact statistics of the smallest nonzero level count.  Planted
    sets are evaluated alongside the samples and report their images
    verbatim.  Identical (seed, sizes, samples) reproduce identical records.
    """
    q = field.q
    rng = random.Random(seed)
    records = []
    for size in sizes:
        if size > q**d:
            raise ValueError(f"size {size} exceeds the {q ** d} points of F_{field.designation()}^{d}")
        covered = 0
        minima = []
        for _ in range(samples):
            pset = random_pointset(field, d, size, rng, cap)
            profile = _nonzero_profile(pset, budget, cap)
            minima.append(min(profile.values()))
            covered += all(v > 0 for v in profile.values())
        rec = {
            "size": size,
            "samples": samples,
            "covered": covered,
            "coverage_fraction": str(Fraction(covered, samples)) if samples else "0",
            "min_nu": {
                "min": min(minima) if minima else None,
                "max": max(minima) if minima else None,
                "mean": str(Fraction(sum(minima), len(minima))) if minima else None,
            },
        }
        if planted:
            rec["planted_images"] = [
                sorted(phi_image(ps, budget, cap)) for ps in planted if len(ps) == size
            ]
        records.append(rec)
    return records
