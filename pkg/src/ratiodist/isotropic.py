"""Totally isotropic subspaces of the sum-of-squares form, and the product
sets built from them whose ratio image collapses to {0}.

A subspace is totally isotropic (null) when the norm and the associated dot
product vanish on it; in odd characteristic a zero Gram matrix of a basis
certifies this for the whole span.  The block constructions below realize
the maximal dimension in every case, with an exhaustive search as the
independent arbiter.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .counting import PAIR_BUDGET, phi_image
from .field import Field, check_cap
from .fourier import PointSet, encode_point
from .varieties import zero_sphere

__all__ = [
    "SharpnessSet",
    "SubspaceBasis",
    "max_isotropic_brute",
    "max_isotropic_construct",
    "max_isotropic_dim",
    "sharpness_set",
    "verify_null",
]

# exhaustive subspace search stays practical up to roughly this many points
_BRUTE_LIMIT = 32768


@dataclass(frozen=True)
class SubspaceBasis:
    """A basis of a linear subspace of F_q**n with a checkable null certificate."""

    field: Field
    n: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def span_size(self) -> int:
        return self.field.q**self.dim

    def gram_matrix(self):
        """Pairwise dot products of the basis vectors (the norm sits on the diagonal)."""
        F = self.field
        k = self.dim
        gram = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                acc = 0
                for a, b in zip(self.basis[i], self.basis[j]):
                    acc = F.add(acc, F.mul(a, b))
                gram[i][j] = acc
        return gram

    def is_null_certified(self) -> bool:
        """Zero Gram matrix: certifies a vanishing norm on the entire span."""
        return all(v == 0 for row in self.gram_matrix() for v in row)

    def is_independent(self) -> bool:
        """Row reduction over F_q; True when no basis vector is redundant."""
        F = self.field
        rows = [list(v) for v in self.basis]
        rank = 0
        for col in range(self.n):
            pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = F.inv(rows[rank][col])
            rows[rank] = [F.mul(inv, v) for v in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col] != 0:
                    c = rows[r][col]
                    rows[r] = [F.sub(a, F.mul(c, b)) for a, b in zip(rows[r], rows[rank])]
            rank += 1
        return rank == self.dim

    def span_codes(self) -> np.ndarray:
        """Point codes of every vector in the span; size q**dim exactly."""
        F = self.field
        codes = set()
        for coeffs in itertools.product(range(F.q), repeat=self.dim):
            vec = [0] * self.n
            for c, b in zip(coeffs, self.basis):
                if c:
                    vec = [F.add(v, F.mul(c, w)) for v, w in zip(vec, b)]
            codes.add(encode_point(F.q, vec))
        if len(codes) != self.span_size:
            raise ArithmeticError("basis vectors are dependent")
        return np.array(sorted(codes), dtype=np.int64)


def max_isotropic_dim(field: Field, n: int) -> int:
    """Largest totally isotropic dimension for the sum of squares in F_q**n."""
    if n % 2:
        return (n - 1) // 2
    sign = field.eta(field.neg(1)) if (n // 2) % 2 else 1
    return n // 2 if sign == 1 else (n - 2) // 2


def max_isotropic_construct(field: Field, n: int) -> SubspaceBasis:
    """Explicit basis of a maximal totally isotropic subspace in F_q**n.

    When -1 is a square, coordinates pair up as e(2j) + i*e(2j+1).  Otherwise
    four-coordinate blocks carry (a, b, 1, 0) and (-b, a, 0, 1) with
    a**2 + b**2 = -1, and a residual three coordinates fit one extra vector
    (a, b, 1).  Leftover coordinates are dropped.  The zero-Gram certificate
    and the dimension classification are checked before returning.
    """
    if n < 2:
        raise ValueError(f"need ambient dimension n >= 2, got {n}")
    q = field.q
    vecs = []
    if q % 4 == 1:
        i = field.sqrt_minus_one()
        for j in range(n // 2):
            v = [0] * n
            v[2 * j] = 1
            v[2 * j + 1] = i
            vecs.append(tuple(v))
    else:
        a, b = field.sum_two_squares_minus_one()
        for j in range(n // 4):
            u = [0] * n
            w = [0] * n
            u[4 * j : 4 * j + 4] = (a, b, 1, 0)
            w[4 * j : 4 * j + 4] = (field.neg(b), a, 0, 1)
            vecs.append(tuple(u))
            vecs.append(tuple(w))
        if n % 4 == 3:
            v = [0] * n
            v[n - 3 :] = (a, b, 1)
            vecs.append(tuple(v))
    basis = SubspaceBasis(field, n, tuple(vecs))
    if not basis.is_null_certified():
        raise ArithmeticError("construction lost the zero-Gram certificate")
    if basis.dim and not basis.is_independent():
        raise ArithmeticError("construction produced dependent vectors")
    if basis.dim != max_isotropic_dim(field, n):
        raise ArithmeticError(
            f"construction reached dimension {basis.dim}, classification says {max_isotropic_dim(field, n)}"
        )
    return basis


def max_isotropic_brute(field: Field, n: int, cap=None) -> int:
    """Exhaustive depth-first search for the largest totally isotropic dimension.

    Works over one leading-coefficient-1 representative per projective null
    vector and extends a partial basis only in echelon form: strictly
    increasing pivot positions, zero entries at all previous pivots, and
    orthogonality to everything chosen.  Every subspace has an echelon
    basis of null pairwise-orthogonal vectors, so the search is complete,
    and echelon form makes independence automatic.
    """
    limit = _BRUTE_LIMIT if cap is None else cap
    check_cap(field.q**n, limit, f"isotropic search in F_{field.designation()}^{n}")
    q = field.q
    sphere = zero_sphere(field, n, cap=limit)
    vecs = sphere.coords()[np.asarray(sphere.codes) != 0]
    if not vecs.size:
        return 0
    # scale each null vector so its first nonzero coordinate is 1, then dedupe
    pivots = np.argmax(vecs != 0, axis=1)
    lead = vecs[np.arange(len(vecs)), pivots]
    scaled = field.mul_table[field.inv_table[lead][:, None], vecs]
    weights = q ** np.arange(n, dtype=np.int64)
    _, keep = np.unique(scaled.astype(np.int64) @ weights, return_index=True)
    reps = scaled[keep]
    pivots = pivots[keep]
    k = len(reps)
    dot = np.zeros((k, k), dtype=np.int64)
    mul, add = field.mul_table, field.add_table
    for c in range(n):
        dot = add[dot, mul[reps[:, c][:, None], reps[None, :, c]]]
    ortho = dot == 0
    best = 0

    def extend(depth, cand):
        nonlocal best
        best = max(best, depth)
        for i in np.flatnonzero(cand):
            extend(depth + 1, cand & ortho[i] & (pivots > pivots[i]) & (reps[:, pivots[i]] == 0))

    extend(0, np.ones(k, dtype=bool))
    return best


@dataclass(frozen=True)
class SharpnessSet:
    """Half-space cross null-subspace product with the claimed exact size."""

    field: Field
    d: int
    case: str
    size_claim: str
    expected_size: int
    subspace: SubspaceBasis
    points: PointSet


def sharpness_set(field: Field, d: int, cap=None) -> SharpnessSet:
    """The product set (full half-space) x (maximal null subspace) in F_q**d.

    The tail subspace pins every pair's tail difference to norm zero, so the
    ratio image is {0} while the size meets the matching threshold exponent.
    The case, and with it the claimed size, follows from d and q mod 4.
    """
    q = field.q
    if d % 2 or d < 4:
        raise ValueError(f"need an even dimension d >= 4, got {d}")
    n = d // 2
    sub = max_isotropic_construct(field, n)
    if d == 4:
        if q % 4 == 3:
            case, claim, expected = "d4-origin-tail", "q^(d/2)", q**2
        else:
            case, claim, expected = "d4-null-line-tail", "q^3", q**3
    elif d % 4 == 2:
        case, claim, expected = "odd-half", "q^((3d-2)/4)", q ** ((3 * d - 2) // 4)
    else:
        k = d // 4
        if k % 2 == 0 or q % 4 == 1:
            case, claim, expected = "even-half-full", "q^(3d/4)", q ** (3 * d // 4)
        else:
            case, claim, expected = "even-half-deficient", "q^((3d-4)/4)", q ** ((3 * d - 4) // 4)
    check_cap(expected, cap, f"sharpness set in F_{field.designation()}^{d}")
    Q = q**n
    tails = sub.span_codes()
    codes = (np.arange(Q, dtype=np.int64)[:, None] + tails[None, :] * Q).ravel()
    points = PointSet(field, d, codes)
    if len(points) != expected:
        raise ArithmeticError(f"built {len(points)} points, claimed {expected}")
    return SharpnessSet(field, d, case, claim, expected, sub, points)


def verify_null(sharp: SharpnessSet, pair_budget=PAIR_BUDGET, subsample=500, seed=0) -> dict:
    """Two-tier check that the product set's ratio image is exactly {0}.

    Algebraic tier: the tail subspace keeps its zero-Gram certificate and
    the set really is the full product, which forces every pair's tail
    difference to be null (spans are closed under subtraction).  Brute
    tier: exhaustive pair evaluation when |E|**2 fits the budget, otherwise
    a seeded subsample of the given size.  Both must agree where both run.
    """
    E = sharp.points
    field, d = sharp.field, sharp.d
    q = field.q
    Q = q ** (d // 2)
    tails = sharp.subspace.span_codes()
    product = (np.arange(Q, dtype=np.int64)[:, None] + tails[None, :] * Q).ravel()
    algebraic = sharp.subspace.is_null_certified() and np.array_equal(
        np.sort(product), np.asarray(E.codes)
    )
    if len(E) ** 2 <= pair_budget:
        tier = "full"
        image = sorted(phi_image(E, budget=pair_budget))
    else:
        tier = f"subsample-{min(subsample, len(E))}"
        picked = random.Random(seed).sample([int(c) for c in E.codes], min(subsample, len(E)))
        image = sorted(phi_image(PointSet(field, d, picked), budget=pair_budget))
    ok = algebraic and image == [0]
    return {"algebraic": algebraic, "pair_tier": tier, "image": image, "ok": ok}
