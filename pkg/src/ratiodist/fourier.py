"""Indicator sets in F_q**n and their exact discrete Fourier transforms.

Points are encoded as integers in [0, q**n): coordinate k is the base-q
digit of weight q**k.  A transform table stores, for every frequency m,
the unnormalized sum of chi(-m . x) over the set as integer power-basis
coefficients; dividing a row by q**n gives the normalized coefficient.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from .cyclotomic import CycNum
from .field import Field, check_cap

__all__ = [
    "FourierTable",
    "PointSet",
    "decode_point",
    "dft",
    "encode_point",
    "index_coords",
    "inversion_check",
    "load_pointset",
    "plancherel_sum",
    "random_pointset",
    "save_pointset",
]

# elements touched per block in the transform kernels
_BLOCK = 1 << 22


def encode_point(q: int, coords) -> int:
    return sum(int(c) * q**k for k, c in enumerate(coords))


def decode_point(q: int, n: int, code: int) -> tuple:
    return tuple((code // q**k) % q for k in range(n))


@lru_cache(maxsize=8)
def index_coords(q: int, n: int) -> np.ndarray:
    """Coordinate matrix of every point of F_q**n, row index = point code."""
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int32)
    for k in range(n):
        out[:, k] = (idx // q**k) % q
    out.setflags(write=False)
    return out


class PointSet:
    """A duplicate-free subset of F_q**n, stored as sorted point codes."""

    def __init__(self, field: Field, n: int, codes):
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")
        codes = np.asarray([int(c) for c in codes], dtype=np.int64)
        codes = np.sort(codes)
        if codes.size:
            if codes[0] < 0 or codes[-1] >= field.q**n:
                raise ValueError(f"point codes must lie in [0, {field.q ** n})")
            if np.any(codes[1:] == codes[:-1]):
                raise ValueError("duplicate points")
        codes.setflags(write=False)
        self.field = field
        self.n = n
        self.codes = codes
        self._coords = None

    @classmethod
    def from_coords(cls, field: Field, pts) -> "PointSet":
        pts = list(pts)
        n = len(pts[0]) if pts else 1
        return cls(field, n, [encode_point(field.q, p) for p in pts])

    @classmethod
    def full_space(cls, field: Field, n: int, cap=None) -> "PointSet":
        check_cap(field.q**n, cap, f"full space F_{field.designation()}^{n}")
        return cls(field, n, range(field.q**n))

    @classmethod
    def empty(cls, field: Field, n: int) -> "PointSet":
        return cls(field, n, [])

    def __len__(self):
        return int(self.codes.size)

    def __iter__(self):
        return iter(int(c) for c in self.codes)

    def __contains__(self, code):
        i = np.searchsorted(self.codes, code)
        return i < self.codes.size and self.codes[i] == code

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.field == other.field
            and self.n == other.n
            and np.array_equal(self.codes, other.codes)
        )

    def __repr__(self):
        return f"PointSet(F_{self.field.designation()}^{self.n}, {len(self)} points)"

    def coords(self) -> np.ndarray:
        """Decoded (size, n) coordinate matrix; cached."""
        if self._coords is None:
            q = self.field.q
            out = np.empty((len(self), self.n), dtype=np.int32)
            for k in range(self.n):
                out[:, k] = (self.codes // q**k) % q
            out.setflags(write=False)
            self._coords = out
        return self._coords

    def points(self):
        """Coordinate tuples, in code order."""
        return [tuple(int(v) for v in row) for row in self.coords()]

    def translate(self, v) -> "PointSet":
        """The set shifted by the vector v."""
        v = np.asarray([int(c) for c in v], dtype=np.int64)
        if v.shape != (self.n,):
            raise ValueError(f"translation vector must have {self.n} coordinates")
        shifted = self.field.add_table[self.coords(), v[None, :]]
        q = self.field.q
        weights = q ** np.arange(self.n, dtype=np.int64)
        return PointSet(self.field, self.n, shifted.astype(np.int64) @ weights)

    def save(self, path):
        save_pointset(self, path)


def save_pointset(pset: PointSet, path) -> None:
    """Write the text format: 'q=<p^ell> n=<n>' then one point per line."""
    with open(path, "w") as fh:
        fh.write(f"q={pset.field.designation()} n={pset.n}\n")
        for row in pset.coords():
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def load_pointset(path, field: Field | None = None, cap=None) -> PointSet:
    """Read the text format back; raises ValueError on any malformed content."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty point-set file")
    head = lines[0].split()
    try:
        fields = dict(part.split("=", 1) for part in head)
        desig, n = fields["q"], int(fields["n"])
    except (ValueError, KeyError):
        raise ValueError(f"{path}: bad header {lines[0]!r}, expected 'q=<p^ell> n=<n>'") from None
    if field is None:
        field = Field.parse(desig, cap=cap)
    elif field.designation() != desig:
        raise ValueError(f"{path}: header field {desig} does not match {field.designation()}")
    pts = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != n:
            raise ValueError(f"{path}:{lineno}: expected {n} coordinates, got {len(parts)}")
        try:
            coords = [int(v) for v in parts]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer coordinate in {ln!r}") from None
        if any(c < 0 or c >= field.q for c in coords):
            raise ValueError(f"{path}:{lineno}: coordinate out of range [0, {field.q})")
        pts.append(encode_point(field.q, coords))
    return PointSet(field, n, pts)


def random_pointset(field: Field, n: int, size: int, rng: random.Random, cap=None) -> PointSet:
    """Uniform subset of the given size, drawn without replacement from rng."""
    npoints = field.q**n
    if size > npoints:
        raise ValueError(f"cannot draw {size} distinct points from {npoints}")
    check_cap(npoints, cap, f"sampling in F_{field.designation()}^{n}")
    return PointSet(field, n, rng.sample(range(npoints), size))


class FourierTable:
    """Dense table of all q**n unnormalized transform coefficients of a set.

    Row m holds the power-basis coefficients of the sum of chi(-m . x) over
    the set; the normalized value carries an extra q**(-n).
    """

    def __init__(self, field: Field, n: int, size: int, coeffs: np.ndarray):
        self.field = field
        self.n = n
        self.size = size
        coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
        if coeffs.shape != (field.q**n, field.p - 1):
            raise ValueError(f"coefficient table has shape {coeffs.shape}")
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        zero_row = [size] + [0] * (field.p - 2)
        if list(coeffs[0]) != zero_row:
            raise ArithmeticError("zero frequency must equal the set size")

    def __len__(self):
        return self.coeffs.shape[0]

    def value(self, m: int) -> CycNum:
        """Unnormalized coefficient at frequency code m."""
        return CycNum(self.field.p, self.field.q, self.coeffs[m])

    def normalized(self, m: int) -> CycNum:
        """Transform coefficient at m, including the q**(-n) normalization."""
        return CycNum(self.field.p, self.field.q, self.coeffs[m], 1, self.n)

    def json_rows(self, frequencies=None):
        """Debug export: one dict per frequency with exact data and an embedding."""
        if frequencies is None:
            frequencies = range(len(self))
        return [dict(m=int(m), **self.normalized(m).report()) for m in frequencies]


def dft(pset: PointSet, cap=None) -> FourierTable:
    """All q**n unnormalized transform coefficients of the indicator of pset.

    Cost is q**n * |set| character evaluations, done as integer trace sums.
    """
    F = pset.field
    q, p, n = F.q, F.p, pset.n
    npoints = q**n
    check_cap(npoints, cap, f"transform over F_{F.designation()}^{n}")
    size = len(pset)
    coeffs = np.zeros((npoints, p - 1), dtype=np.int64)
    if size == 0:
        return FourierTable(F, n, 0, coeffs)
    X = pset.coords()
    M = index_coords(q, n)
    neg = F.neg_table
    B = F.trace_bilinear
    rows_per_block = max(1, _BLOCK // size)
    for start in range(0, npoints, rows_per_block):
        stop = min(npoints, start + rows_per_block)
        Mn = neg[M[start:stop]]
        acc = B[Mn[:, 0][:, None], X[None, :, 0]].astype(np.int32)
        for k in range(1, n):
            acc += B[Mn[:, k][:, None], X[None, :, k]]
        acc %= p
        local = np.arange(stop - start, dtype=np.int64)[:, None] * p + acc
        counts = np.bincount(local.ravel(), minlength=(stop - start) * p)
        counts = counts.reshape(stop - start, p)
        coeffs[start:stop] = counts[:, : p - 1] - counts[:, p - 1 :]
    return FourierTable(F, n, size, coeffs)


def gram_cyc(field: Field, rows: np.ndarray, qexp: int = 0) -> CycNum:
    """Exact sum over the given rows of |row value|**2, as a single CycNum.

    Works through the (p-1) x (p-1) Gram matrix of the rows, so the cost is
    one integer matmul regardless of how many rows take part.
    """
    nrows = rows.shape[0]
    if nrows == 0:
        return CycNum.zero(field.p, field.q)
    bound = int(rows.max(initial=0) - rows.min(initial=0)) + 1
    if nrows * bound * bound >= 2**62:
        rows = rows.astype(object)
    G = rows.T @ rows
    counts = [0] * field.p
    for j in range(field.p - 1):
        for k in range(field.p - 1):
            counts[(j - k) % field.p] += int(G[j, k])
    return CycNum.from_counts(field.p, field.q, counts, 1, qexp)


def plancherel_sum(table: FourierTable):
    """Sum over all frequencies of |normalized coefficient|**2, exactly rational."""
    total = gram_cyc(table.field, table.coeffs, 2 * table.n)
    return total.as_fraction()


def inversion_check(pset: PointSet, table: FourierTable, cap=None) -> bool:
    """Resynthesize the indicator: sum of chi(m . x) * value(m) over all m.

    Exact equality with q**n on the set and 0 off it, for every point x.
    """
    F = pset.field
    q, p, n = F.q, F.p, pset.n
    npoints = q**n
    check_cap(npoints * npoints, cap, "inversion check (all points x all frequencies)")
    M = index_coords(q, n)
    B = F.trace_bilinear
    member = np.zeros(npoints, dtype=bool)
    member[pset.codes] = True
    scale = q**n
    rows_per_block = max(1, _BLOCK // npoints)
    for start in range(0, npoints, rows_per_block):
        stop = min(npoints, start + rows_per_block)
        Mx = M[start:stop]
        D = B[Mx[:, 0][:, None], M[None, :, 0]].astype(np.int32)
        for k in range(1, n):
            D += B[Mx[:, k][:, None], M[None, :, k]]
        D %= p
        for i in range(stop - start):
            total = np.zeros(p, dtype=np.int64)
            for r in range(p):
                rows = table.coeffs[D[i] == r]
                if rows.size:
                    srow = rows.sum(axis=0)
                    for j in range(p - 1):
                        total[(r + j) % p] += srow[j]
            got = total[: p - 1] - total[p - 1]
            want = scale if member[start + i] else 0
            if got[0] != want or np.any(got[1:]):
                return False
    return True
