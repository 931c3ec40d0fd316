"""Exact integer linear algebra over Z.

Hermite normal forms, determinants, kernels, saturation and primitive
normal covectors, all over arbitrary-precision Python integers.  No
floating point is used anywhere in this module.  Every value is immutable
after construction and every operation is a pure function, so everything
here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, NonSquare, WrongCorank

Vector = tuple  # integer coordinate tuple


def _as_vector(v: Sequence[int]) -> Vector:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise DimensionMismatch("rows of unequal length")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(_as_vector(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]]) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if not cols:
            return cls(())
        return cls(tuple(tuple(c[i] for c in cols) for i in range(len(cols[0]))))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        ot = other.transpose().entries
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                               for row in self.entries))

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(determinant(self)) == 1


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix has no determinant")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update; the division is exact.
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _hnf_transform(rows: Sequence[Sequence[int]], ncols: int):
    """Row Hermite normal form with transformation.

    Returns (H, U, pivots) where U is unimodular, U * A = H, H is the
    canonical row HNF (positive pivots, entries above a pivot reduced into
    [0, pivot), zero rows at the bottom) and pivots lists the pivot column
    of each nonzero row.
    """
    m = len(rows)
    h = [list(_as_vector(r)) for r in rows]
    for r in h:
        if len(r) != ncols:
            raise DimensionMismatch("row length mismatch")
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def negate(i):
        h[i] = [-x for x in h[i]]
        u[i] = [-x for x in u[i]]

    def swap(i, j):
        h[i], h[j] = h[j], h[i]
        u[i], u[j] = u[j], u[i]

    def submul(i, j, q):
        if q:
            h[i] = [a - q * b for a, b in zip(h[i], h[j])]
            u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        # Euclidean elimination in column c among rows r..m-1.
        while True:
            nz = [i for i in range(r, m) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][c]), i))
            if i0 != r:
                swap(r, i0)
            if h[r][c] < 0:
                negate(r)
            clean = True
            for i in range(r + 1, m):
                if h[i][c]:
                    submul(i, r, h[i][c] // h[r][c])
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if r < m and h[r][c] != 0:
            for i in range(r):
                submul(i, r, h[i][c] // h[r][c])
            pivots.append(c)
            r += 1
    return h, u, pivots


def hnf(m: IntMatrix) -> IntMatrix:
    """Canonical row Hermite normal form; same row span over Z as the input."""
    h, _, _ = _hnf_transform(m.entries, m.cols)
    return IntMatrix.from_rows(h)


def integer_rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    _, _, pivots = _hnf_transform(rows, ncols)
    return len(pivots)


def kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of the right kernel {x in Z^ncols : A x = 0}.

    The result is a basis of a saturated sublattice (kernels always are);
    each basis vector is a row of a unimodular matrix, hence primitive.
    """
    rows = [list(r) for r in rows]
    transposed = [[row[j] for row in rows] for j in range(ncols)]
    h, u, pivots = _hnf_transform(transposed, len(rows))
    rank = len(pivots)
    return [tuple(u[i]) for i in range(rank, ncols)]


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """One integer solution x of A x = b, or None if none exists."""
    if len(b) != a.rows:
        raise DimensionMismatch("right-hand side length mismatch")
    at = a.transpose()
    h, u, pivots = _hnf_transform(at.entries, at.cols)
    residue = list(_as_vector(b))
    coeffs = [0] * len(h)
    for r, c in enumerate(pivots):
        q, rem = divmod(residue[c], h[r][c])
        if rem:
            return None
        coeffs[r] = q
        if q:
            residue = [x - q * y for x, y in zip(residue, h[r])]
    if any(residue):
        return None
    n = a.cols
    x = [0] * n
    for r, q in enumerate(coeffs):
        if q:
            x = [xi + q * ui for xi, ui in zip(x, u[r])]
    return tuple(x)


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    if m.rows != m.cols:
        raise NonSquare("only square matrices invert")
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise NonSquare("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        scale = a[col][col]
        a[col] = [x / scale for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    inv = []
    for i in range(n):
        row = a[i][n:]
        if any(x.denominator != 1 for x in row):
            raise NonSquare("matrix is not unimodular")
        inv.append(tuple(int(x) for x in row))
    return IntMatrix(tuple(inv))


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g == 1


def sign_normalized(v: Sequence[int]) -> Vector:
    """Flip the sign so the first nonzero coordinate is positive."""
    v = _as_vector(v)
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return tuple(-y for y in v)
    return v


@dataclass(frozen=True)
class SublatticeClass:
    """Canonical representative of a saturated sublattice of Z^n.

    The basis rows are the Hermite normal form of any generating set, with
    zero rows dropped, so two classes are equal exactly when they describe
    the same saturated sublattice.
    """

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def corank(self) -> int:
        return self.ambient_rank - self.rank

    def sort_key(self):
        return (self.ambient_rank, self.rank, self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_rank:
            raise DimensionMismatch("vector has wrong ambient rank")
        if not self.basis:
            return not any(v)
        mat = IntMatrix.from_rows(self.basis).transpose()
        return solve_integer(mat, v) is not None

    def describe(self) -> str:
        gens = ", ".join("(" + ",".join(str(x) for x in row) + ")" for row in self.basis)
        return f"span{{{gens}}}" if gens else "0"


def saturate(vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> SublatticeClass:
    """Canonical class of the smallest saturated sublattice containing the span.

    ambient_rank may be omitted when at least one vector is given.
    """
    vectors = [_as_vector(v) for v in vectors]
    if vectors:
        n = len(vectors[0])
        if any(len(v) != n for v in vectors):
            raise DimensionMismatch("vectors of unequal length")
        if ambient_rank is not None and ambient_rank != n:
            raise DimensionMismatch("ambient rank does not match vectors")
    else:
        if ambient_rank is None:
            raise DimensionMismatch("ambient rank required for an empty generating set")
        n = ambient_rank
    # Saturation = double orthogonal complement, both computed as integer
    # kernels (kernels of integer matrices are saturated).
    perp = kernel_basis(vectors, n)
    sat = kernel_basis(perp, n)
    h, _, pivots = _hnf_transform(sat, n)
    return SublatticeClass(n, tuple(tuple(r) for r in h[:len(pivots)]))


def primitive_normal(s: SublatticeClass) -> Vector:
    """The primitive covector whose kernel is the given corank-1 class.

    The sign is normalized so the first nonzero entry is positive.
    """
    if s.corank != 1:
        raise WrongCorank(f"corank {s.corank} class has no single normal")
    kern = kernel_basis(s.basis, s.ambient_rank)
    assert len(kern) == 1 and is_primitive(kern[0])
    return sign_normalized(kern[0])


def is_unimodular_basis(vectors: Sequence[Sequence[int]]) -> bool:
    """True exactly when the n given vectors in Z^n have determinant +-1."""
    vectors = [_as_vector(v) for v in vectors]
    if not vectors or any(len(v) != len(vectors) for v in vectors):
        raise DimensionMismatch("need exactly n vectors of dimension n")
    return abs(determinant(IntMatrix.from_rows(vectors))) == 1
