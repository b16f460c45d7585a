"""Exact linear algebra over integers and rationals.

Cone geometry and span tests here are degenerate-sensitive, so everything is
fraction-free integer elimination or Fraction arithmetic; no floats anywhere.
Matrix products between int64 numpy arrays take a fast path only when a
rigorous a-priori bound rules out overflow.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .vectors import primitive


class IntRowBasis:
    """Incremental row-echelon basis of a rational row space.

    Rows are kept as primitive integer vectors with positive pivots, ordered
    by pivot column.  Reduction uses cross-multiplication, so everything stays
    in exact integer arithmetic.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "IntRowBasis":
        out = IntRowBasis(self.dim)
        out.rows = [r[:] for r in self.rows]
        out.pivots = self.pivots[:]
        return out

    def _reduce(self, v: list[int]) -> list[int]:
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                vp, rp = v[p], row[p]
                g = gcd(vp, rp)
                a, b = rp // g, vp // g
                # scale all of v, not just columns past p: the residual must
                # stay a scalar multiple of the true one (row is zero below p)
                for c in range(self.dim):
                    v[c] = v[c] * a - row[c] * b
        return v

    def residual(self, vec) -> tuple[int, ...]:
        """Primitive remainder of vec after reduction; zero iff in the span."""
        v = self._reduce([int(x) for x in vec])
        return primitive(v, fix_sign=True)

    def contains(self, vec) -> bool:
        return not any(self.residual(vec))

    def add(self, vec) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v = list(self.residual(vec))
        for p, x in enumerate(v):
            if x:
                pos = 0
                while pos < len(self.pivots) and self.pivots[pos] < p:
                    pos += 1
                self.rows.insert(pos, v)
                self.pivots.insert(pos, p)
                return True
        return False


def rank_int(rows, dim: int) -> int:
    basis = IntRowBasis(dim)
    for r in rows:
        basis.add(r)
    return basis.rank


def independent_rows(rows, dim: int) -> list[int]:
    """Indices of a maximal linearly independent subset, first-come order."""
    basis = IntRowBasis(dim)
    out = []
    for i, r in enumerate(rows):
        if basis.add(r):
            out.append(i)
    return out


def _gauss_jordan(mat: list[list[Fraction]], width: int) -> list[int]:
    """In-place reduced row echelon over Fractions; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(width):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return pivots


def nullspace(rows, dim: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : A x = 0} as Fraction tuples (empty rows -> identity)."""
    mat = [[Fraction(x) for x in row] for row in rows if any(row)]
    if not mat:
        eye = []
        for i in range(dim):
            v = [Fraction(0)] * dim
            v[i] = Fraction(1)
            eye.append(tuple(v))
        return eye
    pivots = _gauss_jordan(mat, dim)
    pivot_set = set(pivots)
    basis = []
    for free in range(dim):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * dim
        v[free] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -mat[r][free]
        basis.append(tuple(v))
    return basis


def invert(rows) -> list[list[Fraction]]:
    """Exact inverse of a square nonsingular integer/rational matrix."""
    d = len(rows)
    mat = []
    for i, row in enumerate(rows):
        if len(row) != d:
            raise ValueError("matrix must be square")
        aug = [Fraction(x) for x in row] + [Fraction(0)] * d
        aug[d + i] = Fraction(1)
        mat.append(aug)
    pivots = _gauss_jordan(mat, d)
    if len(pivots) != d:
        raise ValueError("matrix is singular")
    return [row[d:] for row in mat]


_INT64_LIMIT = 1 << 62


def safe_int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact a @ b for integer matrices.

    Uses int64 when the Cauchy-style bound K*max|a|*max|b| stays below 2**62,
    otherwise falls back to object (big-int) arithmetic.
    """
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    amax = int(np.abs(a).max()) if a.size else 0
    bmax = int(np.abs(b).max()) if b.size else 0
    if k * amax * bmax < _INT64_LIMIT:
        return a.astype(np.int64, copy=False) @ b.astype(np.int64, copy=False)
    return a.astype(object) @ b.astype(object)
