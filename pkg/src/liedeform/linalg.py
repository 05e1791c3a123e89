"""Exact linear algebra over Q with fraction-free elimination.

Matrices are lists of rows.  Rational rows are scaled to integer rows once;
elimination then combines integer rows and divides each updated row by the
gcd of its entries, so no Fractions appear until the final pivot
normalization.  Pivoting: leftmost nonzero column, smallest row index.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import DenominatorVanishes, DimensionMismatch, Singular


def _int_row(row):
    den = 1
    for c in row:
        if not isinstance(c, int):
            den = lcm(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in row]


def _primitive(row):
    g = 0
    for c in row:
        if c:
            g = gcd(g, c)
            if g == 1:
                return row
    return row if g in (0, 1) else [c // g for c in row]


def _echelon(mat, reduced=True):
    """Integer (reduced) row echelon form and pivot columns."""
    rows = [_primitive(_int_row(r)) for r in mat]
    rows = [r for r in rows if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        pv = prow[c]
        targets = range(len(rows)) if reduced else range(r + 1, len(rows))
        for i in targets:
            if i == r:
                continue
            f = rows[i][c]
            if f:
                g = gcd(pv, f)
                a, b = pv // g, f // g
                rows[i] = _primitive([a * x - b * y for x, y in zip(rows[i], prow)])
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(mat):
    """Reduced row echelon form with unit pivots, as Fractions."""
    rows, pivots = _echelon(mat, reduced=True)
    out = []
    for row, c in zip(rows, pivots):
        pv = row[c]
        out.append([Fraction(x, pv) for x in row])
    return out, pivots


def rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    return len(_echelon(mat, reduced=False)[1])


def transpose(mat, ncols=None):
    if not mat:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*mat)]


def nullspace(mat, ncols=None) -> list[list[Fraction]]:
    """Basis of ``{x : mat x = 0}``, one vector per free column, in column order."""
    n = len(mat[0]) if mat else ncols
    if n is None:
        raise DimensionMismatch("cannot infer column count of an empty matrix")
    if not mat:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(mat)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def matmul(a, b):
    if a and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    bt = transpose(b) if b else []
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def is_zero_matrix(mat):
    return all(not c for row in mat for c in row)


def det(mat):
    """Bareiss determinant; works over any exact integral domain.

    Entries need ``+ - *`` and an ``exact_div`` method or true division that
    is exact (ints, Fractions, MultiPolys).
    """
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in mat]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            p = next((i for i in range(k + 1, n) if m[i][k]), None)
            if p is None:
                return m[k][k] * 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = v if prev is None else _exact(v, prev)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _exact(a, b):
    if hasattr(a, "exact_div"):
        q = a.exact_div(b)
        if q is None:
            raise ArithmeticError("Bareiss division was not exact")
        return q
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return a / b


def inverse(mat):
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise Singular("matrix is not invertible")
    return [row[n:] for row in R]


def solve(mat, rhs):
    """One solution of ``mat x = rhs`` (free variables set to 0), or None."""
    n = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    R, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def in_span(vectors, v) -> bool:
    if not any(v):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [v]) == rank(list(vectors))


def solve_poly_system(mat, rhs):
    """Solve a square system with polynomial entries by Cramer's rule.

    Returns ``(numerators, denominator)`` with ``x_i = numerators[i] / denominator``;
    determinants are computed fraction-free with Bareiss.
    """
    n = len(mat)
    d = det(mat)
    if not d:
        raise DenominatorVanishes("singular polynomial system")
    nums = []
    for i in range(n):
        mi = [list(row) for row in mat]
        for r in range(n):
            mi[r][i] = rhs[r]
        nums.append(det(mi))
    return nums, d
