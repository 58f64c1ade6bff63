"""Exact integer and rational linear algebra on lists of Python ints.

Matrices are plain row-major ``list[list[int]]``; nothing here uses floating
point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Matrix = list[list[int]]
Vector = tuple[int, ...]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def gcd_list(values) -> int:
    return reduce(gcd, (abs(int(v)) for v in values), 0)


def primitive(v: Sequence) -> Vector:
    """Scale a non-zero rational vector to the primitive integer vector in its direction."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = gcd_list(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def normalize_sign(v: Vector) -> Vector:
    """Orient so the first non-zero entry is positive (for hyperplane normals only)."""
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_reduce(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(row_reduce(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Primitive integer vectors spanning the rational kernel of ``m``.

    Not necessarily a lattice basis of the integer kernel; use
    :func:`integer_kernel` for that.
    """
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rref, pivots = row_reduce(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some rational solution of ``a x = b``, or None if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    rref, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(rref, pivots):
        x[p] = row[ncols]
    return x


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    rref, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in rref]


def integer_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def cross(rows: Sequence[Sequence[int]]) -> Vector:
    """Generalised cross product of n-1 integer vectors in Z^n.

    The result is orthogonal to every row and is zero exactly when the rows
    are linearly dependent.
    """
    n = len(rows) + 1
    out = []
    for k in range(n):
        minor = [[row[j] for j in range(n) if j != k] for row in rows]
        out.append((-1) ** k * det(minor))
    return tuple(out)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_decompose(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with ``U @ m @ V == S``.

    U and V are unimodular, S is diagonal with non-negative entries and each
    diagonal entry divides the next.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, row)) for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(rows, cols)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            p = a[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row into row t; the next pass reduces the pivot
            add_row(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    _, s, _ = smith_decompose(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Matrix whose columns are a Z-basis of ``ker(m)`` intersected with Z^cols."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return identity(ncols)
    _, s, v = smith_decompose(m)
    k = sum(1 for i in range(min(len(s), ncols)) if s[i][i])
    return [row[k:] for row in v]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == (len(m[0]) if m else 0) and abs(det(m)) == 1


def is_saturated(vectors: Sequence[Sequence[int]]) -> bool:
    """True when the vectors are a basis of a saturated sublattice."""
    if not vectors:
        return True
    d = smith_diagonal(vectors)
    return len(d) == len(vectors) and all(x == 1 for x in d)


def coordinates(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coordinates of ``v`` in ``basis`` (a list of vectors), or None if not in the span."""
    if not basis:
        return [] if all(x == 0 for x in v) else None
    x = solve(transpose(basis), v)
    if x is None:
        return None
    if matvec(transpose(basis), x) != [Fraction(y) for y in v]:
        return None
    return x
