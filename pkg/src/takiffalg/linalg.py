"""Dense exact linear algebra over a field.

Works uniformly for gmpy2 rationals and Cyclotomic entries: both support
+, -, *, / and are falsy exactly when zero.  Matrices are lists of lists;
all routines are deterministic (first-nonzero pivoting), so echelon forms
are canonical and reproducible bit-for-bit.
"""

from __future__ import annotations

__all__ = [
    "identity_matrix",
    "inverse",
    "is_zero_matrix",
    "mat_mul",
    "mat_vec",
    "nullspace",
    "rank",
    "rref",
    "solve",
    "transpose",
]


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix, ncols=None):
    """Canonical basis of the right kernel, echelonized over free columns."""
    if not matrix:
        return []
    ncols = len(matrix[0]) if ncols is None else ncols
    rows, pivots = rref(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    one = matrix[0][0] ** 0
    zero = one - one
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for i, p in enumerate(pivots):
            if rows[i][f]:
                vec[p] = -rows[i][f]
        basis.append(vec)
    return basis


def identity_matrix(n, one):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(p):
            acc = None
            for k in range(m):
                if ai[k] and b[k][j]:
                    term = ai[k] * b[k][j]
                    acc = term if acc is None else acc + term
            row.append(acc if acc is not None else 0 * ai[0])
        out.append(row)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        acc = None
        for x, y in zip(row, v):
            if x and y:
                term = x * y
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else 0 * row[0])
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def inverse(a):
    n = len(a)
    if n == 0:
        return []
    one = a[0][0] ** 0
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)]
           for i, r in enumerate(a)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]


def solve(a, b):
    """One solution x of a x = b, or None if inconsistent."""
    if not a:
        return [] if not any(b) else None
    n = len(a[0])
    aug = [list(r) + [bv] for r, bv in zip(a, b)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [0 * a[0][0]] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][-1]
    return x


def is_zero_matrix(a) -> bool:
    return all(not v for row in a for v in row)
