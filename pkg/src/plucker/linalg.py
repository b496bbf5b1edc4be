"""Exact dense linear algebra on lists of lists.

Entries may be ints, Fractions or ModP residues; nothing here rounds.
Rank and determinant use Bareiss' fraction-free elimination, which keeps
integer inputs integral throughout.
"""

from __future__ import annotations

from .scalar import div


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0, "Bareiss division not exact"
        return q
    return div(a, b)


def copy(m):
    return [list(row) for row in m]


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b):
    if not a:
        return []
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def bareiss(m):
    """Fraction-free forward elimination; returns (echelon rows, rank, sign)."""
    a = copy(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = _exact_div(p * row_i[j] - aic * row_r[j], prev)
            row_i[c] = 0 * p
        prev = p
        r += 1
    return a, r, sign


def rank(m) -> int:
    if not m or not m[0]:
        return 0
    return bareiss(m)[1]


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    a, r, sign = bareiss(m)
    if r < n:
        return 0 * m[0][0]
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def rref(m):
    """Reduced row echelon form over the field; returns (rows, pivot columns)."""
    a = copy(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [div(x, p) for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def kernel(m, ncols=None):
    """Basis of the right null space {v : m v = 0}."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    a, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(a, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(m):
    n = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in a[:n]]


def solve(m, b):
    """One solution x of m x = b, or None if inconsistent."""
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    a, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(a, pivots):
        x[pc] = row[ncols]
    return x


def complete_basis(vectors, dim):
    """Indices of standard basis vectors that extend independent `vectors` to a basis."""
    chosen = [list(v) for v in vectors]
    extra = []
    r = rank(chosen) if chosen else 0
    if r != len(chosen):
        raise ValueError("vectors are dependent")
    for i in range(dim):
        e = [1 if j == i else 0 for j in range(dim)]
        if rank(chosen + [e]) > r:
            chosen.append(e)
            extra.append(i)
            r += 1
        if r == dim:
            break
    return extra
