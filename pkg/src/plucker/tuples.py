"""Matrix tuples: tuple rank, independent-image vectors and subspaces, normal form.

All matrices are lists of rows over exact scalars.  The algorithms work
on finite truncations and verify every result exactly before returning.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .scalar import ModP

log = logging.getLogger(__name__)

Matrix = List[List[object]]


class TupleRankError(RuntimeError):
    """A rank hypothesis failed (or random search was unlucky)."""


@dataclass
class MatrixTuple:
    mats: List[Matrix]

    def __post_init__(self):
        if not self.mats:
            raise ValueError("a matrix tuple needs at least one matrix")
        self.mats = [linalg.copy(m) for m in self.mats]
        shape = self.shape_of(self.mats[0])
        for m in self.mats:
            if self.shape_of(m) != shape or any(len(r) != shape[1] for r in m):
                raise ValueError("matrices in a tuple must share one shape")

    @staticmethod
    def shape_of(m) -> Tuple[int, int]:
        return len(m), (len(m[0]) if m else 0)

    @property
    def p(self) -> int:
        return len(self.mats)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.shape_of(self.mats[0])

    def combination(self, c: Sequence) -> Matrix:
        n1, n2 = self.shape
        return [[sum(ci * m[i][j] for ci, m in zip(c, self.mats)) for j in range(n2)] for i in range(n1)]

    def images(self, v: Sequence) -> List[List[object]]:
        return [linalg.matvec(m, v) for m in self.mats]

    def transform(self, left: Matrix, right: Matrix) -> "MatrixTuple":
        return MatrixTuple([linalg.matmul(linalg.matmul(left, m), right) for m in self.mats])


@dataclass
class TotPoint:
    """(x^ma, x^col, x^row, t): an N x N tuple, an N x n and an m x N block, and t in K^d."""

    ma: MatrixTuple
    col: Matrix
    row: Matrix
    t: List[object]

    def __post_init__(self):
        N1, N2 = self.ma.shape
        if N1 != N2:
            raise ValueError("x^ma must be square")
        if len(self.col) != N1:
            raise ValueError("x^col must have N rows")
        if self.col and len({len(r) for r in self.col}) > 1:
            raise ValueError("ragged x^col")
        if any(len(r) != N1 for r in self.row):
            raise ValueError("x^row must have N columns")

    @property
    def N(self) -> int:
        return self.ma.shape[0]

    @property
    def n(self) -> int:
        return len(self.col[0]) if self.col else 0

    @property
    def m(self) -> int:
        return len(self.row)

    def act(self, left: Matrix, right: Matrix) -> "TotPoint":
        """(left, right) in GL_N x GL_N: rows move ma and col, columns move ma and row."""
        col = linalg.matmul(left, self.col) if self.n else [[] for _ in range(self.N)]
        row = linalg.matmul(self.row, right) if self.m else []
        return TotPoint(self.ma.transform(left, right), col, row, list(self.t))

    def __eq__(self, other):
        return (isinstance(other, TotPoint) and self.ma.mats == other.ma.mats and self.col == other.col
                and self.row == other.row and self.t == other.t)


# tuple rank

class TupleRank(int):
    """An int tagged with how it was obtained: "exact" or "upper" (randomized bound)."""

    def __new__(cls, value: int, kind: str):
        obj = super().__new__(cls, value)
        obj.kind = kind
        return obj

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def __repr__(self):
        return "TupleRank(%d, %r)" % (int(self), self.kind)


EXACT_MAX_SIZE = 8


def _pencil(M: MatrixTuple, t):
    a, b = M.mats
    return [[x + t * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _interpolate(xs, ys):
    """Coefficients (low to high) of the polynomial through the points, exactly."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def _rational_roots(coeffs) -> List[Fraction]:
    import sympy
    t = sympy.Symbol("t")
    poly = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(coeffs))
    roots = []
    for factor, _ in sympy.factor_list(sympy.Poly(poly, t, domain="QQ"))[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(Fraction(int(r.p), int(r.q)))
    return roots


def _exact_rank(M: MatrixTuple) -> int:
    if M.p == 1:
        return linalg.rank(M.mats[0])
    a, b = M.mats
    n1, n2 = M.shape
    # the generic rank of the pencil is attained at one of any size+1 sample points
    samples = list(range(min(n1, n2) + 1))
    ranks = [linalg.rank(_pencil(M, t)) for t in samples]
    R = max(ranks)
    best = min(R, linalg.rank(b))
    if R == 0:
        return 0
    t_star = samples[ranks.index(R)]
    _, rows = linalg.rref(linalg.transpose(_pencil(M, t_star)))
    _, cols = linalg.rref(_pencil(M, t_star))
    rows, cols = rows[:R], cols[:R]

    def minor(t):
        P = _pencil(M, t)
        return Fraction(linalg.det([[P[i][j] for j in cols] for i in rows]))

    xs = [Fraction(k) for k in range(R + 1)]
    coeffs = _interpolate(xs, [minor(x) for x in xs])
    for t0 in _rational_roots(coeffs):
        best = min(best, linalg.rank(_pencil(M, t0)))
    return best


def tuple_rank(M: MatrixTuple, mode: str = "exact", samples: int = 20, rng_seed=0) -> TupleRank:
    """min over projective c of rank(sum c_i M_i).

    mode "exact" works over the rationals for p <= 2 and sizes <= 8.
    mode "randomized" returns the minimum over `samples` random c: an
    upper bound on the true value, tagged kind="upper".
    """
    if mode == "exact":
        if M.p > 2 or max(M.shape) > EXACT_MAX_SIZE:
            raise ValueError("exact tuple rank needs p <= 2 and size <= %d" % EXACT_MAX_SIZE)
        if any(isinstance(x, ModP) for m in M.mats for row in m for x in row):
            raise ValueError("exact tuple rank is implemented over the rationals only")
        return TupleRank(_exact_rank(M), "exact")
    if mode in ("randomized", "randomized_lower_bound", "upper"):
        rng = random.Random(rng_seed)
        best = min(M.shape)
        for _ in range(samples):
            c = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(M.p)]
            if any(c):
                best = min(best, linalg.rank(M.combination(c)))
        return TupleRank(best, "upper")
    raise ValueError("unknown mode %r" % mode)


# independent vectors and subspaces

def images_independent(M: MatrixTuple, v: Sequence) -> bool:
    return linalg.rank(M.images(v)) == M.p


def find_independent_vector(M: MatrixTuple, rng_seed=0, max_attempts: int = 100,
                            bound: int = 10 ** 3) -> List[object]:
    """v with M_1 v, ..., M_p v linearly independent (checked exactly)."""
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    n2 = M.shape[1]
    for attempt in range(max_attempts):
        v = [rng.randint(-bound, bound) for _ in range(n2)]
        if images_independent(M, v):
            log.debug("independent vector found after %d attempts", attempt + 1)
            return v
    raise TupleRankError("no vector with independent images in %d attempts" % max_attempts)


def image_dimension(M: MatrixTuple, V: Sequence[Sequence]) -> int:
    vecs = [w for v in V for w in M.images(v)]
    return linalg.rank(vecs) if vecs else 0


def _quotient_coords(W: List[List[object]], n1: int):
    """Complement indices C and a map y -> coordinates of y mod W on e_C."""
    C = linalg.complete_basis(W, n1)
    basis = [list(w) for w in W] + [[1 if i == c else 0 for i in range(n1)] for c in C]
    inv = linalg.inverse(linalg.transpose(basis))
    k = len(W)

    def coords(y):
        full = linalg.matvec(inv, y)
        return full[k:]

    return C, coords


def find_subspace(M: MatrixTuple, l: int, rng_seed=0, max_attempts: int = 100) -> List[List[object]]:
    """Basis of V (dim l) with dim(M_1 V + ... + M_p V) = p l, by quotient recursion."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    V = _find_subspace(M, l, rng, max_attempts)
    if image_dimension(M, V) != M.p * l or (V and linalg.rank(V) != l):
        raise TupleRankError("subspace verification failed")
    return V


def _find_subspace(M: MatrixTuple, l: int, rng, max_attempts) -> List[List[object]]:
    if l == 0:
        return []
    v = find_independent_vector(M, rng, max_attempts)
    if l == 1:
        return [v]
    n1, n2 = M.shape
    W = M.images(v)
    C, coords = _quotient_coords(W, n1)
    k = next(i for i, x in enumerate(v) if x != 0)
    keep = [j for j in range(n2) if j != k]
    mats = []
    for m in M.mats:
        cols = [coords([m[i][j] for i in range(n1)]) for j in keep]
        mats.append(linalg.transpose(cols) if C else [])
    if not C:
        raise TupleRankError("quotient is zero; rank hypothesis violated")
    sub = _find_subspace(MatrixTuple(mats), l - 1, rng, max_attempts)
    lifted = []
    for w in sub:
        full = [0] * n2
        for j, x in zip(keep, w):
            full[j] = x
        lifted.append(full)
    return [v] + lifted


# normal form

def _block_diag(a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    out = linalg.zeros(na + nb, na + nb)
    for i in range(na):
        out[i][:na] = a[i]
    for i in range(nb):
        out[na + i][na:] = b[i]
    return out


def _complete(vectors: List[List[object]], dim: int) -> Matrix:
    """Square matrix whose first columns are `vectors`, completed by unit vectors."""
    extra = linalg.complete_basis(vectors, dim)
    cols = [list(v) for v in vectors] + [[1 if i == e else 0 for i in range(dim)] for e in extra]
    return linalg.transpose(cols)


def pin_blocks(x: TotPoint) -> Tuple[Matrix, Matrix]:
    """left, right with left x^col = [0; I_n] and x^row right = [0 I_m]."""
    N, n, m = x.N, x.n, x.m
    if n:
        cols = linalg.transpose(x.col)
        if linalg.rank(cols) != n:
            raise TupleRankError("x^col is not of full rank")
        extra = linalg.complete_basis(cols, N)
        basis = [[1 if i == e else 0 for i in range(N)] for e in extra] + cols
        left = linalg.inverse(linalg.transpose(basis))
    else:
        left = linalg.identity(N)
    if m:
        if linalg.rank(x.row) != m:
            raise TupleRankError("x^row is not of full rank")
        extra = linalg.complete_basis(x.row, N)
        rows = [[1 if i == e else 0 for i in range(N)] for e in extra] + [list(r) for r in x.row]
        right = linalg.inverse(rows)
    else:
        right = linalg.identity(N)
    return left, right


def target_pattern(x: TotPoint, l: int, p: Optional[int] = None) -> bool:
    """The normal-form shape: pinned blocks, and column block 0..l-1 of M_i equal to E_i.

    E_i has I_l in rows (i-1)l..il-1 and zeros elsewhere.
    """
    N, n, m = x.N, x.n, x.m
    p = x.ma.p if p is None else p
    for i in range(N):
        for j in range(n):
            want = 1 if i - (N - n) == j else 0
            if x.col[i][j] != want:
                return False
    for i in range(m):
        for j in range(N):
            want = 1 if j - (N - m) == i else 0
            if x.row[i][j] != want:
                return False
    for k, mat in enumerate(x.ma.mats):
        for i in range(N):
            for j in range(l):
                want = 1 if i == k * l + j else 0
                if mat[i][j] != want:
                    return False
    return True


def normal_form(x: TotPoint, l: int, rng_seed=0, max_attempts: int = 100
                ) -> Tuple[TotPoint, Matrix, Matrix]:
    """Move x by GL_N x GL_N into the normal form; returns (x~, left, right)."""
    N, n, m, p = x.N, x.n, x.m, x.ma.p
    if N < n + m + p * l:
        raise TupleRankError("need N >= n + m + p l")
    L0, R0 = pin_blocks(x)
    log.debug("pinned x^col and x^row")
    y = x.act(L0, R0)
    top = MatrixTuple([[row[:N - m] for row in mat[:N - n]] for mat in y.ma.mats])
    V = find_subspace(top, l, rng_seed, max_attempts)
    log.debug("found V of dim %d with image of dim %d", l, p * l)
    # columns: V into the first l coordinates (only the first N - m columns move)
    R1 = _block_diag(_complete(V, N - m), linalg.identity(m))
    W = [w for k in range(p) for w in (linalg.matvec(top.mats[k], v) for v in V)]
    # rows: W onto e_1..e_pl (only the first N - n rows move)
    L1 = _block_diag(linalg.inverse(_complete(W, N - n)), linalg.identity(n))
    y = y.act(L1, R1)
    log.debug("moved V and W to coordinate subspaces")
    # clear the first l columns below row pl, using rows 0..pl-1
    L2 = linalg.identity(N)
    for b in range(p * l, N):
        for k in range(p):
            for j in range(l):
                c = y.ma.mats[k][b][j]
                if c != 0:
                    L2[b][k * l + j] = L2[b][k * l + j] - c
                    log.debug("row %d -= %s * row %d", b, c, k * l + j)
    y = y.act(L2, linalg.identity(N))
    left = linalg.matmul(L2, linalg.matmul(L1, L0))
    right = linalg.matmul(R0, R1)
    if not target_pattern(y, l):
        raise AssertionError("normal form pattern not reached")
    return y, left, right


def recover(x_tilde: TotPoint, left: Matrix, right: Matrix) -> TotPoint:
    """Undo normal_form."""
    return x_tilde.act(linalg.inverse(left), linalg.inverse(right))
