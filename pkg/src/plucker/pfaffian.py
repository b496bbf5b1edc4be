"""Pfaffians: numeric, symbolic, and the coordinate-reconstruction identities.

The symbolic families live on the dual infinite wedge.  ``pf_poly(r)`` is
the Pfaffian of the skew matrix (x_{i,j}) over the labels
-2(r-1)..-1, 1, 2, where x_{i,j} stands for x_{i,j,3,4,...}.
``pf_star_poly(s)`` is its dual counterpart on the degree 2(s-1) power of
V_{2,2(s-1)}^*, cutting out the tensors that are not of full rank.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .exterior import AltTensor, merge_sign
from .linalg import rank
from .maya import (MayaIndex, MayaPoly, derive_poly, enumerate_index, is_good, leq, lt)


class SkewMatrix:
    """Skew-symmetric matrix stored by its strict upper triangle."""

    __slots__ = ("size", "upper")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError("nonzero diagonal entry at %d" % i)
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("not skew-symmetric at (%d, %d)" % (i, j))
        self.size = n
        self.upper = {(i, j): rows[i][j] for i in range(n) for j in range(i + 1, n)}

    @classmethod
    def from_upper(cls, size: int, entries: Dict[Tuple[int, int], object]) -> "SkewMatrix":
        """Build from {(i, j): a_ij} with i < j; missing entries are zero."""
        m = cls.__new__(cls)
        m.size = size
        m.upper = {(i, j): 0 for i in range(size) for j in range(i + 1, size)}
        for (i, j), a in entries.items():
            if not 0 <= i < j < size:
                raise ValueError("upper-triangle index (%d, %d) out of range" % (i, j))
            m.upper[(i, j)] = a
        return m

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return 0
        return self.upper[(i, j)] if i < j else -self.upper[(j, i)]

    def rows(self):
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]


def _pfaffian_entries(n: int, entry, zero=0):
    """Pfaffian by first-row expansion, memoized on the remaining index set."""
    if n % 2:
        return zero
    memo = {0: 1}

    def pf(mask: int):
        got = memo.get(mask)
        if got is not None:
            return got
        idx = [i for i in range(n) if mask >> i & 1]
        first = idx[0]
        total = zero
        for pos, j in enumerate(idx[1:]):
            a = entry(first, j)
            if a == 0:
                continue
            sub = pf(mask & ~(1 << first) & ~(1 << j))
            if sub == 0:
                continue
            term = a * sub
            total = total - term if pos & 1 else total + term
        memo[mask] = total
        return total

    return pf((1 << n) - 1)


def pfaffian(A: SkewMatrix):
    """Pfaffian with Pf(A)^2 = det(A); odd sizes give 0."""
    # zero of the entries' field, so F_p input never yields a bare int
    zero = next((a - a for a in A.upper.values()), 0)
    return _pfaffian_entries(A.size, lambda i, j: A.upper[(i, j)], zero)


def skew_matrix_of(omega: AltTensor) -> Tuple[List[int], SkewMatrix]:
    """Labels and coefficient matrix of a 2-form."""
    if omega.degree != 2:
        raise ValueError("two-forms only")
    labels = list(omega.space.labels())
    pos = {l: k for k, l in enumerate(labels)}
    return labels, SkewMatrix.from_upper(len(labels), {(pos[i], pos[j]): c for (i, j), c in omega.coeffs.items()})


def two_form_rank(omega: AltTensor) -> int:
    """Minimal number of pure summands: half the rank of the coefficient matrix."""
    if omega.is_zero():
        return 0
    _, A = skew_matrix_of(omega)
    return rank(A.rows()) // 2


def pair_variable(i: int, j: int) -> MayaIndex:
    """x_{i,j} = x_{i,j,3,4,...} for labels i < j <= 2."""
    return MayaIndex.from_members((i, j), 2)


def _pf_labels(r: int) -> List[int]:
    return list(range(-2 * (r - 1), 0)) + [1, 2]


@lru_cache(maxsize=None)
def pf_poly(r: int) -> MayaPoly:
    """The Pfaffian Pf_r, of degree r; pf_poly(1) = x_{1,2}."""
    if r < 1:
        raise ValueError("r must be at least 1")
    labels = _pf_labels(r)
    var = {(a, b): MayaPoly.var(pair_variable(labels[a], labels[b]))
           for a in range(len(labels)) for b in range(a + 1, len(labels))}
    return _pfaffian_entries(len(labels), lambda a, b: var[(a, b)], MayaPoly())


def star_variable(K: Sequence[int], s: int) -> MayaIndex:
    """x_K on the degree 2(s-1) power of V_{2,2(s-1)}^*: K union {2s-1, 2s, ...}."""
    return MayaIndex.from_members(K, 2 * (s - 1))


def _star_pullback(s: int) -> MayaPoly:
    # Pf_s composed with the Hodge dual and the swap x_a -> x_{-a}, before rescaling
    space_labels = [-2, -1] + list(range(1, 2 * (s - 1) + 1))
    subst = {}
    for i in _pf_labels(s):
        for j in _pf_labels(s):
            if i >= j:
                continue
            pair = (-j, -i)
            K = tuple(l for l in space_labels if l not in pair)
            sign = -merge_sign(K, pair)
            subst[pair_variable(i, j)] = MayaPoly.var(star_variable(K, s)) * sign
    return MayaPoly(pf_poly(s).substitute(subst).terms, _canonical=True)


def star_minimal_variable(s: int) -> MayaIndex:
    """x_{-2,-1,1,...,2s-4}: the smallest variable of pf_star_poly(s), s >= 2."""
    return star_variable((-2, -1) + tuple(range(1, 2 * s - 3)), s)


@lru_cache(maxsize=None)
def pf_star_poly(s: int) -> MayaPoly:
    """The dual Pfaffian, scaled so its leading coefficient is pf_star_poly(s - 1)."""
    if s < 1:
        raise ValueError("s must be at least 1")
    if s == 1:
        return MayaPoly.var(pair_variable(1, 2))
    raw = _star_pullback(s)
    lead, _ = raw.split(star_minimal_variable(s))
    prev = pf_star_poly(s - 1)
    if lead == prev:
        return raw
    if lead == -prev:
        return -raw
    raise AssertionError("dual Pfaffian recursion fails at s=%d" % s)


def minimal_variables(f: MayaPoly) -> List[MayaIndex]:
    vs = f.variables()
    return [v for v in vs if not any(lt(w, v) for w in vs)]


def check_recursion(r: int) -> Tuple[MayaPoly, bool]:
    """Q_{r+1} = Pf_{r+1} - x_{-2r,-2r+1} Pf_r and whether the recursion's claims hold."""
    if r < 1:
        raise ValueError("r must be at least 1")
    m = pair_variable(-2 * r, -2 * r + 1)
    return _check(pf_poly(r + 1), m, pf_poly(r))


def check_star_recursion(s: int) -> Tuple[MayaPoly, bool]:
    """Dual version: Q*_{s+1} = Pf*_{s+1} - x_{-2,-1,1,...,2s-2} Pf*_s."""
    if s < 1:
        raise ValueError("s must be at least 1")
    m = star_minimal_variable(s + 1)
    return _check(pf_star_poly(s + 1), m, pf_star_poly(s))


def _check(full: MayaPoly, m: MayaIndex, prev: MayaPoly):
    q = full - MayaPoly.var(m) * prev
    ok = minimal_variables(full) == [m]
    ok = ok and all(lt(m, v) for v in q.variables())
    ok = ok and all(lt(m, v) for v in prev.variables())
    return q, ok


def derivation_word(I: MayaIndex, base: MayaIndex, length: int) -> List[Tuple[int, int]]:
    """Word D with D x_base = x_I that moves the j-th element of base to i_j.

    Listed in application order reversed, so the first pair acts last.
    """
    count = max(length, base.top + len(base.neg), I.top + len(I.neg))
    target = enumerate_index(I, count)
    source = enumerate_index(base, count)
    last = max([length] + [j + 1 for j in range(count) if target[j] != source[j]])
    steps = [(target[j], source[j]) for j in range(last)]
    return steps[::-1]


def reconstruction_case(I: MayaIndex, r: int, s: int) -> str:
    if I.charge != 0:
        raise ValueError("charge-0 index required")
    if r < 1 or s < 1:
        raise ValueError("r and s must be at least 1")
    if is_good(I, r, s):
        raise ValueError("%s is good for (r, s) = (%d, %d)" % (I, r, s))
    low = sum(1 for i in enumerate_index(I, len(I.neg)) if i <= -2 * r + 1)
    return "pf" if low > 1 else "star"


def reconstruction_data(I: MayaIndex, r: int, s: int):
    """(polynomial, minimal variable, coefficient C, derivation word) for a bad I."""
    if reconstruction_case(I, r, s) == "pf":
        base = pair_variable(-2 * r, -2 * r + 1)
        full, coeff, length = pf_poly(r + 1), pf_poly(r), 2
    else:
        base = star_minimal_variable(s + 1)
        full, coeff, length = pf_star_poly(s + 1), pf_star_poly(s), 2 * s
    if not leq(I, base):
        raise AssertionError("bad index above the minimal variable")
    return full, base, coeff, derivation_word(I, base, length)


def reconstruction_equation(I: MayaIndex, r: int, s: int) -> MayaPoly:
    """D applied to the relevant Pfaffian: x_I * C + P + D Q, vanishing on Y^{r,s}."""
    full, _, _, word = reconstruction_data(I, r, s)
    return derive_poly(word, full)
