"""Sparse alternating tensors over the spaces V_{n,p}.

A space V_{n,p} has basis labels -n..-1, 1..p (zero is skipped).  Tensors
over the primal basis use x-labels, tensors over the dual basis use
e-labels; the two are paired so that <e_I, x_J> = [I == J].
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .scalar import normalize

IndexSet = Tuple[int, ...]


class SpaceMismatchError(ValueError):
    pass


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class SpaceSpec:
    n: int
    p: int
    basis: str = "x"

    def __post_init__(self):
        if self.n < 0 or self.p < 0:
            raise ValueError("negative space dimensions")
        if self.basis not in ("x", "e"):
            raise ValueError("basis must be 'x' or 'e'")

    @property
    def dim(self) -> int:
        return self.n + self.p

    def labels(self) -> Tuple[int, ...]:
        return tuple(range(-self.n, 0)) + tuple(range(1, self.p + 1))

    def __contains__(self, label: int) -> bool:
        return label != 0 and -self.n <= label <= self.p

    def dual(self) -> "SpaceSpec":
        return SpaceSpec(self.n, self.p, "e" if self.basis == "x" else "x")

    def same_shape(self, other: "SpaceSpec") -> bool:
        return self.n == other.n and self.p == other.p


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of the permutation sorting the concatenation a + b (both sorted, disjoint)."""
    inversions = 0
    for y in b:
        inversions += len(a) - bisect_right(a, y)
    return -1 if inversions & 1 else 1


def _check_index_set(I: Sequence[int], space: SpaceSpec):
    for i, j in zip(I, I[1:]):
        if not i < j:
            raise ValueError("index set %r not strictly increasing" % (I,))
    for i in I:
        if i not in space:
            raise ValueError("label %d not in V_{%d,%d}" % (i, space.n, space.p))


class AltTensor:
    """Element of the degree-`degree` exterior power of a space, stored sparsely."""

    __slots__ = ("degree", "space", "coeffs")

    def __init__(self, space: SpaceSpec, degree: int,
                 coeffs: Optional[Mapping[IndexSet, object]] = None, check: bool = True):
        if degree < 0 or degree > space.dim:
            raise DegreeError("degree %d out of range for dim %d" % (degree, space.dim))
        clean: Dict[IndexSet, object] = {}
        for I, c in (coeffs or {}).items():
            I = tuple(I)
            if check:
                if len(I) != degree:
                    raise DegreeError("index set %r has wrong length" % (I,))
                _check_index_set(I, space)
            if c != 0:
                clean[I] = normalize(c)
        self.degree = degree
        self.space = space
        self.coeffs = dict(sorted(clean.items()))

    # construction helpers

    @classmethod
    def zero(cls, space: SpaceSpec, degree: int) -> "AltTensor":
        return cls(space, degree, {})

    @classmethod
    def basis_tensor(cls, space: SpaceSpec, labels: Iterable[int], coeff=1) -> "AltTensor":
        labels = tuple(labels)
        I = tuple(sorted(labels))
        if len(set(I)) != len(I):
            return cls(space, len(I), {})
        sign = _perm_sign(labels)
        return cls(space, len(I), {I: sign * coeff})

    @classmethod
    def vector(cls, space: SpaceSpec, coords: Mapping[int, object]) -> "AltTensor":
        return cls(space, 1, {(i,): c for i, c in coords.items()})

    @classmethod
    def scalar(cls, space: SpaceSpec, c) -> "AltTensor":
        return cls(space, 0, {(): c})

    # arithmetic

    def _same(self, other: "AltTensor"):
        if self.space != other.space:
            raise SpaceMismatchError("%r vs %r" % (self.space, other.space))
        if self.degree != other.degree:
            raise DegreeError("degree %d vs %d" % (self.degree, other.degree))

    def __add__(self, other: "AltTensor") -> "AltTensor":
        self._same(other)
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out.get(I, 0) + c
        return AltTensor(self.space, self.degree, out, check=False)

    def __sub__(self, other: "AltTensor") -> "AltTensor":
        return self + (-other)

    def __neg__(self) -> "AltTensor":
        return AltTensor(self.space, self.degree, {I: -c for I, c in self.coeffs.items()}, check=False)

    def scale(self, c) -> "AltTensor":
        return AltTensor(self.space, self.degree, {I: c * v for I, v in self.coeffs.items()}, check=False)

    def __rmul__(self, c) -> "AltTensor":
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, AltTensor):
            return NotImplemented
        return (self.space == other.space and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.space, self.degree, tuple(self.coeffs.items())))

    def __getitem__(self, I) -> object:
        return self.coeffs.get(tuple(I), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = " + ".join("%s*%s%s" % (c, self.space.basis, list(I)) for I, c in self.coeffs.items())
        return "AltTensor(V_{%d,%d}^%s, deg %d: %s)" % (
            self.space.n, self.space.p, self.space.basis, self.degree, terms or "0")

    def dense(self):
        """All coefficients in lexicographic order of index sets (zeros included)."""
        return [self[I] for I in combinations(self.space.labels(), self.degree)]


def _perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


def wedge(a: AltTensor, b: AltTensor) -> AltTensor:
    if a.space != b.space:
        raise SpaceMismatchError("wedge of tensors over different spaces")
    deg = a.degree + b.degree
    if deg > a.space.dim:
        raise DegreeError("degree %d exceeds dimension %d" % (deg, a.space.dim))
    out: Dict[IndexSet, object] = {}
    for I, c in a.coeffs.items():
        sI = set(I)
        for J, d in b.coeffs.items():
            if sI.intersection(J):
                continue
            K = tuple(sorted(I + J))
            out[K] = out.get(K, 0) + merge_sign(I, J) * c * d
    return AltTensor(a.space, deg, out, check=False)


@dataclass(frozen=True)
class LinearMap:
    """Dense matrix; rows follow codomain labels, columns follow domain labels."""

    domain: SpaceSpec
    codomain: SpaceSpec
    matrix: Tuple[Tuple[object, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.codomain.dim or any(len(r) != self.domain.dim for r in m):
            raise ValueError("matrix shape does not match %r -> %r" % (self.domain, self.codomain))

    @classmethod
    def identity(cls, space: SpaceSpec) -> "LinearMap":
        d = space.dim
        return cls(space, space, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    def column(self, label: int) -> Dict[int, object]:
        j = self.domain.labels().index(label)
        return {l: row[j] for l, row in zip(self.codomain.labels(), self.matrix) if row[j] != 0}

    def entry(self, row_label: int, col_label: int):
        return self.matrix[self.codomain.labels().index(row_label)][self.domain.labels().index(col_label)]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other."""
        if other.codomain.labels() != self.domain.labels():
            raise SpaceMismatchError("cannot compose")
        from .linalg import matmul
        return LinearMap(other.domain, self.codomain, matmul(self.matrix, other.matrix))


class OpCounter:
    """Tally of scalar multiplications performed by a kernel."""

    def __init__(self):
        self.mults = 0


def _wedge_vector(partial: Dict[IndexSet, object], vec: Sequence[Tuple[int, object]], counter=None):
    out: Dict[IndexSet, object] = {}
    for T, c in partial.items():
        for l, v in vec:
            pos = bisect_right(T, l)
            if pos and T[pos - 1] == l:
                continue
            K = T[:pos] + (l,) + T[pos:]
            term = c * v
            if (len(T) - pos) & 1:
                term = -term
            out[K] = out.get(K, 0) + term
    if counter is not None:
        counter.mults += len(partial) * len(vec)
    return {K: c for K, c in out.items() if c != 0}


def apply_exterior_power(phi: LinearMap, omega: AltTensor, rows: Optional[Iterable[int]] = None,
                         counter: Optional[OpCounter] = None) -> AltTensor:
    """Apply the exterior power of `phi` to `omega`.

    With `rows`, only coefficients at index sets inside `rows` are computed;
    the result is then the composite with the coordinate projection onto
    those codomain labels.
    """
    if not omega.space.same_shape(phi.domain):
        raise SpaceMismatchError("tensor does not live in the map's domain")
    if omega.degree > phi.codomain.dim:
        raise DegreeError("degree exceeds codomain dimension")
    keep = set(phi.codomain.labels()) if rows is None else set(rows)
    row_labels = phi.codomain.labels()
    cols = {}
    for j, label in enumerate(phi.domain.labels()):
        cols[label] = [(l, row[j]) for l, row in zip(row_labels, phi.matrix)
                       if l in keep and row[j] != 0]
    # prefix products are shared between lexicographically adjacent terms
    cache: Dict[IndexSet, Dict[IndexSet, object]] = {(): {(): 1}}

    def prefix(K: IndexSet):
        got = cache.get(K)
        if got is None:
            got = _wedge_vector(prefix(K[:-1]), cols[K[-1]], counter)
            cache[K] = got
        return got

    out: Dict[IndexSet, object] = {}
    for K, c in omega.coeffs.items():
        for T, v in prefix(K).items():
            out[T] = out.get(T, 0) + c * v
        if counter is not None:
            counter.mults += len(cache[K])
    return AltTensor(phi.codomain, omega.degree, out, check=False)


def pairing(xi: AltTensor, omega: AltTensor):
    """<xi, omega> for xi over the dual of omega's space; <e_I, x_J> = [I == J]."""
    if not xi.space.same_shape(omega.space) or xi.space.basis == omega.space.basis:
        raise SpaceMismatchError("pairing needs a space and its dual")
    if xi.degree != omega.degree:
        raise DegreeError("pairing of different degrees")
    small, big = (xi, omega) if len(xi) <= len(omega) else (omega, xi)
    total = 0
    for I, c in small.coeffs.items():
        d = big.coeffs.get(I)
        if d is not None:
            total = total + c * d
    return total


def hodge_dual(omega: AltTensor, normalization=1) -> AltTensor:
    """Hodge dual with psi = `normalization` times the top coefficient.

    x_I maps to sgn(I, I^c) * normalization * e_{I^c}, where x_I ^ x_{I^c}
    equals sgn(I, I^c) times the top basis tensor.
    """
    if normalization == 0:
        raise ValueError("zero normalization")
    labels = omega.space.labels()
    out = {}
    for I, c in omega.coeffs.items():
        sI = set(I)
        Ic = tuple(l for l in labels if l not in sI)
        out[Ic] = merge_sign(I, Ic) * normalization * c
    return AltTensor(omega.space.dual(), omega.space.dim - omega.degree, out, check=False)


def extended_space(space: SpaceSpec, new_label: int) -> SpaceSpec:
    if new_label in space:
        raise ValueError("label %d already present" % new_label)
    if new_label == space.p + 1:
        return SpaceSpec(space.n, space.p + 1, space.basis)
    if new_label == -(space.n + 1):
        return SpaceSpec(space.n + 1, space.p, space.basis)
    raise ValueError("label %d does not extend V_{%d,%d}" % (new_label, space.n, space.p))


def tensor_up(omega: AltTensor, new_label: int) -> AltTensor:
    """omega ^ w in the space extended by the basis vector w = `new_label`."""
    space = extended_space(omega.space, new_label)
    out = {}
    for J, c in omega.coeffs.items():
        pos = bisect_right(J, new_label)
        sign = -1 if (len(J) - pos) & 1 else 1
        out[J[:pos] + (new_label,) + J[pos:]] = sign * c
    return AltTensor(space, omega.degree + 1, out, check=False)


def contract_lemma(xi: AltTensor, w_label: int) -> AltTensor:
    """Contraction map dual to `tensor_up`.

    x_1 ^ ... ^ x_{p+1}  ->  sum_i (-1)^(p+1-i) x_i(w) * restriction of
    (x_1 ^ .. x_i omitted .. ^ x_{p+1}), with w the basis vector `w_label`.
    """
    space = xi.space
    if w_label == space.p and space.p > 0:
        small = SpaceSpec(space.n, space.p - 1, space.basis)
    elif w_label == -space.n and space.n > 0:
        small = SpaceSpec(space.n - 1, space.p, space.basis)
    else:
        raise ValueError("w must be an extreme basis label of the space")
    if xi.degree == 0:
        raise DegreeError("cannot contract a degree-0 tensor")
    p = xi.degree - 1
    out = {}
    for J, c in xi.coeffs.items():
        if w_label not in J:
            continue
        i = J.index(w_label) + 1
        sign = -1 if (p + 1 - i) & 1 else 1
        out[tuple(l for l in J if l != w_label)] = sign * c
    return AltTensor(small, p, out, check=False)


def interior_product(omega: AltTensor, xi: AltTensor) -> AltTensor:
    """Contract omega (degree p) with xi (degree q <= p) over the dual space.

    Basis covectors act from the first factor of xi onwards, each removing
    its label with the sign of the label's position.
    """
    if not xi.space.same_shape(omega.space) or xi.space.basis == omega.space.basis:
        raise SpaceMismatchError("interior product needs dual spaces")
    if xi.degree > omega.degree:
        raise DegreeError("cannot contract degree %d with degree %d" % (omega.degree, xi.degree))
    out: Dict[IndexSet, object] = {}
    for J, d in xi.coeffs.items():
        sJ = set(J)
        for I, c in omega.coeffs.items():
            if not sJ.issubset(I):
                continue
            cur = list(I)
            sign = 1
            for j in J:
                pos = cur.index(j)
                if pos & 1:
                    sign = -sign
                del cur[pos]
            K = tuple(cur)
            out[K] = out.get(K, 0) + sign * c * d
    return AltTensor(omega.space, omega.degree - xi.degree, out, check=False)


def relabel_to_instance(omega: AltTensor, basis: str = "e") -> AltTensor:
    """Identify the ambient space (any labels, dimension d) with V_{d-p,p}.

    The bijection is order preserving, so coefficients keep their signs.
    """
    d, p = omega.space.dim, omega.degree
    target = SpaceSpec(d - p, p, basis)
    mapping = dict(zip(omega.space.labels(), target.labels()))
    return AltTensor(target, p, {tuple(mapping[i] for i in I): c for I, c in omega.coeffs.items()},
                     check=False)
