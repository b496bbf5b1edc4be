"""Infinite-wedge combinatorics in charges -1, 0, +1.

A :class:`MayaIndex` is a cocompact subset I of the nonzero integers that
contains every large enough positive integer.  It is stored as the finite
set of negative members plus the finite set of missing positive labels.
Charge-0 indices name the coordinates x_I on the dual infinite wedge; a
finite tensor in the degree-p power of V_{n,p}^* is read through its lift
omega ^ e_{p+1} ^ e_{p+2} ^ ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .exterior import AltTensor, SpaceSpec
from .poly import Polynomial


class ChargeError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class MayaIndex:
    neg: Tuple[int, ...] = ()
    absent: Tuple[int, ...] = ()

    def __post_init__(self):
        neg = tuple(sorted(self.neg))
        absent = tuple(sorted(self.absent))
        if len(set(neg)) != len(neg) or any(i >= 0 for i in neg):
            raise ValueError("neg must hold distinct negative integers")
        if len(set(absent)) != len(absent) or any(i <= 0 for i in absent):
            raise ValueError("absent must hold distinct positive integers")
        object.__setattr__(self, "neg", neg)
        object.__setattr__(self, "absent", absent)

    @classmethod
    def from_members(cls, members: Iterable[int], p: int) -> "MayaIndex":
        """I = members union {p+1, p+2, ...}; members must lie at or below p."""
        members = set(members)
        if 0 in members or any(m > p for m in members):
            raise ValueError("members must be nonzero labels <= %d" % p)
        return cls(tuple(m for m in members if m < 0),
                   tuple(i for i in range(1, p + 1) if i not in members))

    @classmethod
    def parse(cls, text: str) -> "MayaIndex":
        m = re.fullmatch(r"\s*neg=\[([^\]]*)\]\s+absent=\[([^\]]*)\]\s*", text)
        if not m:
            raise ValueError("cannot parse Maya index %r" % text)
        ints = lambda s: tuple(int(t) for t in s.split(",") if t.strip())
        return cls(ints(m.group(1)), ints(m.group(2)))

    @property
    def charge(self) -> int:
        return len(self.neg) - len(self.absent)

    @property
    def top(self) -> int:
        """Smallest p >= 0 with {p+1, p+2, ...} inside I."""
        return self.absent[-1] if self.absent else 0

    def __contains__(self, i: int) -> bool:
        if i < 0:
            return i in self.neg
        return i > 0 and i not in self.absent

    def members(self, p: Optional[int] = None) -> Tuple[int, ...]:
        """Members up to p (default: up to `top`)."""
        if p is None:
            p = self.top
        absent = set(self.absent)
        return self.neg + tuple(i for i in range(1, p + 1) if i not in absent)

    def partition(self) -> Tuple[int, ...]:
        return partition_of(self)

    def sort_key(self):
        return (partition_of(self) if self.charge == 0 else (), self.charge, self.neg, self.absent)

    def __lt__(self, other: "MayaIndex"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "neg=[%s] absent=[%s]" % (",".join(map(str, self.neg)), ",".join(map(str, self.absent)))

    def shorthand(self, p: Optional[int] = None) -> str:
        """The x[...] name at degree p: members up to p, implicitly followed by p+1, p+2, ..."""
        if p is None:
            p = self.top
        return "x[%s]" % ",".join(map(str, self.members(p)))


VACUUM = MayaIndex()


def _shift(i: int) -> int:
    # close the gap at zero so positions run through consecutive integers
    return i + 1 if i < 0 else i


def _unshift(j: int) -> int:
    return j - 1 if j <= 0 else j


def enumerate_index(I: MayaIndex, count: int) -> Tuple[int, ...]:
    """The `count` smallest elements of I."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    out = list(I.neg[:count])
    i = 1
    absent = set(I.absent)
    while len(out) < count:
        if i not in absent:
            out.append(i)
        i += 1
    return tuple(out)


def _stable_length(I: MayaIndex) -> int:
    # beyond this position i_k = k + charge shift is constant
    return len(I.neg) + I.top + 1


def partition_of(I: MayaIndex) -> Tuple[int, ...]:
    """Young diagram of a charge-0 index via the lattice-path bijection.

    Labels skip 0, so with positions i' = i + 1 for negative i and i' = i
    otherwise the parts are lambda_k = k - i'_k.
    """
    if I.charge != 0:
        raise ChargeError("partition_of needs charge 0, got %d" % I.charge)
    elems = enumerate_index(I, _stable_length(I))
    parts = [k - _shift(i) for k, i in enumerate(elems, start=1)]
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def index_of_partition(parts: Sequence[int]) -> MayaIndex:
    """Inverse of :func:`partition_of`."""
    parts = tuple(parts)
    if any(a < b for a, b in zip(parts, parts[1:])) or any(x <= 0 for x in parts):
        raise ValueError("not a partition: %r" % (parts,))
    elems = [_unshift(k - lam) for k, lam in enumerate(parts, start=1)]
    p = max([len(parts)] + [e for e in elems if e > 0])
    elems += [k for k in range(len(parts) + 1, p + 1)]
    return MayaIndex.from_members(elems, p)


def leq(I: MayaIndex, J: MayaIndex) -> bool:
    """x_I <= x_J iff i_k <= j_k for all k."""
    if I.charge != 0 or J.charge != 0:
        raise ChargeError("leq needs charge 0")
    count = max(_stable_length(I), _stable_length(J))
    return all(a <= b for a, b in zip(enumerate_index(I, count), enumerate_index(J, count)))


def lt(I: MayaIndex, J: MayaIndex) -> bool:
    return I != J and leq(I, J)


def permute(perm: Mapping[int, int], I: MayaIndex) -> Tuple[int, MayaIndex]:
    """Action of a finitary permutation: x_I -> sign * x_{perm(I)}."""
    moved = {k: v for k, v in perm.items() if k != v}
    if 0 in moved or 0 in moved.values():
        raise ValueError("permutations must avoid 0")
    if set(moved) != set(moved.values()):
        raise ValueError("malformed permutation")
    bound = max([abs(k) for k in moved] + [I.top, 1])
    members = [i for i in I.members(bound) if i >= -bound]
    image = [moved.get(i, i) for i in members]
    inv = sum(1 for a in range(len(image)) for b in range(a + 1, len(image)) if image[a] > image[b])
    rest = [i for i in I.neg if i < -bound]
    return (-1 if inv & 1 else 1), MayaIndex.from_members(rest + image, bound)


def _count_between(I: MayaIndex, a: int, b: int) -> int:
    lo, hi = min(a, b), max(a, b)
    neg = sum(1 for i in I.neg if lo < i < hi)
    plo, phi = max(lo + 1, 1), hi - 1
    pos = 0
    if phi >= plo:
        pos = (phi - plo + 1) - sum(1 for i in I.absent if plo <= i <= phi)
    return neg + pos


def derive_variable(k: int, l: int, I: MayaIndex) -> Optional[Tuple[int, MayaIndex]]:
    """d_{kl} x_I = x_k * d/dx_l applied to x_I; None when the result is 0."""
    if k == 0 or l == 0:
        raise ValueError("labels are nonzero")
    if k == l:
        return (1, I) if k in I else None
    if k in I or l not in I:
        return None
    sign = -1 if _count_between(I, k, l) & 1 else 1
    bound = max(abs(k), abs(l), I.top)
    members = [i for i in I.members(bound) if i != l] + [k]
    return sign, MayaIndex.from_members(members, bound)


class MayaPoly(Polynomial):
    """Polynomial in the coordinates x_I of the dual infinite wedge."""

    __slots__ = ()

    @classmethod
    def x(cls, *members: int, p: Optional[int] = None) -> "MayaPoly":
        """Variable in subscript shorthand: x(i, j) is x_{i,j,3,4,...}."""
        if p is None:
            p = len(members)
        return cls.var(MayaIndex.from_members(members, p))

    def format(self, degree: Optional[int] = None) -> str:
        if not self.terms:
            return "0"
        if degree is None:
            degree = max([2] + [v.top for v in self.variables()])
        pieces = []
        for mono, c in sorted(self.terms.items(), key=lambda t: _term_key(t[0]), reverse=True):
            body = "*".join(v.shorthand(degree) for v in reversed(mono))
            neg = c < 0 if not hasattr(c, "modulus") else False
            mag = -c if neg else c
            text = body if mag == 1 and body else ("%s*%s" % (mag, body) if body else str(mag))
            pieces.append(("- " if neg else "+ ") + text)
        out = " ".join(pieces)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    __str__ = format


def _term_key(mono):
    # largest diagram first, matching the usual way Pfaffians are written out
    return tuple(v.sort_key() for v in reversed(mono))


def derive_once(k: int, l: int, f: Polynomial) -> MayaPoly:
    out: Dict[tuple, object] = {}
    for mono, c in f.terms.items():
        for pos, v in enumerate(mono):
            got = derive_variable(k, l, v)
            if got is None:
                continue
            sign, w = got
            new = tuple(sorted(mono[:pos] + (w,) + mono[pos + 1:]))
            out[new] = out.get(new, 0) + sign * c
    return MayaPoly(out)


def derive_poly(word: Sequence[Tuple[int, int]], f: Polynomial) -> MayaPoly:
    """Apply derivations d_{k,l}; the word is applied right to left."""
    out = MayaPoly(f.terms, _canonical=True)
    for k, l in reversed(list(word)):
        out = derive_once(k, l, out)
    return out


def plucker_relation(I: MayaIndex, J: MayaIndex) -> MayaPoly:
    """sum_k (-1)^k x_{I minus i_k} (x_{i_k} ^ x_J) for charges +1 and -1."""
    if I.charge != 1 or J.charge != -1:
        raise ChargeError("plucker_relation needs charges (+1, -1), got (%d, %d)"
                          % (I.charge, J.charge))
    bound = max(I.top, J.top, 1)
    members = I.members(bound)
    terms: Dict[tuple, object] = {}
    for k, i in enumerate(members, start=1):
        if i in J:
            continue
        rest = MayaIndex.from_members([m for m in members if m != i], bound)
        below = sum(1 for j in J.neg if j < i)
        if i > 0:
            below += (i - 1) - sum(1 for j in J.absent if j < i)
        sign = (-1) ** k * (-1) ** below
        jm = J.members(bound)
        joined = MayaIndex.from_members(list(jm) + [i], bound)
        mono = tuple(sorted((rest, joined)))
        terms[mono] = terms.get(mono, 0) + sign
    return MayaPoly(terms)


def _check_instance(omega: AltTensor):
    if omega.degree != omega.space.p:
        raise ValueError("instance tensors have degree p on V_{n,p}")


def project_instance(omega: AltTensor, n0: int, p0: int) -> AltTensor:
    """Image of omega in the degree-p0 power of V_{n0,p0}^*."""
    _check_instance(omega)
    n, p = omega.space.n, omega.space.p
    if not (0 <= n0 <= n and 0 <= p0 <= p):
        raise ValueError("(n0, p0) = (%d, %d) outside (%d, %d)" % (n0, p0, n, p))
    tail = tuple(range(p0 + 1, p + 1))
    out = {}
    for I, c in omega.coeffs.items():
        if I[len(I) - len(tail):] != tail or (I and I[0] < -n0):
            continue
        out[I[:len(I) - len(tail)]] = c
    return AltTensor(SpaceSpec(n0, p0, omega.space.basis), p0, out, check=False)


def lift_instance(omega: AltTensor, n: int, p: int) -> AltTensor:
    """omega -> omega ^ e_{p0+1} ^ ... ^ e_p, included in V_{n,p}^*."""
    _check_instance(omega)
    n0, p0 = omega.space.n, omega.space.p
    if n < n0 or p < p0:
        raise ValueError("(n, p) = (%d, %d) smaller than (%d, %d)" % (n, p, n0, p0))
    tail = tuple(range(p0 + 1, p + 1))
    return AltTensor(SpaceSpec(n, p, omega.space.basis), p,
                     {I + tail: c for I, c in omega.coeffs.items()}, check=False)


def coordinate(I: MayaIndex, omega: AltTensor):
    """x_I evaluated on the lift of omega to the dual infinite wedge."""
    n, p = omega.space.n, omega.space.p
    if I.charge != 0:
        raise ChargeError("coordinates are charge 0")
    if I.top > p or (I.neg and I.neg[0] < -n):
        return 0
    return omega[I.members(p)]


def evaluate(f: Polynomial, omega: AltTensor):
    _check_instance(omega)
    return f.evaluate(lambda I: coordinate(I, omega))


def instance_of(f: Polynomial) -> Tuple[int, int]:
    """Smallest (n, p) whose instance carries every variable of f."""
    n = p = 0
    for v in f.variables():
        if v.neg:
            n = max(n, -v.neg[0])
        p = max(p, v.top)
    return n, p


def is_good(I: MayaIndex, r: int, s: int) -> bool:
    if I.charge != 0:
        raise ChargeError("is_good needs charge 0")
    low = sum(1 for i in I.neg if i <= -2 * r + 1)
    if -2 * r + 1 > 0:
        low += sum(1 for i in range(1, -2 * r + 2) if i in I)
    high = sum(1 for i in I.absent if i > 2 * s - 1)
    return low <= 1 and high <= 1


def parse_partition(text: str) -> Tuple[int, ...]:
    text = text.strip()
    return tuple(int(t) for t in text.split(",")) if text else ()


def format_partition(parts: Sequence[int]) -> str:
    return ",".join(map(str, parts))
