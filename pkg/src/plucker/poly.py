"""Sparse commutative polynomials with exact coefficients.

A monomial is a sorted tuple of variables (repeats encode powers), so any
hashable, totally ordered object can serve as a variable.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Mapping, Tuple

Monomial = Tuple[Hashable, ...]


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] = None, _canonical: bool = False):
        if _canonical:
            self.terms = dict(terms)
            return
        clean: Dict[Monomial, object] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted(mono))
            clean[mono] = clean.get(mono, 0) + c
        self.terms = {m: c for m, c in clean.items() if c != 0}

    @classmethod
    def var(cls, v) -> "Polynomial":
        return cls({(v,): 1}, _canonical=True)

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): c} if c != 0 else {}, _canonical=True)

    def _wrap(self, terms):
        return type(self)({m: c for m, c in terms.items() if c != 0}, _canonical=True)

    def _lift(self, other):
        if isinstance(other, Polynomial):
            return other
        return type(self).const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({m: -c for m, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return type(self)()
            return type(self)({m: c * other for m, c in self.terms.items()}, _canonical=True)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, 0) + c1 * c2
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = type(self).const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {(): other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(m)
        return sorted(out)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1

    def coefficient(self, mono) -> object:
        return self.terms.get(tuple(sorted(mono)), 0)

    def split(self, v) -> Tuple["Polynomial", "Polynomial"]:
        """(A, B) with self = v*A + B and v absent from B."""
        a: Dict[Monomial, object] = {}
        b: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            if v in m:
                i = m.index(v)
                a[m[:i] + m[i + 1:]] = c
            else:
                b[m] = c
        return type(self)(a, _canonical=True), type(self)(b, _canonical=True)

    def evaluate(self, value: Callable[[Hashable], object]):
        cache = {}
        total = 0
        for m, c in self.terms.items():
            t = c
            for v in m:
                x = cache.get(v)
                if x is None:
                    x = cache[v] = value(v)
                if x == 0:
                    t = 0
                    break
                t = t * x
            if t != 0:
                total = total + t
        return total

    def substitute(self, mapping: Mapping[Hashable, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials (unmapped variables stay)."""
        out = type(self)()
        for m, c in self.terms.items():
            t = type(self).const(c)
            for v in m:
                t = t * mapping.get(v, type(self).var(v))
            out = out + t
        return out

    def map_variables(self, f: Callable) -> "Polynomial":
        return type(self)({tuple(f(v) for v in m): c for m, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*%s" % (c, "*".join(map(str, m)) or "1") for m, c in self.terms.items())
