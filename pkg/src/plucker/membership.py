"""Membership tests for Grassmannian cones and Pfaffian varieties.

Input tensors live in the degree-p power of some K^d (any labelled
space).  They are identified with the degree-p power of V_{n,p}^*,
n = d - p, by the order-preserving relabelling.  The randomized test
draws g from G_{N,P}, where (N, P) is large enough to also hold each
defining polynomial's base instance (n0, p0).  It applies the exterior
power of g and evaluates the polynomials on the projection to (n0, p0).
A nonzero value proves non-membership.  The symbolic test does the same
with indeterminate matrix entries.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import linalg
from .exterior import (AltTensor, LinearMap, OpCounter, SpaceSpec, apply_exterior_power,
                       interior_product, relabel_to_instance, wedge)
from .maya import MayaIndex, MayaPoly, coordinate, evaluate, lift_instance
from .pfaffian import pf_poly, pf_star_poly, two_form_rank
from .scalar import ModP, div

log = logging.getLogger(__name__)

SAMPLE_BOUND = 10 ** 6
MIN_RANDOM_MODULUS = 2 ** 31
SYMBOLIC_MAX_DIM = 8
# composite degree deg(f) * P in the entries of g, and deg(f) itself; beyond these the
# expansion runs for minutes (Pf*_3 has degree 12 in 36 entries)
SYMBOLIC_MAX_DEGREE = 8
SYMBOLIC_MAX_POLY_DEGREE = 3


class GenericityError(ArithmeticError):
    """The chosen g is not general enough for a reduction step; draw another."""


@dataclass(frozen=True)
class VarietySpec:
    kind: str
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.kind not in ("grassmannian", "pfaffian"):
            raise ValueError("unknown variety kind %r" % self.kind)
        if self.r < 0 or self.s < 0:
            raise ValueError("r and s must be nonnegative")

    @classmethod
    def grassmannian(cls) -> "VarietySpec":
        return cls("grassmannian")

    @classmethod
    def pfaffian(cls, r: int, s: int) -> "VarietySpec":
        return cls("pfaffian", r, s)

    @classmethod
    def secant(cls, k: int) -> "VarietySpec":
        """k-th secant of the Grassmannian; exact for 2-forms only (necessary otherwise)."""
        return cls("pfaffian", k, k)

    @property
    def defining_polys(self) -> List[MayaPoly]:
        if self.kind == "grassmannian":
            return [pf_poly(2)]
        return [pf_poly(self.r + 1), pf_star_poly(self.s + 1)]

    @property
    def instances(self) -> List[Tuple[int, int]]:
        if self.kind == "grassmannian":
            return [(2, 2)]
        return [(2 * self.r, 2), (2, 2 * self.s)]

    @property
    def base_instance(self) -> Tuple[int, int]:
        ins = self.instances
        return max(n for n, _ in ins), max(p for _, p in ins)

    def __str__(self):
        if self.kind == "grassmannian":
            return "Gr"
        return "Y^{%d,%d}" % (self.r, self.s)


@dataclass
class RandomWitness:
    """g in G_{N,P} with f_index(projection of g omega) = value != 0."""

    g: LinearMap
    index: int
    value: object
    trial: int = 0


@dataclass
class PluckerWitness:
    """Basis covector e_xi of degree p-1 with (iota_xi omega) ^ omega != 0 at index set `at`."""

    xi: Tuple[int, ...]
    at: Tuple[int, ...]
    value: object


@dataclass
class RankWitness:
    """The 2-form has rank `rank`, above the secant order."""

    rank: int


@dataclass
class SymbolicWitness:
    index: int
    terms: int


@dataclass
class MembershipVerdict:
    answer: str
    witness: object = None
    method: str = ""

    def __post_init__(self):
        if self.answer not in ("IN", "OUT"):
            raise ValueError("answer must be IN or OUT")
        if self.answer == "OUT" and self.witness is None:
            raise ValueError("OUT verdicts carry a witness")

    @property
    def is_in(self) -> bool:
        return self.answer == "IN"

    def __str__(self):
        return self.answer


def kd_space(d: int, basis: str = "x") -> SpaceSpec:
    """K^d with labels 1..d."""
    return SpaceSpec(0, d, basis)


# pure tensors

@dataclass
class PureDecomposition:
    factors: List[AltTensor]
    scale: object


def _wedge_matrix(omega: AltTensor):
    labels = omega.space.labels()
    cols = []
    for l in labels:
        cols.append(wedge(AltTensor.vector(omega.space, {l: 1}), omega).coeffs)
    rows = sorted({I for c in cols for I in c})
    return labels, [[c.get(I, 0) for c in cols] for I in rows]


def decompose_pure(omega: AltTensor) -> Optional[PureDecomposition]:
    """v_1..v_p and c with omega = c v_1 ^ ... ^ v_p, or None if omega is not pure."""
    if omega.is_zero():
        return PureDecomposition([], 0)
    if omega.degree == 0:
        return PureDecomposition([], omega[()])
    if omega.degree == omega.space.dim:
        labels = omega.space.labels()
        return PureDecomposition([AltTensor.vector(omega.space, {l: 1}) for l in labels], omega[labels])
    labels, m = _wedge_matrix(omega)
    basis = linalg.kernel(m, len(labels)) if m else [
        [1 if i == j else 0 for i in range(len(labels))] for j in range(len(labels))]
    if len(basis) != omega.degree:
        return None
    factors = [AltTensor.vector(omega.space, dict(zip(labels, v))) for v in basis]
    prod = factors[0]
    for f in factors[1:]:
        prod = wedge(prod, f)
    I, w = next(iter(prod.coeffs.items()))
    scale = div(omega[I], w)
    if prod.scale(scale) != omega:
        raise AssertionError("kernel factors do not reproduce the tensor")
    return PureDecomposition(factors, scale)


def plucker_witness(omega: AltTensor) -> Optional[PluckerWitness]:
    """First basis xi of degree p-1 with (iota_xi omega) ^ omega != 0."""
    p = omega.degree
    if p < 2 or omega.is_zero():
        return None
    dual = omega.space.dual()
    support = sorted({l for I in omega.coeffs for l in I})
    for xi in combinations(support, p - 1):
        v = interior_product(omega, AltTensor(dual, p - 1, {xi: 1}))
        if v.is_zero():
            continue
        w = wedge(v, omega)
        if not w.is_zero():
            at, val = next(iter(w.coeffs.items()))
            return PluckerWitness(xi, at, val)
    return None


def grassmannian_deterministic(omega: AltTensor) -> MembershipVerdict:
    """Exact test: In iff omega is 0 or a single wedge of vectors."""
    dec = decompose_pure(omega)
    if dec is not None:
        return MembershipVerdict("IN", method="kernel")
    wit = plucker_witness(omega)
    if wit is None:
        raise AssertionError("kernel test and Plucker quadrics disagree")
    return MembershipVerdict("OUT", wit, method="kernel")


def secant_deterministic(omega: AltTensor, k: int) -> MembershipVerdict:
    """Exact k-th secant test for 2-forms via rank."""
    if omega.degree != 2:
        raise ValueError("exact secant test needs a 2-form")
    r = two_form_rank(omega)
    if r <= k:
        return MembershipVerdict("IN", method="rank")
    return MembershipVerdict("OUT", RankWitness(r), method="rank")


# randomized test

def _field_of_tensor(omega: AltTensor):
    for c in omega.coeffs.values():
        if isinstance(c, ModP):
            return c.modulus
    return None


def random_group_element(space: SpaceSpec, rng: random.Random, bound: int = SAMPLE_BOUND,
                         modulus: Optional[int] = None) -> LinearMap:
    """Invertible matrix with i.i.d. entries uniform in [-bound, bound]."""
    d = space.dim
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)]
        if modulus is not None:
            m = [[ModP(x, modulus) for x in row] for row in m]
        if d == 0 or linalg.det(m) != 0:
            return LinearMap(space, space, m)


def to_instance(omega: AltTensor) -> AltTensor:
    """omega as a tensor in the degree-p power of V_{d-p,p}^*."""
    return relabel_to_instance(omega, "e")


def _rows(n0: int, P: int) -> List[int]:
    return list(range(-n0, 0)) + list(range(1, P + 1))


def evaluate_on_translate(omega: AltTensor, g: LinearMap, poly: MayaPoly, instance: Tuple[int, int],
                          counter: Optional[OpCounter] = None):
    """poly(projection of g . omega), with omega an instance tensor lifted into g's space."""
    N, P = g.domain.n, g.domain.p
    lifted = lift_instance(omega, N, P)
    image = apply_exterior_power(g, lifted, rows=_rows(instance[0], P), counter=counter)
    return evaluate(poly, image)


def randomized_membership(omega: AltTensor, spec: VarietySpec, trials: int = 20, rng_seed=0,
                          bound: int = SAMPLE_BOUND, counter: Optional[OpCounter] = None,
                          allow_small_field: bool = False) -> MembershipVerdict:
    """One-sided randomized test: OUT answers are always right.

    A member can never produce a nonzero value.  For a non-member each
    trial misses with probability at most deg(f) / (2 * bound + 1).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    modulus = _field_of_tensor(omega)
    if modulus is not None and modulus < MIN_RANDOM_MODULUS and not allow_small_field:
        raise ValueError("randomized membership over F_%d needs a prime >= 2^31" % modulus)
    if omega.is_zero():
        return MembershipVerdict("IN", method="randomized")
    inst = to_instance(omega)
    n, p = inst.space.n, inst.space.p
    rng = random.Random(rng_seed)
    polys = spec.defining_polys
    for t in range(trials):
        for k, (poly, (n0, p0)) in enumerate(zip(polys, spec.instances)):
            space = SpaceSpec(max(n, n0), max(p, p0), "e")
            g = random_group_element(space, rng, bound, modulus)
            val = evaluate_on_translate(inst, g, poly, (n0, p0), counter)
            if val != 0:
                log.debug("trial %d: polynomial %d nonzero", t, k)
                return MembershipVerdict("OUT", RandomWitness(g, k, val, t), method="randomized")
    return MembershipVerdict("IN", method="randomized")


def check_witness(omega: AltTensor, spec: VarietySpec, witness: RandomWitness) -> bool:
    """Re-evaluate a randomized witness; true iff it reproduces its nonzero value."""
    inst = to_instance(omega)
    k = witness.index
    val = evaluate_on_translate(inst, witness.g, spec.defining_polys[k], spec.instances[k])
    return val != 0 and val == witness.value


# symbolic test

class _Packed:
    """Polynomial with monomials packed into one int (fixed-width exponent fields)."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms

    def __mul__(self, other):
        if isinstance(other, _Packed):
            out: Dict[int, object] = {}
            get = out.get
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 + m2
                    out[m] = get(m, 0) + c1 * c2
            return _Packed({m: c for m, c in out.items() if c != 0})
        if other == 0:
            return _Packed({})
        return _Packed({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, _Packed):
            if other == 0:
                return self
            other = _Packed({0: other})
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v != 0:
                out[m] = v
            else:
                out.pop(m, None)
        return _Packed(out)

    __radd__ = __add__

    def __neg__(self):
        return _Packed({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, _Packed):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {0: other}

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)


def symbolic_membership(omega: AltTensor, spec: VarietySpec,
                        max_dim: int = SYMBOLIC_MAX_DIM) -> MembershipVerdict:
    """Deterministic test: each defining polynomial of g . omega must vanish identically in g."""
    if omega.space.dim > max_dim:
        raise ValueError("symbolic membership capped at dimension %d (got %d)" % (max_dim, omega.space.dim))
    if omega.is_zero():
        return MembershipVerdict("IN", method="symbolic")
    inst = to_instance(omega)
    n, p = inst.space.n, inst.space.p
    jobs = list(zip(spec.defining_polys, spec.instances))
    for poly, (n0, p0) in jobs:
        P = max(p, p0)
        if poly.degree() > SYMBOLIC_MAX_POLY_DEGREE or poly.degree() * P > SYMBOLIC_MAX_DEGREE:
            raise ValueError("symbolic expansion too large for %s at p = %d (degree %d in the entries "
                             "of g); use the randomized test" % (spec, p, poly.degree() * P))
    for k, (poly, (n0, p0)) in enumerate(jobs):
        N, P = max(n, n0), max(p, p0)
        space = SpaceSpec(N, P, "e")
        lifted = lift_instance(inst, N, P)
        rows = _rows(n0, P)
        cols = sorted({l for I in lifted.coeffs for l in I})
        width = max(poly.degree(), 1).bit_length() + 1
        var = {}
        for r in rows:
            for c in cols:
                var[(r, c)] = _Packed({1 << (width * len(var)): 1})
        matrix = [[var.get((r, c), 0) for c in space.labels()] for r in space.labels()]
        g = LinearMap(space, space, matrix)
        image = apply_exterior_power(g, lifted, rows=rows)
        val = poly.evaluate(lambda I: coordinate(I, image))
        if val != 0:
            return MembershipVerdict("OUT", SymbolicWitness(k, len(val.terms)), method="symbolic")
    return MembershipVerdict("IN", method="symbolic")


# samples

SAMPLE_RANGE = 10


def random_vector(space: SpaceSpec, rng: random.Random, bound: int = SAMPLE_RANGE) -> AltTensor:
    return AltTensor.vector(space, {l: rng.randint(-bound, bound) for l in space.labels()})


def secant_sample(k: int, p: int, d: int, rng_seed=0, bound: int = SAMPLE_RANGE,
                  space: Optional[SpaceSpec] = None) -> AltTensor:
    """Sum of k pure tensors in the degree-p power of K^d.

    Factor coordinates are uniform integers in [-bound, bound] (default 10).
    """
    if p > d:
        raise ValueError("p = %d exceeds d = %d" % (p, d))
    if space is None:
        space = kd_space(d)
    rng = random.Random(rng_seed) if not isinstance(rng_seed, random.Random) else rng_seed
    total = AltTensor.zero(space, p)
    for _ in range(k):
        term = AltTensor.scalar(space, 1)
        for _ in range(p):
            term = wedge(term, random_vector(space, rng, bound))
        total = total + term
    return total


# witness reduction

@dataclass
class Certificate:
    """poly(projection to `instance` of g . omega) != 0 for g in G_{N,P}."""

    g: LinearMap
    poly: MayaPoly
    instance: Tuple[int, int]

    def value(self, omega: AltTensor):
        return evaluate_on_translate(omega, self.g, self.poly, self.instance)

    @property
    def group(self) -> Tuple[int, int]:
        return self.g.domain.n, self.g.domain.p


def _submatrix(g: LinearMap, drop: int):
    labels = g.domain.labels()
    keep = [i for i, l in enumerate(labels) if l != drop]
    return [[g.matrix[i][j] for j in keep] for i in keep]


def lower_p(g: LinearMap) -> Tuple[LinearMap, object]:
    """g' in G_{N,P-1}: g restricted, then projected along g e_P; also c = x_P(g e_P)."""
    N, P = g.domain.n, g.domain.p
    labels = g.domain.labels()
    iP = labels.index(P)
    c = g.matrix[iP][iP]
    if c == 0:
        raise GenericityError("x_P(g e_P) = 0")
    small = SpaceSpec(N, P - 1, g.domain.basis)
    keep = [i for i in range(len(labels)) if i != iP]
    m = [[g.matrix[i][j] - div(g.matrix[iP][j], c) * g.matrix[i][iP] for j in keep] for i in keep]
    return LinearMap(small, small, m), c


def lower_n(g: LinearMap) -> Tuple[LinearMap, Dict[int, object]]:
    """g' = g without row and column -N, and lambda with row_{-N}(g) = lambda . g' off column -N."""
    N, P = g.domain.n, g.domain.p
    labels = g.domain.labels()
    small = SpaceSpec(N - 1, P, g.domain.basis)
    m = _submatrix(g, -N)
    try:
        inv = linalg.inverse(m)
    except ZeroDivisionError:
        raise GenericityError("g without row and column -N is singular")
    row = [g.matrix[0][j] for j in range(1, len(labels))]
    lam = [sum(row[k] * inv[k][j] for k in range(len(row))) for j in range(len(row))]
    return LinearMap(small, small, m), dict(zip(small.labels(), lam))


def pullback(poly: MayaPoly, phi: Dict[int, Dict[int, object]], target: SpaceSpec,
             source: SpaceSpec) -> MayaPoly:
    """poly composed with the exterior power of phi: source^* -> target^*.

    phi[row][col] holds the matrix (rows follow target labels).  Both
    instances share the degree p = target.p = source.p, so variables keep
    their meaning on the dual infinite wedge.
    """
    if target.p != source.p:
        raise ValueError("pullback needs equal degrees")
    p = target.p
    src = source.labels()
    subst = {}
    for v in poly.variables():
        I = v.members(p)
        image = MayaPoly()
        for J in combinations(src, p):
            m = [[phi.get(i, {}).get(j, 0) for j in J] for i in I]
            c = linalg.det(m)
            if c != 0:
                image = image + MayaPoly.var(MayaIndex.from_members(J, p)) * c
        subst[v] = image
    return MayaPoly(poly.substitute(subst).terms, _canonical=True)


def restrict_poly(poly: MayaPoly, n: int, p: int) -> MayaPoly:
    """Drop monomials with a variable that vanishes on the (n, p) instance."""
    def ok(v: MayaIndex):
        return v.top <= p and (not v.neg or v.neg[0] >= -n)
    return MayaPoly({m: c for m, c in poly.terms.items() if all(ok(v) for v in m)}, _canonical=True)


def reduce_witness(omega: AltTensor, cert: Certificate) -> Certificate:
    """One reduction step towards G_{n,p}, for omega in the degree-p power of V_{n,p}^*."""
    n, p = omega.space.n, omega.space.p
    N, P = cert.group
    n0, p0 = cert.instance
    if P > p:
        g2, c = lower_p(cert.g)
        if P > p0:
            log.debug("lower p: %d -> %d", P, P - 1)
            return Certificate(g2, cert.poly, cert.instance)
        # P == p0: absorb u = g e_{p0} into the polynomial
        log.debug("lower p and base instance: %d -> %d", P, P - 1)
        target = SpaceSpec(n0, p0, "e")
        col = {l: cert.g.entry(l, p0) for l in target.labels()}
        phi = {i: {i: 1} for i in target.labels() if i != p0}
        for i, u in col.items():
            phi.setdefault(i, {})[p0] = u
        poly = restrict_poly(pullback(cert.poly, phi, target, target), n0, p0 - 1)
        return Certificate(g2, poly, (n0, p0 - 1))
    if N > n:
        g2, lam = lower_n(cert.g)
        if N > n0:
            log.debug("lower n: %d -> %d", N, N - 1)
            return Certificate(g2, cert.poly, cert.instance)
        log.debug("lower n and base instance: %d -> %d", N, N - 1)
        target = SpaceSpec(n0, p0, "e")
        source = SpaceSpec(n0 - 1, p0, "e")
        phi = {i: {i: 1} for i in source.labels()}
        phi[-n0] = {j: lam[j] for j in source.labels() if lam[j] != 0}
        poly = restrict_poly(pullback(cert.poly, phi, target, source), n0 - 1, p0)
        return Certificate(g2, poly, (n0 - 1, p0))
    raise ValueError("certificate already lies in G_{%d,%d}" % (n, p))


def reduce_to_instance(omega: AltTensor, cert: Certificate) -> Certificate:
    """Iterate reduce_witness until g lies in G_{n,p}."""
    n, p = omega.space.n, omega.space.p
    while cert.group != (n, p):
        cert = reduce_witness(omega, cert)
    return cert


def certificate_from_verdict(omega: AltTensor, spec: VarietySpec, verdict: MembershipVerdict) -> Certificate:
    w = verdict.witness
    return Certificate(w.g, spec.defining_polys[w.index], spec.instances[w.index])
