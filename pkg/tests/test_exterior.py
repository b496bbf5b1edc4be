from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from plucker.exterior import (AltTensor, DegreeError, LinearMap, OpCounter, SpaceMismatchError,
                              SpaceSpec, apply_exterior_power, contract_lemma, hodge_dual,
                              interior_product, pairing, tensor_up, wedge)
from plucker.membership import decompose_pure

from _oracles import dense_apply, kd, leibniz_det, wedge_of_vectors

V3 = kd(3)


def x(*labels, space=V3, c=1):
    return AltTensor.basis_tensor(space, labels, c)


def random_tensor(rng, space, degree, density=0.5):
    from itertools import combinations
    coeffs = {I: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
              for I in combinations(space.labels(), degree) if rng.random() < density}
    return AltTensor(space, degree, coeffs)


def random_map(rng, dom, cod, bound=4):
    return LinearMap(dom, cod, [[rng.randint(-bound, bound) for _ in range(dom.dim)]
                                for _ in range(cod.dim)])


# wedge

def test_wedge_examples():
    assert wedge(x(1), x(2)).coeffs == {(1, 2): 1}
    assert wedge(x(2), x(1)).coeffs == {(1, 2): -1}
    V4 = kd(4)
    assert wedge(x(1, 2, space=V4), x(1, 3, space=V4)).is_zero()


def test_wedge_errors():
    with pytest.raises(SpaceMismatchError):
        wedge(x(1), x(1, space=kd(4)))
    with pytest.raises(DegreeError):
        wedge(x(1, 2, 3), x(1))


def test_invariants_enforced():
    with pytest.raises(ValueError):
        AltTensor(V3, 2, {(2, 1): 1})
    with pytest.raises(ValueError):
        AltTensor(V3, 2, {(0, 1): 1})
    with pytest.raises(DegreeError):
        AltTensor(V3, 4)
    t = AltTensor(V3, 1, {(1,): 0, (2,): 3})
    assert t.coeffs == {(2,): 3}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_wedge_associative_graded_commutative(seed, da, db, dc):
    rng = Random(seed)
    space = SpaceSpec(2, 4)
    a, b, c = (random_tensor(rng, space, d) for d in (da, db, dc))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == ((-1) ** (da * db)) * wedge(b, a)


# exterior powers

def test_apply_examples():
    rng = Random(1)
    omega = random_tensor(rng, SpaceSpec(1, 3), 2)
    assert apply_exterior_power(LinearMap.identity(omega.space), omega) == omega
    V2 = kd(2)
    m = [[2, 3], [5, 7]]
    out = apply_exterior_power(LinearMap(V2, V2, m), x(1, 2, space=V2))
    assert out.coeffs == {(1, 2): leibniz_det(m)}
    phi = LinearMap(V3, V3, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert apply_exterior_power(phi, x(1, 2)).coeffs == {(1, 2): 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_apply_matches_minor_expansion(seed, p):
    rng = Random(seed)
    dom, cod = SpaceSpec(1, 3), SpaceSpec(2, 2)
    phi = random_map(rng, dom, cod)
    omega = random_tensor(rng, dom, p)
    assert apply_exterior_power(phi, omega) == dense_apply(phi, omega)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 3))
def test_apply_functorial(seed, p):
    rng = Random(seed)
    A, B, C = SpaceSpec(1, 3), SpaceSpec(2, 2), SpaceSpec(0, 5)
    psi, phi = random_map(rng, A, B), random_map(rng, B, C)
    omega = random_tensor(rng, A, p)
    assert apply_exterior_power(phi.compose(psi), omega) == \
        apply_exterior_power(phi, apply_exterior_power(psi, omega))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 2), st.integers(0, 2))
def test_apply_respects_wedge(seed, da, db):
    rng = Random(seed)
    A = SpaceSpec(1, 3)
    phi = random_map(rng, A, A)
    a, b = random_tensor(rng, A, da), random_tensor(rng, A, db)
    assert apply_exterior_power(phi, wedge(a, b)) == \
        wedge(apply_exterior_power(phi, a), apply_exterior_power(phi, b))


def test_apply_pure_tensor():
    rng = Random(3)
    space = kd(5)
    vs = [{i: rng.randint(-3, 3) for i in space.labels()} for _ in range(3)]
    phi = random_map(rng, space, space)
    omega = wedge_of_vectors(space, vs)
    images = [{i: sum(phi.entry(i, j) * v[j] for j in v) for i in space.labels()} for v in vs]
    assert apply_exterior_power(phi, omega) == wedge_of_vectors(space, images)


def test_apply_rows_restriction_and_counter():
    rng = Random(4)
    space = SpaceSpec(2, 3)
    phi = random_map(rng, space, space)
    omega = random_tensor(rng, space, 2)
    full = apply_exterior_power(phi, omega)
    rows = [-1, 1, 2]
    ctr = OpCounter()
    part = apply_exterior_power(phi, omega, rows=rows, counter=ctr)
    assert part.coeffs == {I: c for I, c in full.coeffs.items() if set(I) <= set(rows)}
    assert ctr.mults > 0
    with pytest.raises(SpaceMismatchError):
        apply_exterior_power(phi, x(1))


# pairing and duals

def test_pairing_examples():
    E = V3.dual()
    e12 = AltTensor.basis_tensor(E, (1, 2))
    assert pairing(e12, x(1, 2)) == 1
    assert pairing(e12, x(1, 3)) == 0
    phi = LinearMap(V3, V3, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    v = wedge(apply_exterior_power(phi, x(1)), x(2))
    assert pairing(e12, v) == 1
    with pytest.raises(SpaceMismatchError):
        pairing(x(1, 2), x(1, 2))
    with pytest.raises(DegreeError):
        pairing(AltTensor.basis_tensor(E, (1,)), x(1, 2))


def test_hodge_examples():
    V = SpaceSpec(1, 2)
    E = V.dual()
    assert hodge_dual(x(-1, space=V)) == AltTensor.basis_tensor(E, (1, 2))
    assert hodge_dual(x(1, space=V)) == AltTensor.basis_tensor(E, (-1, 2), -1)
    assert hodge_dual(AltTensor.scalar(V, 1), 5) == AltTensor.basis_tensor(E, (-1, 1, 2), 5)
    with pytest.raises(ValueError):
        hodge_dual(x(1, space=V), 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 5), st.integers(-3, 3).filter(bool))
def test_hodge_twice(seed, p, c):
    rng = Random(seed)
    space = SpaceSpec(2, 3)
    omega = random_tensor(rng, space, p)
    back = hodge_dual(hodge_dual(omega, c), c)
    assert back.space == space
    sign = (-1) ** (p * (space.dim - p))
    assert back == (sign * c * c) * omega


def test_hodge_defining_property():
    # <hodge(w), w'> is the top coefficient of w ^ w'
    rng = Random(5)
    space = SpaceSpec(2, 3)
    for p in range(6):
        a = random_tensor(rng, space, p)
        b = random_tensor(rng, space, space.dim - p)
        top = wedge(a, b)[space.labels()]
        assert pairing(hodge_dual(a), b) == top


def test_hodge_preserves_purity():
    rng = Random(6)
    space = kd(6)
    for p in range(1, 6):
        vs = [{i: rng.randint(-4, 4) for i in space.labels()} for _ in range(p)]
        omega = wedge_of_vectors(space, vs)
        if omega.is_zero():
            continue
        assert decompose_pure(hodge_dual(omega)) is not None


# tensoring and contraction

def test_tensor_up_examples():
    V = SpaceSpec(1, 1)
    out = tensor_up(x(-1, 1, space=V), 2)
    assert out.space == SpaceSpec(1, 2) and out.coeffs == {(-1, 1, 2): 1}
    assert tensor_up(AltTensor.zero(V, 1), 2).is_zero()
    down = tensor_up(x(1, space=V), -2)
    assert down.coeffs == {(-2, 1): -1}
    with pytest.raises(ValueError):
        tensor_up(x(1, space=V), 1)


def test_tensor_up_keeps_purity():
    rng = Random(7)
    space = kd(4)
    vs = [{i: rng.randint(-4, 4) for i in space.labels()} for _ in range(2)]
    up = tensor_up(wedge_of_vectors(space, vs), 5)
    d = decompose_pure(up)
    assert d is not None and len(d.factors) == 3


def test_contract_examples():
    W = kd(2, "e")
    xi = AltTensor.basis_tensor(W, (1, 2))
    assert contract_lemma(xi, 2) == AltTensor.basis_tensor(kd(1, "e"), (1,))
    assert contract_lemma(AltTensor.basis_tensor(kd(3, "e"), (1, 2)), 3).is_zero()


@pytest.mark.parametrize("n,p,deg", [(0, 3, 1), (1, 2, 1), (1, 3, 2), (2, 2, 2), (2, 3, 3)])
def test_contraction_dual_to_tensoring(n, p, deg):
    rng = Random(n * 100 + p * 10 + deg)
    V = SpaceSpec(n, p)
    for _ in range(100):
        omega = random_tensor(rng, V, deg)
        xi = random_tensor(rng, SpaceSpec(n, p + 1, "e"), deg + 1)
        assert pairing(contract_lemma(xi, p + 1), omega) == pairing(xi, tensor_up(omega, p + 1))


# interior product

def test_interior_examples():
    E = V3.dual()
    e = lambda i: AltTensor.basis_tensor(E, (i,))
    assert interior_product(x(1, 2), e(1)) == x(2)
    assert interior_product(x(1, 2), e(2)) == -x(1)
    assert interior_product(x(1, 2), e(3)).is_zero()
    with pytest.raises(DegreeError):
        interior_product(x(1), AltTensor.basis_tensor(E, (1, 2)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_interior_full_contraction_is_pairing(seed, p):
    rng = Random(seed)
    space = SpaceSpec(2, 2)
    omega = random_tensor(rng, space, p)
    xi = random_tensor(rng, space.dual(), p)
    assert interior_product(omega, xi)[()] == pairing(xi, omega)
