"""Acceptance criteria 1 to 12.

Each test prints one PASS/FAIL line; the lines are repeated in the terminal
summary.  Values come from independent oracles in _oracles.
"""

import math
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations
from random import Random

from plucker import formats
from plucker.exterior import AltTensor, OpCounter, SpaceSpec, apply_exterior_power
from plucker.maya import (MayaIndex, MayaPoly, derive_once, derive_variable, evaluate, index_of_partition,
                          instance_of, is_good, leq, lift_instance, partition_of, plucker_relation,
                          project_instance)
from plucker.membership import (Certificate, GenericityError, VarietySpec, grassmannian_deterministic,
                                lower_p, random_group_element, randomized_membership, reduce_witness,
                                secant_sample, symbolic_membership, to_instance)
from plucker.pfaffian import (SkewMatrix, check_recursion, check_star_recursion, minimal_variables,
                              pair_variable, pf_poly, pf_star_poly, pfaffian, reconstruction_case,
                              reconstruction_data, reconstruction_equation, star_minimal_variable,
                              two_form_rank)
from plucker.linalg import det, rank
from plucker.scalar import GF
from plucker.tuples import (MatrixTuple, TotPoint, find_subspace, image_dimension, normal_form, recover,
                            target_pattern, tuple_rank)

from _oracles import (contains, elementary, partition_by_holes, pfaffian_by_permutations,
                      random_point_for, sympy_det, wedge_of_vectors)
from _report import report

x = MayaPoly.x
GR = VarietySpec.grassmannian()


def mono(*sets, p=2):
    return tuple(sorted(MayaIndex.from_members(m, p) for m in sets))


def random_skew(rng, n, entry):
    rows = [[entry(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = entry(rng.randint(-9, 9), rng.randint(1, 4))
            rows[i][j], rows[j][i] = a, -a
    return rows


def small_indices(low=-8, high=8, max_mods=5):
    for k in range(max_mods + 1):
        for neg in combinations(range(low, 0), k):
            for absent in combinations(range(1, high + 1), k):
                yield MayaIndex(neg, absent)


def pure(rng, n, p, bound=5):
    space = SpaceSpec(n, p, "e")
    return wedge_of_vectors(space, [{i: rng.randint(-bound, bound) for i in space.labels()} for _ in range(p)])


def test_criterion_01_pfaffian_identity():
    rng = Random(1)
    F = GF(1000003)
    start = time.perf_counter()
    bad = 0
    for k in range(200):
        rows = random_skew(rng, 2 + k % 11, lambda a, b=1: Fraction(a, b))
        bad += pfaffian(SkewMatrix(rows)) ** 2 != sympy_det(rows)
    for k in range(200):
        rows = random_skew(rng, 2 + k % 11, lambda a, b=1: F(a))
        bad += (pfaffian(SkewMatrix(rows)) ** 2).value != sympy_det(rows, 1000003)
    for k in range(30):
        rows = random_skew(rng, 2 + k % 5, lambda a, b=1: Fraction(a, b))
        bad += pfaffian(SkewMatrix(rows)) != pfaffian_by_permutations(rows)
    elapsed = time.perf_counter() - start
    report(1, bad == 0 and elapsed < 10, "%d mismatches, %.1f s" % (bad, elapsed))


def test_criterion_02_formula_reproduction():
    pf2 = x(-2, -1) * x(1, 2) - x(-2, 1) * x(-1, 2) + x(-2, 2) * x(-1, 1)
    checks = [
        pf_poly(1) == x(1, 2),
        pf_star_poly(1) == x(1, 2),
        pf_poly(2) == pf2,
        pf_star_poly(2) == pf2,
    ]
    f = pf_poly(3)
    checks += [
        f.coefficient(mono((-4, -3), (-2, -1), (1, 2))) == 1,
        f.coefficient(mono((-4, -3), (-2, 1), (-1, 2))) == -1,
        f.coefficient(mono((-4, 2), (-3, 1), (-2, -1))) == 1,
    ]
    g = pf_star_poly(3)
    checks += [
        g.coefficient(mono((-2, -1, 1, 2), (-2, -1, 3, 4), (1, 2, 3, 4), p=4)) == 1,
        g.coefficient(mono((-2, -1, 1, 2), (-2, 1, 3, 4), (-1, 2, 3, 4), p=4)) == -1,
        g.coefficient(mono((-1, 1, 2, 3), (-2, 1, 2, 4), (-2, -1, 3, 4), p=4)) == 1,
    ]
    report(2, all(checks), "%d/%d displayed terms match" % (sum(checks), len(checks)))


def test_criterion_03_recursions():
    start = time.perf_counter()
    ok = []
    for r in range(1, 5):
        q, fine = check_recursion(r)
        m = pair_variable(-2 * r, -2 * r + 1)
        ok.append(fine and minimal_variables(pf_poly(r + 1)) == [m] and m.partition() == (2 * r, 2 * r)
                  and q == pf_poly(r + 1) - MayaPoly.var(m) * pf_poly(r))
    for s in range(1, 4):
        q, fine = check_star_recursion(s)
        m = star_minimal_variable(s + 1)
        ok.append(fine and minimal_variables(pf_star_poly(s + 1)) == [m] and m.partition() == (2,) * (2 * s)
                  and q == pf_star_poly(s + 1) - MayaPoly.var(m) * pf_star_poly(s))
    elapsed = time.perf_counter() - start
    report(3, all(ok) and elapsed < 30, "%d/7 recursions, %.1f s" % (sum(ok), elapsed))


def test_criterion_04_grassmannian_membership():
    start = time.perf_counter()
    failures, disagreements = [], 0
    for p in (2, 3):
        for d in range(4, 8):
            for k, want in ((1, True), (2, False)):
                for t in range(100):
                    omega = secant_sample(k, p, d, rng_seed=1000 * d + 100 * p + 10 * k + t)
                    got = (grassmannian_deterministic(omega).is_in,
                           symbolic_membership(omega, GR).is_in,
                           randomized_membership(omega, GR, trials=20, rng_seed=7).is_in)
                    disagreements += len(set(got)) != 1
                    if got != (want,) * 3 and (p, d, k) not in failures:
                        failures.append((p, d, k))
    elapsed = time.perf_counter() - start
    detail = "disagreements %d, wrong verdicts at (p,d,k) %s, %.1f s" % (disagreements, failures, elapsed)
    report(4, not failures and disagreements == 0 and elapsed < 120, detail)


def test_criterion_05_secant_is_pfaffian():
    agree = total = 0
    for k in (1, 2, 3):
        inside, below = VarietySpec.pfaffian(k, k), VarietySpec.pfaffian(k - 1, k - 1)
        for t in range(100):
            omega = secant_sample(k, 2, 8, rng_seed=10 * t + k)
            rk = two_form_rank(omega)
            a = randomized_membership(omega, inside, rng_seed=t).is_in
            b = randomized_membership(omega, below, rng_seed=t).is_in
            agree += a and not b and a == (rk <= k) and b == (rk <= k - 1)
            total += 1
    report(5, agree == total, "%d/%d samples agree" % (agree, total))


def _random_charged(rng, charge, low=-3, high=3):
    while True:
        neg = [i for i in range(low, 0) if rng.random() < 0.5]
        absent = [i for i in range(1, high + 1) if rng.random() < 0.5]
        if len(neg) - len(absent) == charge:
            return MayaIndex(tuple(neg), tuple(absent))


def test_criterion_06_plucker_relations():
    simplest = x(-2, -1) * x(1, 2) - x(-2, 1) * x(-1, 2) + x(-2, 2) * x(-1, 1)
    rel = plucker_relation(MayaIndex.from_members([-2, -1, 1], 2), MayaIndex.from_members([2], 2))
    first = rel in (simplest, -simplest)
    rng = Random(6)
    vanish, nonzero = 0, 0
    for _ in range(50):
        rel = plucker_relation(_random_charged(rng, 1), _random_charged(rng, -1))
        n, p = instance_of(rel)
        omega = pure(rng, n + 1, p + 1)
        vanish += evaluate(rel, omega) == 0
        nonzero += evaluate(rel, omega + pure(rng, n + 1, p + 1)) != 0
    report(6, first and vanish == 50 and nonzero > 0,
           "simplest relation %s, %d/50 vanish, %d nonzero on non-members" % (first, vanish, nonzero))


def test_criterion_07_maya_young():
    drawn = partition_of(MayaIndex((-3, -2), (3, 5)))
    idx = list(small_indices())
    parts = [partition_of(I) for I in idx]
    bijective = all(lam == partition_by_holes(I.neg, I.absent) and index_of_partition(lam) == I
                    for I, lam in zip(idx, parts)) and len(set(parts)) == len(idx)
    # every pair with at most two modifications, then each index against 40 random partners
    small = [(I, lam) for I, lam in zip(idx, parts) if len(I.neg) <= 2]
    order = all(leq(I, J) == contains(lam, mu) for I, lam in small for J, mu in small)
    rng = Random(7)
    for I, lam in zip(idx, parts):
        for _ in range(40):
            j = rng.randrange(len(idx))
            order = order and leq(I, idx[j]) == contains(lam, parts[j])
    detail = "neg=[-3,-2] absent=[3,5] -> %s (want (4, 4, 2, 2, 1)), bijection %s on %d indices, order %s" % (
        drawn, bijective, len(idx), order)
    report(7, drawn == (4, 4, 2, 2, 1) and bijective and order, detail)


def _random_poly(rng, terms=3, degree=2):
    pool = [MayaIndex((-2,), (1,)), MayaIndex((-1,), (2,)), MayaIndex(), MayaIndex((-2, -1), (1, 2)),
            MayaIndex((-1,), (3,))]
    f = MayaPoly()
    for _ in range(terms):
        m = MayaPoly.const(rng.randint(-3, 3))
        for _ in range(rng.randint(1, degree)):
            m = m * MayaPoly.var(rng.choice(pool))
        f = f + m
    return f


def test_criterion_08_derivations():
    V = SpaceSpec(3, 3)
    labels = V.labels()
    variables = [I for I in small_indices(-3, 3, 3) if I.top <= 3]
    action = True
    for k in labels:
        for l in labels:
            one, two = elementary(V, k, l, 1), elementary(V, k, l, 2)
            for I in variables:
                basis = AltTensor.basis_tensor(V, I.members(3))
                f1 = apply_exterior_power(one, basis)
                # second difference vanishes, so f1 - basis is the first-order term
                linear = apply_exterior_power(two, basis) - f1 == f1 - basis
                got = derive_variable(k, l, I)
                want = AltTensor.zero(V, 3) if got is None else \
                    AltTensor.basis_tensor(V, got[1].members(3), got[0])
                action = action and linear and f1 - basis == want
    rng = Random(8)
    leibniz = 0
    for _ in range(100):
        a, b = _random_poly(rng), _random_poly(rng)
        k, l = rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([-2, -1, 1, 2, 3])
        leibniz += derive_once(k, l, a * b) == derive_once(k, l, a) * b + a * derive_once(k, l, b)
    report(8, action and leibniz == 100, "exterior action %s, Leibniz %d/100" % (action, leibniz))


def _instance_tensor(rng, n, p, bound=5):
    space = SpaceSpec(n, p, "e")
    return AltTensor(space, p, {I: rng.randint(-bound, bound) for I in combinations(space.labels(), p)})


def test_criterion_09_witness_reduction():
    rng = Random(9)
    exact = 0
    done = 0
    while done < 100:
        n, p = rng.randint(0, 2), rng.randint(1, 2)
        N, P = n + rng.randint(0, 2), p + rng.randint(1, 2)
        omega = lift_instance(_instance_tensor(rng, n, p), N, P)
        g = random_group_element(SpaceSpec(N, P, "e"), rng, 9)
        try:
            g2, c = lower_p(g)
        except GenericityError:
            continue
        lhs = apply_exterior_power(g2, project_instance(omega, N, P - 1)).scale(c)
        exact += lhs == project_instance(apply_exterior_power(g, omega), N, P - 1)
        done += 1
    spec = VarietySpec.pfaffian(1, 1)
    kept = 0
    for _ in range(50):
        omega = secant_sample(2, 2, 6, rng_seed=rng.randrange(10 ** 9))
        inst = to_instance(omega)
        n, p = inst.space.n, inst.space.p
        verdict = randomized_membership(omega, spec, rng_seed=rng.randrange(10 ** 6))
        k = verdict.witness.index
        poly, target = spec.defining_polys[k], spec.instances[k]
        while True:
            g = random_group_element(SpaceSpec(n + 2, p + 2, "e"), rng, 50)
            cert = Certificate(g, poly, target)
            if cert.value(inst) == 0:
                continue
            try:
                steps = [cert]
                while steps[-1].group != (n, p):
                    steps.append(reduce_witness(inst, steps[-1]))
            except GenericityError:
                continue
            break
        kept += not verdict.is_in and all(c.value(inst) != 0 for c in steps)
    report(9, exact == 100 and kept == 50, "lowerp %d/100 exact, %d/50 witnesses kept" % (exact, kept))


def _bad_indices(r, s, count):
    pool = []
    for k in range(1, 4):
        for neg in combinations(range(-6, 0), k):
            for absent in combinations(range(1, 8), k):
                I = MayaIndex(neg, absent)
                if not is_good(I, r, s):
                    pool.append(I)
    rng = Random(10 * r + s)
    rng.shuffle(pool)
    # both cases when the pair admits them
    pf = [I for I in pool if reconstruction_case(I, r, s) == "pf"]
    star = [I for I in pool if reconstruction_case(I, r, s) == "star"]
    half = count // 2
    chosen = pf[:half] + star[:half]
    rest = [I for I in pool if I not in chosen]
    return chosen + rest[:count - len(chosen)]


def test_criterion_10_reconstruction():
    coeff_ok = vanish = total = 0
    for r, s in ((1, 1), (2, 1), (1, 2)):
        rng = Random(100 * r + s)
        for I in _bad_indices(r, s, 10):
            want = pf_poly(r) if reconstruction_case(I, r, s) == "pf" else pf_star_poly(s)
            eq = reconstruction_equation(I, r, s)
            lead, _ = eq.split(I)
            coeff_ok += lead in (want, -want) and reconstruction_data(I, r, s)[2] == want
            vanish += all(evaluate(eq, random_point_for(eq, rng, min(r, s))) == 0 for _ in range(50))
            total += 1
    report(10, coeff_ok == total == vanish == 30,
           "coefficient %d/%d, vanishing on 50 points %d/%d" % (coeff_ok, total, vanish, total))


def _matrix(rng, r, c, bound=3):
    return [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]


def test_criterion_11_matrix_tuples():
    rng = Random(11)
    certified = done = 0
    while done < 100:
        p, l = rng.randint(1, 3), rng.randint(1, 3)
        N = rng.randint(p * l, 12)
        M = MatrixTuple([_matrix(rng, N, N) for _ in range(p)])
        if min(rank(m) for m in M.mats) < p * l:
            continue
        if p <= 2 and N <= 8 and tuple_rank(M) < p * l:
            continue
        V = find_subspace(M, l, rng_seed=done)
        certified += len(V) == l and rank(V) == l and image_dimension(M, V) == p * l
        done += 1
    normal = 0
    for k in range(100):
        p, l = rng.randint(1, 3), rng.randint(1, 2)
        n, m = rng.randint(0, 2), rng.randint(0, 2)
        N = n + m + p * l + rng.randint(0, 2)
        while True:
            col = _matrix(rng, N, n, 4) if n else [[] for _ in range(N)]
            row = _matrix(rng, m, N, 4)
            if (not n or rank(col) == n) and (not m or rank(row) == m):
                break
        pt = TotPoint(MatrixTuple([_matrix(rng, N, N, 4) for _ in range(p)]), col, row,
                      [Fraction(rng.randint(-3, 3)) for _ in range(2)])
        y, left, right = normal_form(pt, l, rng_seed=k)
        normal += (det(left) != 0 and det(right) != 0 and target_pattern(y, l)
                   and recover(y, left, right) == pt)
    diag = MatrixTuple([[[1, 0], [0, 1]], [[1, 0], [0, 2]]])
    rot = MatrixTuple([[[1, 0], [0, 1]], [[0, -1], [1, 0]]])
    examples = tuple_rank(diag) == 1 and tuple_rank(rot) == 2 and tuple_rank(rot).exact
    report(11, certified == 100 and normal == 100 and examples,
           "subspaces %d/100, normal forms %d/100, rank examples %s" % (certified, normal, examples))


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "plucker.cli", *args], capture_output=True)


def test_criterion_12_determinism_and_complexity(tmp_path):
    sample = ["sample", "--k", "2", "--p", "3", "--d", "6", "--seed", "12"]
    a, b = _cli(*sample), _cli(*sample)
    tensor = tmp_path / "t.txt"
    tensor.write_bytes(a.stdout)
    runs = []
    for _ in range(2):
        out = _cli("member", "gr", str(tensor), "--seed", "3", "--witness-out", str(tmp_path / "w.json"))
        runs.append((out.returncode, out.stdout, (tmp_path / "w.json").read_bytes()))
    identical = a.returncode == 0 and a.stdout == b.stdout and runs[0] == runs[1] and runs[0][0] == 1

    # dense input, a pure 3-vector so every trial runs
    text = formats.write_tensor(secant_sample(1, 3, 12, rng_seed=12), dense=True)
    start = time.perf_counter()
    verdict = randomized_membership(formats.read_tensor(text), GR, rng_seed=12)
    elapsed = time.perf_counter() - start

    sizes, ops = [], []
    for d in (8, 10, 12):
        counter = OpCounter()
        randomized_membership(secant_sample(1, 3, d, rng_seed=d), GR, rng_seed=d, counter=counter)
        sizes.append(math.comb(d, 3))
        ops.append(counter.mults)
    lx, ly = [math.log(v) for v in sizes], [math.log(v) for v in ops]
    mx, my = sum(lx) / 3, sum(ly) / 3
    slope = sum((u - mx) * (v - my) for u, v in zip(lx, ly)) / sum((u - mx) ** 2 for u in lx)
    detail = "byte-identical %s, dense d=12 %.2f s (%s), ops %s, slope %.2f" % (
        identical, elapsed, "IN" if verdict.is_in else "OUT", ops, slope)
    report(12, identical and verdict.is_in and elapsed < 5 and slope < 3.5, detail)
