"""Randomised structural identities with a fixed seed."""

import random

import pytest

from qsphere import algebras as al
from qsphere.chern import Chain, cyclic_t, hochschild_boundary
from qsphere.ncpoly import NCPoly, add_into

SEED = 1729


def random_element(P, rng, max_degree=3, terms=3, letters=None):
    letters = letters if letters is not None else list(range(len(P.alphabet)))
    out = {}
    for _ in range(terms):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_degree)))
        add_into(out, {w: P.field.coerce(rng.randint(-3, 3))})
    return NCPoly(P.alphabet, out)


def random_chain(P, rng, degree):
    words = [w for d in range(3) for w in P.normal_words(d)]
    c = Chain(P, degree, {})
    for _ in range(3):
        legs = [NCPoly(P.alphabet, {rng.choice(words): P.field.one}) for _ in range(degree + 1)]
        c = c + Chain.from_elements(P, legs, rng.randint(-2, 2) or 1)
    return c


@pytest.mark.parametrize("degree", [2, 3])
def test_boundary_squares_to_zero(sigma4, degree):
    rng = random.Random(SEED + degree)
    for _ in range(4):
        c = random_chain(sigma4, rng, degree)
        assert hochschild_boundary(hochschild_boundary(c)).is_zero()


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_cyclic_operator_order(sigma4, degree):
    rng = random.Random(SEED - degree)
    c = random_chain(sigma4, rng, degree)
    cur = c
    for _ in range(degree + 1):
        cur = cyclic_t(cur)
    assert cur == c


@pytest.mark.parametrize("name", ["s7q", "sigma4q", "sigma4q-loc"])
def test_star_involution_and_antihomomorphism(name):
    P = al.get(name)
    rng = random.Random(SEED)
    for _ in range(10):
        x, y = random_element(P, rng), random_element(P, rng)
        assert P.equal(P.star(P.star(x)), x)
        assert P.equal(P.star(P.mul(x, y)), P.mul(P.star(y), P.star(x)))


@pytest.mark.parametrize("name", ["uq4", "s7q", "sigma4q", "sigma4q-loc"])
def test_nf_idempotent(name):
    P = al.get(name)
    rng = random.Random(SEED)
    for _ in range(20):
        x = P.nf(random_element(P, rng, max_degree=4))
        assert P.nf(x).terms == x.terms
        assert all(P.rs.is_normal(w) for w in x.terms)


def _coproduct_tensor(U, terms: dict) -> dict:
    return U.coproduct(NCPoly(U.alphabet, terms))


def test_coassociativity_and_counit(uq4):
    U = uq4
    rng = random.Random(SEED)
    gens = [U.alphabet[f"t{i}{j}"] for i in range(1, 5) for j in range(1, 5)] + [U.dinv]
    samples = [NCPoly(U.alphabet, {(g,): U.field.one}) for g in gens]
    samples += [U.nf(random_element(U, rng, max_degree=2, letters=gens)) for _ in range(5)]
    one = U.field.one
    for x in samples:
        d = U.coproduct(x)
        left, right = {}, {}
        for (l, r), c in d.items():
            for (a, b), e in _coproduct_tensor(U, {l: one}).items():
                add_into(left, {(a, b, r): c * e})
            for (a, b), e in _coproduct_tensor(U, {r: one}).items():
                add_into(right, {(l, a, b): c * e})
        assert left == right
        # (eps (x) id) Delta = id = (id (x) eps) Delta
        lhs, rhs = {}, {}
        for (l, r), c in d.items():
            add_into(lhs, {r: c * U.counit_terms({l: one})})
            add_into(rhs, {l: c * U.counit_terms({r: one})})
        assert U.nf_terms(lhs) == x.terms == U.nf_terms(rhs)
