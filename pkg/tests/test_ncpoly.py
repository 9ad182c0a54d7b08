import pytest

from qsphere.coeff import Q, as_ratq
from qsphere.ncpoly import (
    Alphabet, NCPoly, RewriteSystem, StepLimitExceeded, UnknownGenerator, load_presentation, parse_ncpoly,
)


@pytest.fixture
def qplane():
    A = Alphabet(["x", "y"])
    rs = RewriteSystem.from_relations(A, [parse_ncpoly("y x - q x y", A).terms]).complete()
    return A, rs


def test_qplane_normal_form_matches_closed_formula(qplane):
    # y^m x^n = q^(mn) x^n y^m
    A, rs = qplane
    x, y = A["x"], A["y"]
    for m in range(4):
        for n in range(4):
            got = rs.nf_word((y,) * m + (x,) * n)
            assert got == {(x,) * n + (y,) * m: Q ** (m * n)}


def test_qplane_basis_counts(qplane):
    _, rs = qplane
    assert [len(rs.irreducible_words(d)) for d in range(6)] == [1, 2, 3, 4, 5, 6]


def test_obstruction_detected_and_completed():
    A = Alphabet(["x", "y"])
    rels = [parse_ncpoly(t, A).terms for t in ("y x - x x", "y y - x")]
    rs = RewriteSystem.from_relations(A, rels)
    assert rs.obstructions()
    done = rs.complete()
    assert done.is_confluent()
    # y y x reduces both ways to the same normal form after completion
    x, y = A["x"], A["y"]
    assert done.nf_word((y, y, x)) == done.nf_word((x, x))


def test_nf_idempotent_and_linear(qplane):
    A, rs = qplane
    p = parse_ncpoly("y y x - 2 x y x + q^-1 y", A)
    once = rs.nf(p)
    assert rs.nf(once).terms == once.terms
    assert all(rs.is_normal(w) for w in once.terms)
    r = parse_ncpoly("x y y", A)
    assert rs.nf(p + r).terms == (rs.nf(p) + rs.nf(r)).terms


def test_step_limit():
    A = Alphabet(["x", "y"])
    rs = RewriteSystem.from_relations(A, [parse_ncpoly("y x - q x y", A).terms], step_limit=5)
    with pytest.raises(StepLimitExceeded):
        rs.nf_word((A["y"],) * 6 + (A["x"],) * 6)


def test_parse_star_forms():
    A = load_presentation("generators: a a* b\nstar: a<->a*\n")[0]
    assert parse_ncpoly("a^* b", A).terms == parse_ncpoly("a* b", A).terms
    assert parse_ncpoly("2 a*b", A).terms == {(A["a"], A["b"]): as_ratq(2)}
    with pytest.raises(UnknownGenerator):
        parse_ncpoly("c", A)


def test_load_presentation_relations():
    A, rels = load_presentation("""
        generators: x y
        y x = q x y   # q-plane
    """)
    assert A.names == ["x", "y"]
    assert rels == [parse_ncpoly("y x - q x y", A).terms]


def test_ordering_is_degree_then_weight_then_lex():
    A = Alphabet(["a", "b"])
    words = [(1,), (0, 0), (0,), (1, 0), ()]
    assert sorted(words, key=A.key) == [(), (0,), (1,), (0, 0), (1, 0)]


def test_polynomial_arithmetic():
    A = Alphabet(["x", "y"])
    p = parse_ncpoly("x + y", A)
    sq = p * p
    assert sq.terms == parse_ncpoly("x x + x y + y x + y y", A).terms
    assert (p - p).terms == {}
    assert NCPoly(A, {}).render() == "0"
