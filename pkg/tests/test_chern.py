import pytest

from qsphere import chern as ch
from qsphere.bundle import TRACE_G, NCMatrix, expected_G
from qsphere.fock import trace_functional


@pytest.fixture(scope="module")
def G():
    return expected_G()


def test_ch0_is_trace_of_G(G):
    c = ch.chern(0, G)
    assert c.degree == 0
    assert G.P.equal(c.as_element(), G.P.parse(TRACE_G))


def test_pairing_is_minus_one(G):
    assert ch.pairing_with_trace(ch.chern(0, G)) == -1


def test_pairing_by_hand(sigma4):
    # tr_sigma(2 - (1-q^2)^2 R) = -(1-q^2)^2 / (1-q^2)^2
    assert trace_functional(sigma4.parse("(1-q^2)^2 R"), sigma4) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_chern_characters_are_cycles(G, n):
    assert ch.cyclic_cycle_check(ch.chern(n, G))


def test_non_cycle_detected(sigma4):
    c = ch.Chain.from_elements(sigma4, [sigma4.gen("a"), sigma4.gen("a*")])
    assert not ch.cyclic_cycle_check(c)


def test_degree_bound(sigma4):
    big = sigma4.parse("R^5 a^4")
    c = ch.Chain.from_elements(sigma4, [big, sigma4.gen("a")])
    with pytest.raises(ch.DegreeBoundExceeded):
        ch.cyclic_cycle_check(c, degree_bound=8)


@pytest.mark.parametrize("n", [1, 2])
def test_s_relation(G, n):
    r = ch.s_relation_check(n, G)
    assert r["trivial"]


def test_one_minus_t_preimage(sigma4):
    x = ch.Chain.from_elements(sigma4, [sigma4.gen("a"), sigma4.gen("b"), sigma4.gen("R")])
    c = x - ch.cyclic_t(x)
    w = ch.one_minus_t_preimage(c)
    assert w is not None and (w - ch.cyclic_t(w)) == c
    assert ch.one_minus_t_preimage(x) is None


def test_commutator_span(sigma4):
    comm = ch.Chain.from_elements(sigma4, [sigma4.parse("a a^* - a^* a")])
    assert ch.commutator_span_solve(comm) is not None
    assert ch.commutator_span_solve(ch.Chain.from_elements(sigma4, [sigma4.gen("R")])) is None


def test_generalized_trace_dimension_check(G, sigma4):
    small = NCMatrix(sigma4, [[sigma4.one()]])
    with pytest.raises(ch.DimensionMismatch):
        ch.generalized_trace([G, small])


def test_chain_degree_mismatch(sigma4):
    a = ch.Chain.from_elements(sigma4, [sigma4.gen("a")])
    b = ch.Chain.from_elements(sigma4, [sigma4.gen("a"), sigma4.gen("b")])
    with pytest.raises(ch.DimensionMismatch):
        a + b


def test_trace_property():
    r = ch.trace_property_check(100, 3, seed=11)
    assert r["ok"], r["failures"]
