import math
from fractions import Fraction

import pytest

from qsphere import fock as fk
from qsphere.coeff import mpq, parse_scalar

Q0 = Fraction(1, 2)


def test_radical_arithmetic():
    r2 = fk.RadicalScalar.make(1, 2)
    assert r2 * r2 == fk.RadicalScalar.make(2)
    assert fk.RadicalScalar.make(1, 8) == fk.RadicalScalar.make(2, 2)
    assert (r2 + fk.RadicalScalar.make(3, 2)) == fk.RadicalScalar.make(4, 2)
    assert (fk.RadicalScalar.make(1, 12) + fk.RadicalScalar.make(1, 3)) == fk.RadicalScalar.make(3, 3)
    with pytest.raises(fk.RadicalMixing):
        r2 + fk.RadicalScalar.make(1, 3)


def test_abs_bounds_bracket_the_value():
    x = fk.RadicalScalar.make(mpq(-3, 7), 5)
    lo, hi = x.abs_bounds()
    assert lo < hi and hi - lo < mpq(1, 2**70)
    assert lo * lo <= mpq(9 * 5, 49) <= hi * hi


def test_generator_entries_match_floats():
    q = 0.5
    for n1 in range(4):
        for n2 in range(4):
            m, v = fk.generator_action("a*", n1, n2, mpq(1, 2))
            assert m == (n1 + 1, n2)
            assert float(v) == pytest.approx(math.sqrt(1 - q ** (2 * n1 + 2)) * q ** (n1 + 2 * n2))
            m, v = fk.generator_action("b", n1, n2, mpq(1, 2))
            assert float(v) == pytest.approx(math.sqrt(1 - q ** (2 * n2 + 2)) * q ** (n1 + n2))
    assert fk.generator_action("a", 0, 3, mpq(1, 2)) is None
    assert fk.generator_action("b*", 2, 0, mpq(1, 2)) is None


def test_adjoint_pairs(sigma4):
    for x, y in (("a", "a*"), ("b", "b*")):
        A = fk.rep_sigma(sigma4.gen(x), 6, Q0)
        B = fk.rep_sigma(sigma4.gen(y), 6, Q0)
        assert A.adjoint() == B


@pytest.mark.parametrize("N", [12, 20])
def test_relations_on_truncation(N):
    for row in fk.check_relations_on_truncation(N, Q0):
        assert row["ok"] and not row["vacuous"], row["check"]


def test_relations_other_q():
    for row in fk.check_relations_on_truncation(8, Fraction(2, 3)):
        assert row["ok"], row["check"]


def test_small_cutoff_is_vacuous():
    rows = fk.check_relations_on_truncation(1, Q0)
    assert all(r["vacuous"] for r in rows)


def test_zeta_relations_in_representation():
    for row in fk.rep_zeta_check(10, Q0):
        assert row["ok"], row["check"]


@pytest.mark.parametrize("expr,expected", fk.TRACE_TABLE)
def test_exact_traces(sigma4, expr, expected):
    assert fk.trace_functional(sigma4.parse(expr), sigma4) == parse_scalar(expected)


def test_truncated_traces_agree():
    for row in fk.trace_report(40, Q0):
        assert row["exact_matches"], row["check"]
        assert row["delta"] <= 1e-12, row["check"]


def test_trace_by_direct_float_sum(sigma4):
    # independent oracle: sum diagonal entries of sigma(b b^*) in floats
    q, N = 0.5, 60
    direct = sum((1 - q ** (2 * n2)) * q ** (2 * (n1 + n2 - 1)) for n1 in range(N) for n2 in range(1, N))
    exact = fk.trace_functional(sigma4.parse("b b^*"), sigma4)
    assert float(exact.eval(mpq(1, 2))) == pytest.approx(direct, rel=1e-12)


def test_divergent_symbol_rejected():
    with pytest.raises(fk.DivergentSum):
        fk.DiagonalSymbol({(0, 2): parse_scalar("1")}).series_sum()


def test_rep_rejects_bad_q(sigma4):
    with pytest.raises(ValueError):
        fk.rep_sigma(sigma4.gen("a"), 3, Fraction(3, 2))


def test_trace_norm_partial_sums_are_rigorous():
    q = 0.5
    sums = fk.trace_norm_partial_sums("a", 20, Q0)
    lo, hi = sums[-1]
    direct = sum(math.sqrt(1 - q ** (2 * n1)) * q ** (n1 + 2 * n2 - 1) for n1 in range(1, 21) for n2 in range(21))
    assert float(lo) <= direct + 1e-12 and direct - 1e-12 <= float(hi)
    assert all(sums[i][0] <= sums[i + 1][0] for i in range(len(sums) - 1))


def test_trace_norms_within_direct_bounds():
    for row in fk.trace_class_diagnostics(40, Q0):
        assert row["below_valid"] and row["monotone"], row["check"]
