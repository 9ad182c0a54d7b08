import numpy as np
import pytest

from qsphere import bundle as bd
from qsphere.fock import rep_sigma_float
from qsphere.linalg import rank
from qsphere.quotient import get_quotient


@pytest.fixture(scope="module")
def G():
    return bd.expected_G()


def test_G_from_sections_matches_table(G):
    assert bd.build_G() == G


def test_projector(G):
    v = bd.verify_projector(G)
    assert v["idempotent"] and v["selfadjoint"]


def test_trace(G):
    assert G.P.equal(G.trace(), G.P.parse(bd.TRACE_G))


def test_sections_are_equivariant():
    Q = get_quotient()
    for name, f in bd.sections(Q.S7).items():
        assert bd.check_cotensor(f, Q), name


def test_non_section_rejected():
    Q = get_quotient()
    s7 = Q.S7
    assert not bd.check_cotensor(bd.Section(s7.parse("z1"), s7.parse("z3")), Q)


def test_pairing_outside_sigma4_raises():
    s7, sigma = bd.build_s7q(), bd.build_sigma4q()
    with pytest.raises(bd.NotInSigma4):
        bd.to_sigma4(s7.parse("z1"), sigma, s7)


def test_sections_degree_three_generated_by_f():
    Q = get_quotient()
    ss = bd.section_slice(3, Q)
    ms = [bd.Section(Q.S7.nf(s.F1), Q.S7.nf(s.F2)) for s in bd.module_span(3, Q)]
    vs = [bd.section_vector(s) for s in ss]
    vm = [bd.section_vector(s) for s in ms]
    assert rank(vs) == rank(vm) == rank(vs + vm) == 20


def test_classical_crosscheck():
    r = bd.classical_crosscheck()
    for key in ("quaternion_idempotent", "pauli_matches_complex", "complex_idempotent",
                "complex_selfadjoint", "AA*+BB*=R(1-R)", "q1_matches_classical"):
        assert r[key], key
    assert r["section_signs"] == (1, 1, -1, 1)


def test_projector_numerically_in_fock_space(G):
    # independent float check: sigma(G)^2 = sigma(G) away from the truncation edge
    N, q0 = 8, "1/2"
    states = [(a, b) for a in range(N + 1) for b in range(N + 1)]
    idx = {s: k for k, s in enumerate(states)}
    n = len(states)
    M = np.zeros((4 * n, 4 * n))
    for i in range(4):
        for j in range(4):
            for (m, col), v in rep_sigma_float(G[i, j], N, q0).items():
                M[i * n + idx[m], j * n + idx[col]] = v
    D = M @ M - M
    inner = [k for k, s in enumerate(states) if max(s) <= N - 2]
    rows = [i * n + k for i in range(4) for k in inner]
    assert np.abs(D[np.ix_(rows, rows)]).max() < 1e-12
    assert np.abs(M - M.T).max() < 1e-12
