"""The rank-2 quantum vector bundle over Sigma^4_q and its projector G.

Sections are pairs (F1, F2) of S^7_q elements satisfying the cotensor
condition for the fundamental SU_q(2) corepresentation.  The projector is
G_ij = <f_i, f_j> with <F, H> = F1 H1* + F2 H2*.  A commutative q = 1
cross-check against the quaternionic instanton projector lives at the end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy as sp

from .algebras import Presentation, build_s7q, build_sigma4q, embed, embedding_images
from .linalg import Echelon, nullspace
from .ncpoly import NCPoly, add_into, parse_ncpoly
from .quotient import Quotient, get_quotient

SECTIONS = {
    "f1": ("q z1", "q z2"),
    "f2": ("q z2^*", "-q^2 z1^*"),
    "f3": ("z4", "-z3"),
    "f4": ("q z3^*", "z4^*"),
}

G_ENTRIES = [
    ["q^2 R", "0", "q a", "q^2 b"],
    ["0", "q^2 R", "q b^*", "-q^3 a^*"],
    ["q a^*", "q b", "1 - R", "0"],
    ["q^2 b^*", "-q^3 a", "0", "1 - q^4 R"],
]

TRACE_G = "2 - (1-q^2)^2 R"


class NotInSigma4(ValueError):
    pass


@dataclass
class Section:
    F1: NCPoly
    F2: NCPoly

    @property
    def components(self):
        return (self.F1, self.F2)

    def render(self):
        return f"({self.F1.render()}, {self.F2.render()})"


class NCMatrix:
    """Square matrix with entries in a presentation."""

    def __init__(self, P: Presentation, entries):
        self.P = P
        self.entries = [[P.nf(e) for e in row] for row in entries]
        self.n = len(self.entries)

    @classmethod
    def parse(cls, P, rows):
        return cls(P, [[P.parse(e) for e in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "NCMatrix") -> "NCMatrix":
        P, n = self.P, self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = {}
                for k in range(n):
                    add_into(acc, P.mul_terms(self.entries[i][k].terms, other.entries[k][j].terms))
                row.append(NCPoly(P.alphabet, acc))
            out.append(row)
        return NCMatrix(P, out)

    def __sub__(self, other):
        return NCMatrix(self.P, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def dagger(self) -> "NCMatrix":
        return NCMatrix(self.P, [[self.P.star(self.entries[j][i]) for j in range(self.n)] for i in range(self.n)])

    def trace(self) -> NCPoly:
        acc = {}
        for i in range(self.n):
            add_into(acc, self.entries[i][i].terms)
        return NCPoly(self.P.alphabet, acc)

    def is_zero(self):
        return all(not e.terms for row in self.entries for e in row)

    def __eq__(self, other):
        return isinstance(other, NCMatrix) and (self - other).is_zero()

    def render(self):
        return [[e.render() for e in row] for row in self.entries]


def sections(s7: Presentation) -> dict[str, Section]:
    return {k: Section(s7.parse(a), s7.parse(b)) for k, (a, b) in SECTIONS.items()}


def pairing(F: Section, H: Section, s7: Presentation) -> NCPoly:
    return s7.mul(F.F1, s7.star(H.F1)) + s7.mul(F.F2, s7.star(H.F2))


def check_cotensor(F: Section, Q: Quotient) -> bool:
    return not cotensor_defect(F.F1.terms, F.F2.terms, Q)


def cotensor_defect(F1: dict, F2: dict, Q: Quotient) -> dict:
    """Residual of Delta_r(F_j) = sum_i F_i (x) [t_ij], keyed by (j, left word, class word)."""
    A = Q.U.alphabet
    cls = {(i, j): Q.reduce_terms({(A[f"t{i}{j}"],): Q.field.one}) for i in (1, 2) for j in (1, 2)}
    F = {1: F1, 2: F2}
    out = {}
    for j in (1, 2):
        lhs = Q.coact_r_terms(F[j])
        for i in (1, 2):
            for w, c in F[i].items():
                for v, d in cls[(i, j)].items():
                    add_into(lhs, {(w, v): c * d}, -1)
        add_into(out, {(j,) + k: c for k, c in lhs.items()})
    return out


def to_sigma4(x: NCPoly, sigma: Presentation, s7: Presentation, max_degree: int | None = None) -> NCPoly:
    """Write an S^7_q element as a Sigma^4_q polynomial (exact linear solve)."""
    max_degree = max_degree if max_degree is not None else max(x.degree() // 2, 0)
    images = embedding_images(s7)
    E = Echelon()
    for d in range(max_degree + 1):
        for w in sigma.normal_words(d):
            m = NCPoly(sigma.alphabet, {w: sigma.field.one})
            E.add(embed(m, s7, images).terms, tag=w)
    resid, comb = E.reduce(x.terms)
    if resid:
        raise NotInSigma4(f"{x.render()} is not in the image of Sigma^4_q up to degree {max_degree}")
    return NCPoly(sigma.alphabet, {w: -c for w, c in comb.items() if c})


def build_G(q=None) -> NCMatrix:
    """G_ij = <f_i, f_j> computed in S^7_q and pulled back to Sigma^4_q."""
    s7, sigma = build_s7q(q), build_sigma4q(q)
    f = list(sections(s7).values())
    rows = [[to_sigma4(pairing(fi, fj, s7), sigma, s7) for fj in f] for fi in f]
    return NCMatrix(sigma, rows)


def expected_G(q=None) -> NCMatrix:
    return NCMatrix.parse(build_sigma4q(q), G_ENTRIES)


def verify_projector(G: NCMatrix) -> dict:
    sq = (G @ G) - G
    herm = G - G.dagger()
    return {
        "idempotent": sq.is_zero(),
        "selfadjoint": herm.is_zero(),
        "G^2 - G": sq.render(),
        "G - G^dagger": herm.render(),
    }


def section_slice(d: int, Q: Quotient | None = None) -> list[Section]:
    """Basis of sections whose components have degree <= d."""
    Q = Q or get_quotient()
    s7 = Q.S7
    words = [w for k in range(d + 1) for w in s7.normal_words(k)]
    cols, labels = [], []
    for comp in (1, 2):
        for w in words:
            one = {w: Q.field.one}
            cols.append(cotensor_defect(one, {}, Q) if comp == 1 else cotensor_defect({}, one, Q))
            labels.append((comp, w))
    out = []
    for dep in nullspace(cols):
        F1, F2 = {}, {}
        for j, c in dep.items():
            comp, w = labels[j]
            add_into(F1 if comp == 1 else F2, {w: c})
        out.append(Section(NCPoly(s7.alphabet, F1), NCPoly(s7.alphabet, F2)))
    return out


def module_span(d: int, Q: Quotient | None = None) -> list[Section]:
    """Sigma^4_q-combinations m f_i with components of degree <= d."""
    Q = Q or get_quotient()
    s7 = Q.S7
    sigma = build_sigma4q(Q.field.q0)
    images = embedding_images(s7)
    fs = list(sections(s7).values())
    out = []
    for k in range((d - 1) // 2 + 1):
        for w in sigma.normal_words(k):
            m = embed(NCPoly(sigma.alphabet, {w: sigma.field.one}), s7, images)
            for f in fs:
                out.append(Section(s7.mul(m, f.F1), s7.mul(m, f.F2)))
    return out


def section_vector(s: Section) -> dict:
    v = {(1,) + (w,): c for w, c in s.F1.terms.items()}
    v.update({(2,) + (w,): c for w, c in s.F2.terms.items()})
    return v


# --- q = 1 classical cross-check -------------------------------------------

X = sp.symbols("x1:5", real=True)
Y = sp.symbols("y1:5", real=True)
Zc = [x + sp.I * y for x, y in zip(X, Y)]
Zb = [x - sp.I * y for x, y in zip(X, Y)]
SPHERE = sp.expand(sum(x**2 + y**2 for x, y in zip(X, Y)) - 1)


def mod_sphere(e):
    """Remainder of a polynomial modulo x1^2+...+y4^2 - 1 (eliminating x4^2)."""
    e = sp.expand(e)
    if e == 0:
        return e
    return sp.expand(sp.rem(e, SPHERE, X[3]))


class Quaternion:
    """h = c0 + c1 i + c2 j + c3 k with commutative (real) polynomial components."""

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = tuple(sp.expand(x) for x in (c0, c1, c2, c3))

    @classmethod
    def from_complex_pair(cls, alpha, beta):
        """alpha + beta j for complex alpha, beta."""
        a, b = sp.expand(alpha), sp.expand(beta)
        return cls(sp.re(a), sp.im(a), sp.re(b), sp.im(b))

    def __add__(self, o):
        o = o if isinstance(o, Quaternion) else Quaternion(o)
        return Quaternion(*(a + b for a, b in zip(self.c, o.c)))

    def __sub__(self, o):
        o = o if isinstance(o, Quaternion) else Quaternion(o)
        return Quaternion(*(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, o):
        return Quaternion(o) - self

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            return Quaternion(*(a * o for a in self.c))
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def conj(self):
        c0, c1, c2, c3 = self.c
        return Quaternion(c0, -c1, -c2, -c3)

    def reduce(self):
        return Quaternion(*(mod_sphere(x) for x in self.c))

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def pauli(self):
        """2x2 complex matrix of h = alpha + beta j: [[alpha, -beta], [conj(beta), conj(alpha)]]."""
        c0, c1, c2, c3 = self.c
        alpha, beta = c0 + sp.I * c1, c2 + sp.I * c3
        return sp.Matrix([[alpha, -beta], [sp.conjugate(beta), sp.conjugate(alpha)]])


def _re(e):
    return sp.expand(e)


def classical_functions():
    z, zb = Zc, Zb
    return {
        "R": sp.expand(z[0] * zb[0] + z[1] * zb[1]),
        "A": sp.expand(z[0] * zb[2] + z[1] * zb[3]),
        "B": sp.expand(z[0] * z[3] - z[1] * z[2]),
    }


def quaternion_projector():
    q1 = Quaternion.from_complex_pair(Zc[0], Zc[1])
    q2 = Quaternion.from_complex_pair(Zc[2], Zc[3])
    R = q1 * q1.conj()
    Qh = q1 * q2.conj()
    return [[R, Qh], [Qh.conj(), 1 - R]]


def complex_projector():
    f = classical_functions()
    R, A, B = f["R"], f["A"], f["B"]
    cA, cB = sp.conjugate(A), sp.conjugate(B)
    return sp.Matrix([
        [R, 0, A, B],
        [0, R, -cB, cA],
        [cA, -B, 1 - R, 0],
        [cB, A, 0, 1 - R],
    ]).applyfunc(sp.expand)


def _mat_mod_sphere(M):
    return M.applyfunc(mod_sphere)


def quantum_G_at_one():
    """The quantum projector at q = 1, as functions of z via the embedding formulas."""
    sigma = build_sigma4q(1)
    G = expected_G(1)
    z, zb = Zc, Zb
    values = {
        "a": z[0] * zb[3] - z[1] * zb[2],
        "b": z[0] * z[2] + z[1] * z[3],
        "R": z[0] * zb[0] + z[1] * zb[1],
    }
    values["a*"] = sp.conjugate(values["a"])
    values["b*"] = sp.conjugate(values["b"])
    names = sigma.alphabet.names

    def f(p):
        return sp.expand(sum(sp.Rational(int(c.numerator), int(c.denominator)) * sp.Mul(*[values[names[i]] for i in w]) for w, c in p.terms.items()))

    return sp.Matrix(4, 4, lambda i, j: f(G[i, j]))


def bundle_morphism(M):
    """Pull back along (z1, z2, z3, z4) -> (z1, z2, -z4, z3)."""
    sub = {X[2]: -X[3], Y[2]: -Y[3], X[3]: X[2], Y[3]: Y[2]}
    return M.applyfunc(lambda e: sp.expand(e.xreplace(sub)))


def classical_crosscheck() -> dict:
    """Commutative checks of the instanton projector and its quantum analogue at q = 1."""
    out = {}
    H = quaternion_projector()
    sq = [[(H[i][0] * H[0][j] + H[i][1] * H[1][j] - H[i][j]).reduce() for j in range(2)] for i in range(2)]
    out["quaternion_idempotent"] = all(x.is_zero() for row in sq for x in row)
    P = sp.Matrix(sp.BlockMatrix([[H[i][j].pauli() for j in range(2)] for i in range(2)])).applyfunc(sp.expand)
    G2 = complex_projector()
    out["pauli_matches_complex"] = (P - G2).applyfunc(sp.expand).is_zero_matrix
    out["complex_idempotent"] = _mat_mod_sphere(G2 * G2 - G2).is_zero_matrix
    out["complex_selfadjoint"] = (G2 - G2.H).applyfunc(sp.expand).is_zero_matrix
    f = classical_functions()
    C = sp.expand(f["A"] * sp.conjugate(f["A"]) + f["B"] * sp.conjugate(f["B"]) - f["R"] * (1 - f["R"]))
    out["AA*+BB*=R(1-R)"] = mod_sphere(C) == 0
    # quantum projector at q = 1 against the pulled-back classical one
    Gq = quantum_G_at_one()
    pulled = bundle_morphism(G2)
    match = None
    for signs in itertools.product((1, -1), repeat=3):
        D = sp.diag(1, *signs)
        if _mat_mod_sphere(D * pulled * D - Gq).is_zero_matrix:
            match = (1,) + signs
            break
    out["q1_matches_classical"] = match is not None
    out["section_signs"] = match
    return out
