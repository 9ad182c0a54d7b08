"""Semiclassical layer: the bialgebra cocycle on u(4), coisotropy, and Poisson brackets.

u(4) is handled as a 16-dimensional real space realised by antihermitian
4x4 matrices with Gaussian-rational entries.  A bivector in u(4)^u(4) is an
antisymmetric 16x16 rational matrix in the coordinates of the generated basis.

Commutative brackets live in sympy: z1..z4 and w1..w4 = z1*..z4* are treated
as independent polynomial variables, so the bracket is the biderivation
{f, g} = sum_{u,v} df/du dg/dv {u, v} and works unchanged on fractions.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import sympy as sp

from .algebras import build_s7q, build_sigma4q, build_sigma4q_localized
from .coeff import derivative_at_one, eval_at

I = sp.I


class NotInSpan(ValueError):
    pass


class NotASubalgebra(ValueError):
    pass


# --- u(4) ---


def elementary(i, j, n=4):
    m = sp.zeros(n, n)
    m[i - 1, j - 1] = 1
    return m


def H_(i):
    return I * (elementary(i, i) - elementary(i + 1, i + 1))


def E_(i):
    return (elementary(i, i + 1) + elementary(i + 1, i)) / (2 * I)


def F_(i):
    return (elementary(i, i + 1) - elementary(i + 1, i)) / 2


H_CENTRAL = I * sp.eye(4)

CONJUGATOR = sp.Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def lie_generators() -> dict:
    g = {}
    for i in (1, 2, 3):
        g[f"H{i}"] = H_(i)
        g[f"E{i}"] = E_(i)
        g[f"F{i}"] = F_(i)
    g["H"] = H_CENTRAL
    return g


def is_antihermitian(X) -> bool:
    return sp.simplify(X.H + X) == sp.zeros(*X.shape)


def bracket_mat(X, Y):
    return sp.expand(X * Y - Y * X)


def _realify(X) -> list:
    out = []
    for e in X:
        e = sp.nsimplify(sp.expand(e))
        out.append(sp.re(e))
        out.append(sp.im(e))
    return out


def wedge(x, y):
    """x ^ y = x y^T - y x^T on coordinate columns."""
    return x * y.T - y * x.T


class U4Bialgebra:
    """Generated basis of u(4), its structure maps, and the extended cocycle delta."""

    def __init__(self):
        gens = lie_generators()
        for name, X in gens.items():
            if not is_antihermitian(X):
                raise ValueError(f"{name} is not antihermitian")
        self.names: list[str] = []
        self.mats: list = []
        self.origin: dict = {}  # basis index -> generator name or (i, j) bracket pair
        rows = []
        order = ["H1", "H2", "H3", "H", "E1", "E2", "E3", "F1", "F2", "F3"]
        for n in order:
            if self._try_add(gens[n], rows):
                self.names.append(n)
                self.origin[len(self.mats) - 1] = n
        frontier = True
        while len(self.mats) < 16 and frontier:
            frontier = False
            for i, j in itertools.combinations(range(len(self.mats)), 2):
                Z = bracket_mat(self.mats[i], self.mats[j])
                if self._try_add(Z, rows):
                    self.names.append(f"[{self.names[i]},{self.names[j]}]")
                    self.origin[len(self.mats) - 1] = (i, j)
                    frontier = True
                    if len(self.mats) == 16:
                        break
        if len(self.mats) != 16:
            raise RuntimeError("generators do not span u(4)")
        B = sp.Matrix(rows).T  # 32 x 16
        self._pinv = (B.T * B).inv() * B.T
        self.ad = [self._ad_matrix(X) for X in self.mats]
        self._delta = self._extend_delta(gens)

    def _try_add(self, X, rows) -> bool:
        v = _realify(X)
        if sp.Matrix(rows + [v]).rank() > len(rows):
            rows.append(v)
            self.mats.append(X)
            return True
        return False

    @property
    def dim(self):
        return len(self.mats)

    def coords(self, X):
        """Real coordinates of X in the generated basis; NotInSpan if X is not in u(4)."""
        v = sp.Matrix(_realify(X))
        c = self._pinv * v
        if self.from_coords(c) != sp.expand(X):
            raise NotInSpan("matrix is not in u(4)")
        return c

    def from_coords(self, c):
        out = sp.zeros(4, 4)
        for k, ck in enumerate(c):
            if ck:
                out += ck * self.mats[k]
        return sp.expand(out)

    def _ad_matrix(self, X):
        return sp.Matrix.hstack(*[self.coords(bracket_mat(X, Y)) for Y in self.mats])

    def ad_of(self, x):
        """ad in coordinates, linear in the coordinate column x."""
        out = sp.zeros(16, 16)
        for k, xk in enumerate(x):
            if xk:
                out += xk * self.ad[k]
        return out

    @staticmethod
    def act(A, W):
        """(ad (x) 1 + 1 (x) ad) on a bivector matrix."""
        return A * W + W * A.T

    def _extend_delta(self, gens):
        zero = sp.zeros(16, 16)
        values = {
            "H1": zero, "H2": zero, "H3": zero, "H": zero,
        }
        for i in (1, 2, 3):
            h = self.coords(gens[f"H{i}"])
            values[f"E{i}"] = wedge(self.coords(gens[f"E{i}"]), h)
            values[f"F{i}"] = wedge(self.coords(gens[f"F{i}"]), h)
        d = []
        for k in range(16):
            o = self.origin[k]
            if isinstance(o, str):
                d.append(values[o])
            else:
                i, j = o
                d.append(self.act(self.ad[i], d[j]) - self.act(self.ad[j], d[i]))
        return d

    def delta_coords(self, x):
        out = sp.zeros(16, 16)
        for k, xk in enumerate(x):
            if xk:
                out += xk * self._delta[k]
        return out

    def delta(self, X):
        return self.delta_coords(self.coords(X))

    def wedge_of(self, X, Y):
        return wedge(self.coords(X), self.coords(Y))

    def cocycle_defects(self) -> list[tuple[str, str]]:
        """Pairs of basis elements where delta[X,Y] differs from the ad-formula."""
        bad = []
        for i, j in itertools.combinations(range(16), 2):
            lhs = self.delta_coords(self.ad[i][:, j])
            rhs = self.act(self.ad[i], self._delta[j]) - self.act(self.ad[j], self._delta[i])
            if lhs != rhs:
                bad.append((self.names[i], self.names[j]))
        return bad

    # subalgebras
    def span_basis(self, mats) -> list:
        """Independent coordinate columns spanning the given matrices."""
        cols = []
        for X in mats:
            c = self.coords(X)
            if sp.Matrix.hstack(*(cols + [c])).rank() > len(cols):
                cols.append(c)
        return cols

    def is_subalgebra(self, cols) -> bool:
        M = sp.Matrix.hstack(*cols)
        r = len(cols)
        for x, y in itertools.combinations(cols, 2):
            z = self.ad_of(x) * y
            if sp.Matrix.hstack(M, z).rank() > r:
                return False
        return True

    def closure(self, mats) -> list:
        """Coordinate basis of the Lie subalgebra generated by ``mats``."""
        cols = self.span_basis(mats)
        grown = True
        while grown:
            grown = False
            for x, y in itertools.combinations(list(cols), 2):
                z = self.ad_of(x) * y
                if sp.Matrix.hstack(*(cols + [z])).rank() > len(cols):
                    cols.append(z)
                    grown = True
        return cols

    def _adapted(self, cols):
        """Basis change matrix whose first columns span h."""
        P = list(cols)
        for k in range(16):
            e = sp.zeros(16, 1)
            e[k] = 1
            if sp.Matrix.hstack(*(P + [e])).rank() > len(P):
                P.append(e)
        return sp.Matrix.hstack(*P)

    def classify(self, mats, close: bool = False) -> dict:
        """Coisotropy (delta(h) in g^h) and Poisson-Lie (delta(h) in h^h) of a subalgebra."""
        cols = self.closure(mats) if close else self.span_basis(mats)
        if not self.is_subalgebra(cols):
            raise NotASubalgebra("span is not closed under the bracket")
        k = len(cols)
        P = self._adapted(cols)
        Pinv = P.inv()
        coiso = poisson = True
        for x in cols:
            Wp = Pinv * self.delta_coords(x) * Pinv.T
            if any(Wp[a, b] for a in range(k, 16) for b in range(k, 16)):
                coiso = False
            if any(Wp[a, b] for a in range(16) for b in range(16) if a >= k or b >= k):
                poisson = False
        return {"dim": k, "coisotropic": coiso, "poisson_lie": poisson}


@lru_cache(maxsize=None)
def u4() -> U4Bialgebra:
    return U4Bialgebra()


def delta(X):
    return u4().delta(X)


def is_coisotropic(mats, close: bool = False) -> bool:
    return u4().classify(mats, close)["coisotropic"]


def su2_diagonal() -> list:
    return [H_(1) + H_(3), E_(1) + E_(3), F_(1) + F_(3)]


def conjugate(mats, g=CONJUGATOR) -> list:
    gi = g.inv()
    return [sp.expand(g * X * gi) for X in mats]


def u3_generators() -> list:
    h = H_(1) / 4 + H_(2) / 2 + 3 * H_(3) / 4 + 3 * H_CENTRAL / 4
    return [h, H_(1), H_(2), E_(1), E_(2), F_(1), F_(2)]


SUBGROUPS = {
    "diag": (su2_diagonal, False, {"coisotropic": False}),
    "conjugated": (lambda: conjugate(su2_diagonal()), False, {"coisotropic": True}),
    "u3": (u3_generators, True, {"coisotropic": True, "poisson_lie": True}),
}


def coisotropy_report(name: str) -> dict:
    make, close, expected = SUBGROUPS[name]
    got = u4().classify(make(), close)
    ok = all(got[k] == v for k, v in expected.items())
    return {"subgroup": name, "expected": expected, **got, "ok": ok}


# --- commutative brackets on C^4 ---

Z = sp.symbols("z1:5")
W = sp.symbols("w1:5")  # w_i stands for z_i^*
VARS = Z + W
SPHERE = sum(Z[i] * W[i] for i in range(4)) - 1


def _table(literal: bool = False) -> dict:
    """Generator brackets {u, v} for u, v in VARS.

    The default table is fixed by the quantum relations of S^7_q; ``literal``
    gives the opposite-sign off-diagonal table with the diagonal read as
    (j-1) z_j z_j^*.
    """
    s = 1 if literal else -1
    t = {}
    for i, j in itertools.combinations(range(4), 2):
        t[(Z[i], Z[j])] = s * Z[i] * Z[j]
        t[(W[i], W[j])] = -s * W[i] * W[j]
    for i in range(4):
        for j in range(4):
            if i != j:
                t[(Z[i], W[j])] = -s * Z[i] * W[j]
    for k in range(4):
        if literal:
            t[(W[k], Z[k])] = k * Z[k] * W[k]
        else:
            t[(W[k], Z[k])] = 2 * sum((Z[j] * W[j] for j in range(k)), sp.Integer(0))
    full = {}
    for (u, v), e in t.items():
        full[(u, v)] = sp.expand(e)
        full[(v, u)] = sp.expand(-e)
    return full


TABLE = _table()
LITERAL_TABLE = _table(literal=True)


def bracket(f, g, table=None):
    table = TABLE if table is None else table
    out = 0
    df = {u: sp.diff(f, u) for u in VARS}
    dg = {v: sp.diff(g, v) for v in VARS}
    for (u, v), e in table.items():
        if df[u] != 0 and dg[v] != 0:
            out += df[u] * dg[v] * e
    return sp.expand(out) if sp.denom(sp.together(out)) == 1 else sp.together(out)


def conj(f):
    swap = {**{Z[i]: W[i] for i in range(4)}, **{W[i]: Z[i] for i in range(4)}}
    return f.xreplace(swap)


def mod_sphere(f):
    """Remainder of a polynomial (or the numerator of a fraction) modulo the sphere."""
    num, den = sp.fraction(sp.together(sp.expand(f)))
    num = sp.expand(num)
    if num == 0:
        return sp.Integer(0)
    r = sp.reduced(num, [SPHERE], *VARS, order="grevlex")[1]
    return sp.expand(r) / den


def equal_on_sphere(f, g) -> bool:
    return mod_sphere(sp.together(f - g)) == 0


# coinvariant coordinates on S^4 and the stereographic chart
R_ = sp.expand(Z[0] * W[0] + Z[1] * W[1])
A_ = sp.expand(Z[0] * W[3] - Z[1] * W[2])
B_ = sp.expand(Z[0] * Z[2] + Z[1] * Z[3])
S4_COORDS = {"a": A_, "a*": conj(A_), "b": B_, "b*": conj(B_), "R": R_}
ZETA = {
    "zeta1": A_ / R_, "zeta1*": conj(A_) / R_,
    "zeta2": B_ / R_, "zeta2*": conj(B_) / R_,
}


def _s4_table():
    a, ac, b, bc, R = (S4_COORDS[k] for k in ("a", "a*", "b", "b*", "R"))
    return [
        ("{a,R}", ("a", "R"), -2 * a * R),
        ("{b,R}", ("b", "R"), 2 * b * R),
        ("{a,b}", ("a", "b"), -3 * a * b),
        ("{a,b*}", ("a", "b*"), a * bc),
        ("{a,a*}", ("a", "a*"), -2 * a * ac + 2 * R ** 2),
        ("{b,b*}", ("b", "b*"), 4 * b * bc - 2 * R),
    ]


def _zeta_table():
    z1, z1c, z2, z2c = (ZETA[k] for k in ("zeta1", "zeta1*", "zeta2", "zeta2*"))
    return [
        ("{zeta1,zeta2}", ("zeta1", "zeta2"), z1 * z2),
        ("{zeta1,zeta1*}", ("zeta1", "zeta1*"), 2 * (1 + z1 * z1c)),
        ("{zeta1,zeta2*}", ("zeta1", "zeta2*"), z1 * z2c),
        ("{zeta2,zeta2*}", ("zeta2", "zeta2*"), -2 * (1 + z1 * z1c + z2 * z2c)),
    ]


def bracket_table_check(table=None) -> list[dict]:
    """Evaluate the S^4 and stereographic bracket tables on the sphere."""
    rows = []
    coords = {**S4_COORDS, **ZETA}
    for label, (x, y), expected in _s4_table() + _zeta_table():
        got = bracket(coords[x], coords[y], table)
        rows.append({"bracket": label, "ok": equal_on_sphere(got, expected)})
    return rows


def jacobi_residual(f, g, h, table=None):
    j = bracket(bracket(f, g, table), h, table) + bracket(bracket(g, h, table), f, table) \
        + bracket(bracket(h, f, table), g, table)
    return sp.simplify(sp.together(j))


def _random_poly(rng, degree):
    terms = []
    for _ in range(3):
        m = sp.Integer(rng.randint(-3, 3))
        for _ in range(rng.randint(0, degree)):
            m *= rng.choice(VARS)
        terms.append(m)
    return sp.expand(sum(terms))


def jacobi_check(sample_degree: int = 2, samples: int = 5, seed: int = 0, table=None) -> dict:
    """Jacobi residual on all generator triples and on random bounded-degree triples."""
    gen_fail = []
    for f, g, h in itertools.combinations(VARS, 3):
        if jacobi_residual(f, g, h, table) != 0:
            gen_fail.append((str(f), str(g), str(h)))
    for u, v in itertools.permutations(VARS, 2):
        if jacobi_residual(u, u, v, table) != 0:
            gen_fail.append((str(u), str(u), str(v)))
    rng = random.Random(seed)
    rand_fail = 0
    for _ in range(samples):
        f, g, h = (_random_poly(rng, sample_degree) for _ in range(3))
        if jacobi_residual(f, g, h, table) != 0:
            rand_fail += 1
    return {"generator_failures": gen_fail, "random_failures": rand_fail, "ok": not gen_fail and not rand_fail}


def casimir_check() -> dict:
    """{|a|^2 + |b|^2 - R(1-R), x} on the sphere, and {|z|^2, z_i} on C^4."""
    C = S4_COORDS["a"] * S4_COORDS["a*"] + S4_COORDS["b"] * S4_COORDS["b*"] - R_ * (1 - R_)
    s4 = {k: equal_on_sphere(bracket(C, v), 0) for k, v in S4_COORDS.items()}
    norm = sum(Z[i] * W[i] for i in range(4))
    c4 = {str(u): sp.expand(bracket(norm, u)) == 0 for u in VARS}
    return {"s4_relation_respected": all(s4.values()), "s4": s4,
            "sphere_casimir": all(c4.values()), "c4": c4}


def rank_report() -> dict:
    """Rank of the S^4 bracket matrix at the pole R = 0 and of the stereographic one."""
    keys = ["a", "a*", "b", "b*", "R"]
    M = sp.Matrix(5, 5, lambda i, j: bracket(S4_COORDS[keys[i]], S4_COORDS[keys[j]]))
    pole = {Z[0]: 0, Z[1]: 0, W[0]: 0, W[1]: 0, Z[2]: 1, W[2]: 1}
    at_pole = M.subs(pole).rank()
    zk = ["zeta1", "zeta1*", "zeta2", "zeta2*"]
    N = sp.Matrix(4, 4, lambda i, j: bracket(ZETA[zk[i]], ZETA[zk[j]]))
    point = {Z[0]: 1, W[0]: 1, Z[1]: 0, W[1]: 0, Z[2]: 0, W[2]: 0, Z[3]: 0, W[3]: 0}
    return {"rank_at_R0": at_pole, "stereographic_rank": N.subs(point).rank()}


# --- q -> 1 comparison with the quantum relations ---

DIAGONAL_FORMS = {
    "literal": "{z_j^*, z_j} = (j-1) z_j z_j^*",
    "derived": "{z_j^*, z_j} = 2 sum_{i<j} z_i z_i^*",
}


def _classical_word(P, w, images):
    names = P.alphabet.names
    out = sp.Integer(1)
    for i in w:
        out *= images[names[i]]
    return out


def commutator_limit(P, x: str, y: str, images: dict):
    """lim_{q->1} nf(xy - yx)/(q-1), mapped to commutative coordinates."""
    X, Y = P.parse(x), P.parse(y)
    c = P.nf(P.mul(X, Y) - P.mul(Y, X))
    out = sp.Integer(0)
    for w, coeff in c.terms.items():
        if eval_at(coeff, 1) != 0:
            raise ValueError(f"commutator [{x},{y}] does not vanish at q = 1")
        d = derivative_at_one(coeff)
        if d:
            out += sp.Rational(int(d.numerator), int(d.denominator)) * _classical_word(P, w, images)
    return sp.together(out)


def _sign(limit, br):
    """s with limit = s * br on the sphere; None if neither sign fits, 0 if both vanish."""
    lz = equal_on_sphere(limit, 0)
    bz = equal_on_sphere(br, 0)
    if lz and bz:
        return 0
    for s in (1, -1):
        if equal_on_sphere(limit, s * br):
            return s
    return None


def _pairs(P, letters):
    texts = {n: n.replace("*", "^*") for n in letters}
    for x, y in itertools.combinations_with_replacement(letters, 2):
        yield x, y, texts[x], texts[y]


def semiclassical_limit_check() -> dict:
    """Find one global sign s with lim (xy - yx)/(q-1) = s {x, y} on every generator pair."""
    rows = []
    S7 = build_s7q()
    z_images = {**{f"z{i + 1}": Z[i] for i in range(4)}, **{f"z{i + 1}*": W[i] for i in range(4)}}
    for x, y, tx, ty in _pairs(S7, list(z_images)):
        lim = commutator_limit(S7, tx, ty, z_images)
        br = bracket(z_images[x], z_images[y])
        lit = bracket(z_images[x], z_images[y], LITERAL_TABLE)
        rows.append({"algebra": "s7", "pair": (x, y), "s": _sign(lim, br), "literal_s": _sign(lim, lit)})
    S4 = build_sigma4q()
    for x, y, tx, ty in _pairs(S4, list(S4_COORDS)):
        lim = commutator_limit(S4, tx, ty, S4_COORDS)
        br = bracket(S4_COORDS[x], S4_COORDS[y])
        rows.append({"algebra": "sigma4", "pair": (x, y), "s": _sign(lim, br)})
    L = build_sigma4q_localized()
    loc_images = {**S4_COORDS, "Ri": 1 / R_}
    zt = L.zeta_texts
    for x, y in itertools.combinations_with_replacement(list(ZETA), 2):
        lim = commutator_limit(L, zt[x], zt[y], loc_images)
        br = bracket(ZETA[x], ZETA[y])
        rows.append({"algebra": "zeta", "pair": (x, y), "s": _sign(lim, br)})
    signs = {r["s"] for r in rows} - {0}
    global_s = signs.pop() if len(signs) == 1 and None not in signs else None
    off_diag = {r["literal_s"] for r in rows if r["algebra"] == "s7" and r["pair"][0][:2] != r["pair"][1][:2]} - {0}
    diag_literal = [r["literal_s"] for r in rows if r["algebra"] == "s7" and r["pair"][0][:2] == r["pair"][1][:2] and r["pair"][0] != r["pair"][1]]
    return {
        "rows": rows,
        "global_sign": global_s,
        "ok": global_s is not None,
        # +1 if the literal off-diagonal table agrees with the derived one, -1 if opposite
        "literal_offdiagonal_relative_sign": off_diag.pop() * global_s if len(off_diag) == 1 and global_s else None,
        "literal_diagonal_consistent": all(s == global_s for s in diag_literal),
        "diagonal_forms": DIAGONAL_FORMS,
    }
