"""Concrete presentations: U_q(4), S^7_q, Sigma^4_q and its R-localisation.

Every builder takes ``q``: ``None`` keeps q symbolic, a rational value
specialises it (``q=1`` gives the commutative classical algebras).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .coeff import as_rational
from .ncpoly import (
    SYMBOLIC,
    Alphabet,
    Generator,
    NCPoly,
    RewriteSystem,
    ScalarField,
    add_into,
    parse_ncpoly,
)

STEP_LIMIT = 10_000_000  # internal computations; user-facing calls pass their own


def field_for(q) -> ScalarField:
    return SYMBOLIC if q is None else ScalarField(as_rational(q))


class Presentation:
    """An algebra given by a confluent rewriting system plus a star map."""

    def __init__(self, name: str, rs: RewriteSystem, star_images: dict | None = None):
        self.name = name
        self.rs = rs
        self.alphabet = rs.alphabet
        self.field = rs.field
        self._star_images = star_images or {}

    @property
    def q(self):
        return self.field.q

    def gen(self, name) -> NCPoly:
        return NCPoly(self.alphabet, {(self.alphabet[name],): self.field.one})

    def scalar(self, c) -> NCPoly:
        return NCPoly(self.alphabet, {(): self.field.coerce(c)})

    def one(self):
        return self.scalar(1)

    def parse(self, text: str) -> NCPoly:
        return self.nf(parse_ncpoly(text, self.alphabet, self.field))

    def nf_terms(self, terms: dict) -> dict:
        return self.rs.nf_terms(terms)

    def nf(self, p: NCPoly) -> NCPoly:
        return NCPoly(self.alphabet, self.nf_terms(p.terms))

    def mul_terms(self, a: dict, b: dict) -> dict:
        return self.nf_terms(self.rs.mul_terms(a, b))

    def mul(self, *ps: NCPoly) -> NCPoly:
        terms = {(): self.field.one}
        for p in ps:
            terms = self.mul_terms(terms, p.terms)
        return NCPoly(self.alphabet, terms)

    def pow(self, p: NCPoly, n: int) -> NCPoly:
        return self.mul(*([p] * n)) if n else self.one()

    def is_zero(self, p: NCPoly) -> bool:
        return not self.nf(p).terms

    def equal(self, p: NCPoly, r: NCPoly) -> bool:
        return self.is_zero(p - r)

    # star structure
    def star_letter(self, i: int) -> dict:
        img = self._star_images.get(i)
        if img is not None:
            return img
        j = self.alphabet.star_index[i]
        if j is None:
            raise ValueError(f"no star image for {self.alphabet.names[i]}")
        return {(j,): self.field.one}

    def star_terms(self, terms: dict) -> dict:
        out = {}
        for w, c in terms.items():
            acc = {(): c}  # q is real and coefficients are rational: conjugation is trivial
            for i in reversed(w):
                acc = self.rs.mul_terms(acc, self.star_letter(i))
            add_into(out, acc)
        return self.nf_terms(out)

    def star(self, p: NCPoly) -> NCPoly:
        return NCPoly(self.alphabet, self.star_terms(p.terms))

    def normal_words(self, degree: int):
        return self.rs.irreducible_words(degree)

    def __repr__(self):
        return f"<Presentation {self.name} over {self.field!r}: {len(self.rs.rules)} rules>"


def _complete(alphabet, relations, field, name):
    rs = RewriteSystem.from_relations(alphabet, relations, field, STEP_LIMIT)
    return rs.complete(max_rules=2000)


def _rels(alphabet, field, texts):
    return [parse_ncpoly(t, alphabet, field).terms for t in texts]


# --- U_q(4) ---

OFF_BLOCK = [(1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2)]
BLOCK34 = [(3, 3), (3, 4), (4, 3), (4, 4)]
BLOCK12 = [(1, 1), (1, 2), (2, 1), (2, 2)]


def tname(i, j):
    return f"t{i}{j}"


def _inversions(seq):
    return sum(1 for a, b in itertools.combinations(seq, 2) if a > b)


class QuantumGroup(Presentation):
    """U_q(4): FRT generators t_ij and a central letter ``Dinv`` for D_q^{-1}.

    The rewriting system presents A_q(4)[Dinv] with Dinv central; the
    relation D_q Dinv = 1 is imposed by ``nf`` through division by D_q,
    whose leading word t11 t22 t33 t44 is unique.
    """

    n = 4

    def __init__(self, name, rs):
        super().__init__(name, rs)
        self.dinv = rs.alphabet["Dinv"]
        self._diag = tuple(sorted(rs.alphabet[tname(i, i)] for i in range(1, 5)))
        self.qdet_terms = self.rs.nf_terms(self.minor_terms((1, 2, 3, 4), (1, 2, 3, 4)))
        self._S = {}
        for i in range(1, 5):
            for j in range(1, 5):
                rows = tuple(r for r in range(1, 5) if r != j)
                cols = tuple(c for c in range(1, 5) if c != i)
                m = self.minor_terms(rows, cols)
                sign = (-self.field.q) ** (i - j)
                self._S[self.alphabet[tname(i, j)]] = self.rs.nf_terms(
                    {w + (self.dinv,): c * sign for w, c in m.items()}
                )
        self._S[self.dinv] = self.qdet_terms
        for i in range(1, 5):
            for j in range(1, 5):
                self._star_images[self.alphabet[tname(i, j)]] = self._S[self.alphabet[tname(j, i)]]
        self._star_images[self.dinv] = self.qdet_terms

    def t(self, i, j) -> NCPoly:
        return self.gen(tname(i, j))

    def minor_terms(self, rows, cols) -> dict:
        """Quantum minor: sum over row permutations of (-q)^inv t_{r1 c1}...t_{rm cm}."""
        mq = -self.field.q
        out = {}
        for perm in itertools.permutations(rows):
            w = tuple(self.alphabet[tname(r, c)] for r, c in zip(perm, cols))
            add_into(out, {w: mq ** _inversions(perm)})
        return out

    def minor(self, rows, cols) -> NCPoly:
        return self.nf(NCPoly(self.alphabet, self.minor_terms(rows, cols)))

    @property
    def qdet(self) -> NCPoly:
        return NCPoly(self.alphabet, self.qdet_terms)

    def nf_terms(self, terms: dict) -> dict:
        return self._cancel_det(self.rs.nf_terms(terms))

    def _cancel_det(self, terms: dict) -> dict:
        d = self.dinv
        groups = {}
        for w, c in terms.items():
            k = 0
            while k < len(w) and w[k] == d:
                k += 1
            groups.setdefault(k, {})[w[k:]] = c
        if not groups or max(groups) == 0:
            return terms
        key = self.alphabet.key
        diag = self._diag
        top = max(groups)
        for k in range(top, 0, -1):
            X = dict(groups.get(k, {}))
            rem, quot = {}, {}
            while X:
                lm = max(X, key=key)
                c = X[lm]
                u = _remove_sorted(lm, diag)
                if u is None:
                    rem[lm] = c
                    del X[lm]
                    continue
                prod = self.rs.mul_terms(self.qdet_terms, {u: self.field.one})
                f = c / prod[lm]
                add_into(X, prod, -f)
                add_into(quot, {u: f})
                X.pop(lm, None)
            groups[k] = rem
            add_into(groups.setdefault(k - 1, {}), quot)
        out = {}
        for k, g in groups.items():
            pre = (d,) * k
            for w, c in g.items():
                out[pre + w] = c
        return out

    # Hopf structure
    def antipode_terms(self, terms: dict) -> dict:
        out = {}
        for w, c in terms.items():
            acc = {(): c}
            for i in reversed(w):
                acc = self.rs.mul_terms(acc, self._S[i])
            add_into(out, acc)
        return self.nf_terms(out)

    def antipode(self, p: NCPoly) -> NCPoly:
        return NCPoly(self.alphabet, self.antipode_terms(p.terms))

    def coproduct_letter(self, i: int) -> dict:
        one = self.field.one
        if i == self.dinv:
            return {((i,), (i,)): one}
        a, b = self.alphabet.names[i][1], self.alphabet.names[i][2]
        return {
            ((self.alphabet[f"t{a}{k}"],), (self.alphabet[f"t{k}{b}"],)): one for k in range(1, 5)
        }

    def coproduct(self, p: NCPoly) -> dict:
        """Delta(p) as ``{(left word, right word): coeff}`` in normal form."""
        raw = {}
        for w, c in p.terms.items():
            acc = {((), ()): c}
            for i in w:
                nxt = {}
                for (l, r), d in acc.items():
                    for (l2, r2), e in self.coproduct_letter(i).items():
                        add_into(nxt, {(l + l2, r + r2): d * e})
                acc = nxt
            add_into(raw, acc)
        return self.normalize_tensor(raw)

    def normalize_tensor(self, raw: dict) -> dict:
        out = {}
        for (l, r), c in raw.items():
            for l2, a in self.nf_terms({l: self.field.one}).items():
                for r2, b in self.nf_terms({r: self.field.one}).items():
                    add_into(out, {(l2, r2): c * a * b})
        return out

    def counit_terms(self, terms: dict):
        total = self.field.zero
        for w, c in terms.items():
            ok = True
            for i in w:
                if i == self.dinv:
                    continue
                name = self.alphabet.names[i]
                if name[1] != name[2]:
                    ok = False
                    break
            if ok:
                total = total + c
        return total

    def counit(self, p: NCPoly):
        return self.counit_terms(p.terms)

    def transpose(self, p: NCPoly) -> NCPoly:
        """The algebra automorphism tau: t_ij -> t_ji (Dinv fixed)."""
        perm = {}
        for i, name in enumerate(self.alphabet.names):
            perm[i] = i if i == self.dinv else self.alphabet[f"t{name[2]}{name[1]}"]
        raw = {tuple(perm[i] for i in w): c for w, c in p.terms.items()}
        return NCPoly(self.alphabet, self.nf_terms(raw))


def _remove_sorted(word, sub):
    """Remove the multiset ``sub`` from the sorted word; None if not contained."""
    out = list(word)
    for x in sub:
        try:
            out.remove(x)
        except ValueError:
            return None
    return tuple(out)


def uq4_alphabet() -> Alphabet:
    gens = [Generator("Dinv", None, 0)]
    for i, j in OFF_BLOCK + BLOCK34 + BLOCK12:
        gens.append(Generator(tname(i, j), None, i * j))
    return Alphabet(gens)


def uq4_relations(alphabet, field):
    q = field.q
    one = field.one
    T = lambda i, j: alphabet[tname(i, j)]
    rels = []
    rng = range(1, 5)
    for i in rng:
        for j, l in itertools.combinations(rng, 2):
            # same row / same column
            rels.append({(T(i, j), T(i, l)): one, (T(i, l), T(i, j)): -q})
            rels.append({(T(j, i), T(l, i)): one, (T(l, i), T(j, i)): -q})
    for i, k in itertools.combinations(rng, 2):
        for j, l in itertools.combinations(rng, 2):
            rels.append({(T(i, l), T(k, j)): one, (T(k, j), T(i, l)): -one})
            rels.append(
                add_into(
                    {(T(i, j), T(k, l)): one, (T(k, l), T(i, j)): -one},
                    {(T(i, l), T(k, j)): -(q - one / q)},
                )
            )
    d = alphabet["Dinv"]
    for x in range(len(alphabet)):
        if x != d:
            rels.append({(x, d): one, (d, x): -one})
    return rels


@lru_cache(maxsize=None)
def build_uq4(q=None) -> QuantumGroup:
    field = field_for(q)
    A = uq4_alphabet()
    rs = _complete(A, uq4_relations(A, field), field, "uq4")
    return QuantumGroup("uq4", rs)


# --- S^7_q ---


def s7_alphabet() -> Alphabet:
    # z4, z4* last so the sphere relation's leading word z4 z4* stays contiguous
    gens = [Generator(f"z{i}", f"z{i}*") for i in range(1, 4)]
    gens += [Generator(f"z{i}*", f"z{i}") for i in range(1, 4)]
    gens += [Generator("z4", "z4*"), Generator("z4*", "z4")]
    return Alphabet(gens)


def s7_relation_texts():
    texts = []
    for i, j in itertools.combinations(range(1, 5), 2):
        texts.append(f"z{i} z{j} - q z{j} z{i}")
        texts.append(f"z{j}^* z{i}^* - q z{i}^* z{j}^*")
    for i in range(1, 5):
        for j in range(1, 5):
            if i != j:
                texts.append(f"z{j}^* z{i} - q z{i} z{j}^*")
    for k in range(1, 5):
        lower = "".join(f" + z{j} z{j}^*" for j in range(1, k))
        if lower:
            texts.append(f"z{k}^* z{k} - z{k} z{k}^* - (1-q^2)*(0{lower})")
        else:
            texts.append(f"z{k}^* z{k} - z{k} z{k}^*")
    texts.append("z1 z1^* + z2 z2^* + z3 z3^* + z4 z4^* - 1")
    return texts


@lru_cache(maxsize=None)
def build_s7q(q=None) -> Presentation:
    field = field_for(q)
    A = s7_alphabet()
    rs = _complete(A, _rels(A, field, s7_relation_texts()), field, "s7q")
    P = Presentation("s7q" if q != 1 else "classical-s7", rs)
    P.embedding_texts = {
        "a": "z1 z4^* - z2 z3^*",
        "b": "z1 z3 + q^-1 z2 z4",
        "R": "z1 z1^* + z2 z2^*",
    }
    return P


# --- Sigma^4_q ---

SIGMA4_RELATIONS = [
    "R a - q^-2 a R",
    "R b - q^2 b R",
    "a b - q^3 b a",
    "a b^* - q^-1 b^* a",
    "a a^* + q^2 b b^* - R + q^2 R^2",
    "a a^* - q^2 a^* a - (1-q^2) R^2",
    "b^* b - q^4 b b^* - (1-q^2) R",
]


def sigma4_alphabet(localized=False) -> Alphabet:
    # a, b weigh more than R so that a a* and b b* lead over R^2
    gens = [Generator("a*", "a", 1), Generator("a", "a*", 1), Generator("R", "R", 0)]
    if localized:
        gens.append(Generator("Ri", "Ri", 0))
    gens += [Generator("b*", "b", 1), Generator("b", "b*", 1)]
    return Alphabet(gens)


def _star_raw(A: Alphabet, terms: dict) -> dict:
    """Star on the free algebra of a star-closed alphabet (word reversal)."""
    out = {}
    for w, c in terms.items():
        add_into(out, {tuple(A.star_index[i] for i in reversed(w)): c})
    return out


def sigma4_relations(A, field, star_closed=True):
    rels = _rels(A, field, SIGMA4_RELATIONS)
    if star_closed:
        rels = rels + [_star_raw(A, r) for r in rels]
    return rels


@lru_cache(maxsize=None)
def build_sigma4q(q=None) -> Presentation:
    field = field_for(q)
    A = sigma4_alphabet()
    rs = _complete(A, sigma4_relations(A, field), field, "sigma4q")
    return Presentation("sigma4q" if q != 1 else "classical-s4", rs)


def sigma4_pattern_words(P: Presentation, degree: int) -> set:
    """Words a*^i1 a^i2 R^j b*^k1 b^k2 with k1 k2 = 0 of the given length."""
    A = P.alphabet
    ast, a, R, bst, b = (A[n] for n in ("a*", "a", "R", "b*", "b"))
    out = set()
    for i1, i2, j, k in itertools.product(range(degree + 1), repeat=4):
        rest = degree - i1 - i2 - j - k
        if rest < 0 or (k and rest):
            continue
        out.add((ast,) * i1 + (a,) * i2 + (R,) * j + (bst,) * k + (b,) * rest)
    return out


def basis_pattern_check(P: Presentation, max_degree: int = 4) -> list[dict]:
    rows = []
    for d in range(max_degree + 1):
        normal = set(P.normal_words(d))
        pattern = sigma4_pattern_words(P, d)
        rows.append({"degree": d, "normal": len(normal), "pattern": len(pattern), "ok": normal == pattern})
    return rows


# R x = lam x R  implies  x Ri = lam Ri x
R_COMMUTATION = {"a": "q^-2", "b": "q^2", "a*": "q^2", "b*": "q^-2"}


def localized_relation_texts():
    texts = ["R Ri - 1", "Ri R - 1"]
    for x, lam in R_COMMUTATION.items():
        xs = x.replace("*", "^*")
        texts.append(f"{xs} Ri - {lam} Ri {xs}")
    return texts


@lru_cache(maxsize=None)
def build_sigma4q_localized(q=None) -> Presentation:
    field = field_for(q)
    A = sigma4_alphabet(localized=True)
    rels = sigma4_relations(A, field) + _rels(A, field, localized_relation_texts())
    rs = _complete(A, rels, field, "sigma4q-loc")
    P = Presentation("sigma4q-loc", rs)
    P.zeta_texts = {"zeta1": "Ri a", "zeta2": "b Ri", "zeta1*": "a^* Ri", "zeta2*": "Ri b^*"}
    return P


ZETA_RELATIONS = [
    ("zeta1 zeta2", "q^-1 zeta2 zeta1"),
    ("zeta1 zeta1*", "q^-2 zeta1* zeta1 + (1-q^2)"),
    ("zeta1 zeta2*", "q^-1 zeta2* zeta1"),
    ("zeta2 zeta2*", "q^2 zeta2* zeta2 - (1-q^2)(q^2 + zeta1* zeta1)"),
]


def zeta_relation_residuals(P: Presentation):
    """Substitute zeta1 = R^-1 a, zeta2 = b R^-1 into the stereographic relations."""
    names = {k: P.parse(v) for k, v in P.zeta_texts.items()}
    Z = Alphabet(list(names))
    out = []
    for lhs, rhs in ZETA_RELATIONS:
        rel = parse_ncpoly(lhs, Z, P.field) - parse_ncpoly(rhs, Z, P.field)
        res = substitute(P, rel, names)
        out.append((f"{lhs} = {rhs}", res))
    return out


def substitute(P: Presentation, p: NCPoly, images: dict) -> NCPoly:
    """Evaluate a polynomial in letters ``images.keys()`` inside ``P``."""
    A = p.alphabet
    total = {}
    for w, c in p.terms.items():
        acc = {(): P.field.coerce(c)}
        for i in w:
            acc = P.rs.mul_terms(acc, images[A.names[i]].terms)
        add_into(total, acc)
    return NCPoly(P.alphabet, P.nf_terms(total))


def embedding_images(s7: Presentation) -> dict:
    a = s7.parse(s7.embedding_texts["a"])
    b = s7.parse(s7.embedding_texts["b"])
    R = s7.parse(s7.embedding_texts["R"])
    return {"a": a, "b": b, "R": R, "a*": s7.star(a), "b*": s7.star(b)}


def embed(p: NCPoly, s7: Presentation, images: dict | None = None) -> NCPoly:
    """Image of a Sigma^4_q element in S^7_q."""
    return substitute(s7, p, images or embedding_images(s7))


def verify_embedding(sigma: Presentation, s7: Presentation):
    """Residual in S^7_q of each defining relation of Sigma^4_q (all should be 0)."""
    images = embedding_images(s7)
    out = []
    for text in SIGMA4_RELATIONS:
        rel = parse_ncpoly(text, sigma.alphabet, sigma.field)
        out.append((text, embed(rel, s7, images)))
    return out


REGISTRY = {
    "uq4": lambda q=None: build_uq4(q),
    "s7q": lambda q=None: build_s7q(q),
    "sigma4q": lambda q=None: build_sigma4q(q),
    "sigma4q-loc": lambda q=None: build_sigma4q_localized(q),
    "classical-s7": lambda q=None: build_s7q(1),
    "classical-s4": lambda q=None: build_sigma4q(1),
}


def get(name: str, q=None) -> Presentation:
    try:
        return REGISTRY[name](q)
    except KeyError:
        raise KeyError(f"unknown presentation {name!r}; known: {sorted(REGISTRY)}") from None
