"""Cyclic chains over Sigma^4_q, the Chern character of G and its pairing with tr_sigma.

A chain of degree n is a linear combination of (n+1)-fold tensors of normal
words; legs are multiplied in Sigma^4_q.  Membership in the image of (1 - t)
is decided with the norm operator: on degree-n chains t^(n+1) = 1, so
im(1 - t) = ker(1 + t + ... + t^n).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebras import Presentation, build_sigma4q
from .bundle import NCMatrix, expected_G
from .coeff import as_ratq
from .fock import trace_functional
from .linalg import Echelon
from .ncpoly import NCPoly, add_into


class DimensionMismatch(ValueError):
    pass


class DegreeBoundExceeded(ValueError):
    pass


@dataclass
class Chain:
    P: Presentation
    degree: int
    terms: dict = field(default_factory=dict)  # tuple of n+1 words -> coeff

    @classmethod
    def from_elements(cls, P, legs, coeff=1):
        """Tensor product of polynomials, expanded multilinearly."""
        terms = {(): P.field.coerce(coeff)}
        for leg in legs:
            nxt = {}
            for key, c in terms.items():
                for w, d in P.nf(leg).terms.items():
                    add_into(nxt, {key + (w,): c * d})
            terms = nxt
        return cls(P, len(legs) - 1, terms)

    def __add__(self, other):
        self._same(other)
        return Chain(self.P, self.degree, add_into(dict(self.terms), other.terms))

    def __sub__(self, other):
        self._same(other)
        return Chain(self.P, self.degree, add_into(dict(self.terms), other.terms, -1))

    def __rmul__(self, c):
        c = self.P.field.coerce(c)
        return Chain(self.P, self.degree, {k: c * v for k, v in self.terms.items() if c})

    def _same(self, other):
        if other.degree != self.degree:
            raise DimensionMismatch("chains of different degree")

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Chain) and self.degree == other.degree and self.terms == other.terms

    def size(self):
        return len(self.terms)

    def max_leg_degree(self):
        return max((len(w) for key in self.terms for w in key), default=0)

    def as_element(self) -> NCPoly:
        if self.degree != 0:
            raise ValueError("only degree-0 chains are algebra elements")
        return NCPoly(self.P.alphabet, {k[0]: c for k, c in self.terms.items()})

    def render(self, limit: int = 20) -> str:
        A = self.P.alphabet
        parts = []
        for key, c in sorted(self.terms.items(), key=lambda kv: [A.key(w) for w in kv[0]])[:limit]:
            legs = " (x) ".join(A.render_word(w) for w in key)
            parts.append(f"({c}) {legs}")
        more = "" if len(self.terms) <= limit else f" + ... ({len(self.terms)} terms)"
        return (" + ".join(parts) or "0") + more


def face(c: Chain, i: int) -> Chain:
    """d_i: multiply legs i and i+1; d_n multiplies the last leg into the first."""
    n = c.degree
    if not 0 <= i <= n or n < 1:
        raise ValueError("face index out of range")
    P = c.P
    out = {}
    one = P.field.one
    for key, v in c.terms.items():
        if i < n:
            prod = P.mul_terms({key[i]: one}, {key[i + 1]: one})
            for w, d in prod.items():
                add_into(out, {key[:i] + (w,) + key[i + 2:]: v * d})
        else:
            prod = P.mul_terms({key[n]: one}, {key[0]: one})
            for w, d in prod.items():
                add_into(out, {(w,) + key[1:n]: v * d})
    return Chain(P, n - 1, out)


def hochschild_boundary(c: Chain) -> Chain:
    if c.degree < 1:
        raise ValueError("the boundary is defined on degree >= 1")
    out = {}
    for i in range(c.degree + 1):
        add_into(out, face(c, i).terms, 1 if i % 2 == 0 else -1)
    return Chain(c.P, c.degree - 1, out)


def cyclic_t(c: Chain) -> Chain:
    """t(a0 (x) ... (x) an) = (-1)^n a1 (x) ... (x) an (x) a0."""
    s = -1 if c.degree % 2 else 1
    return Chain(c.P, c.degree, {key[1:] + key[:1]: s * v for key, v in c.terms.items()})


def norm_operator(c: Chain) -> Chain:
    out, cur = {}, c
    for _ in range(c.degree + 1):
        add_into(out, cur.terms)
        cur = cyclic_t(cur)
    return Chain(c.P, c.degree, out)


def one_minus_t_preimage(c: Chain):
    """w with (1 - t) w = c, or None when c is not in im(1 - t)."""
    if not norm_operator(c).is_zero():
        return None
    n1 = c.degree + 1
    out, cur = {}, c
    for i in range(n1):
        if i:
            add_into(out, cur.terms, as_ratq(-i) / n1 if c.P.field.symbolic else c.P.field.coerce(-i) / n1)
        cur = cyclic_t(cur)
    w = Chain(c.P, c.degree, out)
    assert (w - cyclic_t(w)) == c
    return w


def generalized_trace(mats: list[NCMatrix]) -> Chain:
    """Tr[M1 (x) ... (x) Mk] = sum_j [M1]_{j1 j2} (x) [M2]_{j2 j3} ... (x) [Mk]_{jk j1}."""
    if not mats:
        raise DimensionMismatch("empty tensor")
    n = mats[0].n
    if any(m.n != n for m in mats):
        raise DimensionMismatch("matrices of different sizes")
    P = mats[0].P
    k = len(mats)
    out = {}
    for js in itertools.product(range(n), repeat=k):
        legs = [mats[s][js[s], js[(s + 1) % k]] for s in range(k)]
        if any(not leg.terms for leg in legs):
            continue
        add_into(out, Chain.from_elements(P, legs).terms)
    return Chain(P, k - 1, out)


def chern(n: int, G: NCMatrix | None = None) -> Chain:
    """ch_n = Tr[(-1)^n G^{(x) 2n+1}]."""
    G = G if G is not None else expected_G()
    c = generalized_trace([G] * (2 * n + 1))
    return c if n % 2 == 0 else (-1) * c


def s_operator(c: Chain) -> Chain:
    """S(x) = -1/(n(n-1)) sum_{i<j} (-1)^{i+j} d_i d_j (x), at chain level."""
    n = c.degree
    if n < 2:
        raise ValueError("S needs degree >= 2")
    out = {}
    for j in range(n + 1):
        dj = face(c, j)
        for i in range(j):
            add_into(out, face(dj, i).terms, 1 if (i + j) % 2 == 0 else -1)
    f = c.P.field.coerce(-1) / (n * (n - 1))
    return Chain(c.P, n - 2, {k: f * v for k, v in out.items()})


def pairing_with_trace(c: Chain):
    if c.degree != 0:
        raise ValueError("tr_sigma pairs with degree-0 chains")
    if not c.terms:
        return as_ratq(0)
    return trace_functional(c.as_element(), c.P)


def trace_property_check(samples: int = 100, degree: int = 3, seed: int = 0, P: Presentation | None = None) -> dict:
    """tr_sigma(xy - yx) = 0 on random pairs of normal words of degree <= ``degree``."""
    P = P or build_sigma4q()
    words = [w for d in range(1, degree + 1) for w in P.normal_words(d)]
    rng = random.Random(seed)
    one = P.field.one
    bad = []
    for _ in range(samples):
        u, v = rng.choice(words), rng.choice(words)
        comm = add_into(P.mul_terms({u: one}, {v: one}), P.mul_terms({v: one}, {u: one}), -1)
        if trace_functional(NCPoly(P.alphabet, comm), P):
            bad.append((P.alphabet.render_word(u), P.alphabet.render_word(v)))
    return {"samples": samples, "failures": bad, "ok": not bad}


def cyclic_cycle_check(c: Chain, degree_bound: int = 8) -> bool:
    """True iff c is a cycle of the Connes complex: beta(c) in im(1 - t)."""
    if c.max_leg_degree() > degree_bound:
        raise DegreeBoundExceeded(f"leg degree {c.max_leg_degree()} > {degree_bound}")
    if c.degree == 0:
        return True
    b = hochschild_boundary(c)
    if b.degree == 0:
        return b.is_zero()  # t is the identity in degree 0, so im(1 - t) = 0
    return norm_operator(b).is_zero()


def commutator_span_solve(x: Chain, degree_bound: int = 4):
    """Try to write a degree-0 chain as sum c_k (u_k v_k - v_k u_k) over normal words.

    Returns the coefficient map or None when no solution exists in the bounded space.
    """
    P = x.P
    if x.degree != 0:
        raise ValueError("degree-0 chain expected")
    target = {k[0]: v for k, v in x.terms.items()}
    words = [w for d in range(1, degree_bound + 1) for w in P.normal_words(d)]
    E = Echelon()
    one = P.field.one
    for u, v in itertools.combinations(words, 2):
        if len(u) + len(v) > degree_bound + 1:
            continue
        comm = add_into(P.mul_terms({u: one}, {v: one}), P.mul_terms({v: one}, {u: one}), -1)
        if comm:
            E.add(comm, tag=(u, v))
    resid, comb = E.reduce(target)
    if resid:
        return None
    return {k: -c for k, c in comb.items() if c}


def s_relation_check(n: int = 1, G: NCMatrix | None = None) -> dict:
    """Compare S(ch_n) with -1/(2(2n-1)) ch_{n-1}; the difference must be trivial in C^lambda."""
    hi, lo = chern(n, G), chern(n - 1, G)
    s = s_operator(hi)
    factor = lo.P.field.coerce(-1) / (2 * (2 * n - 1))
    diff = s - factor * lo
    if diff.is_zero():
        return {"difference_terms": 0, "trivial": True, "witness": "zero at chain level"}
    if diff.degree == 0:
        sol = commutator_span_solve(diff)
        return {"difference_terms": diff.size(), "trivial": sol is not None, "witness": "commutators" if sol else None}
    w = one_minus_t_preimage(diff)
    return {"difference_terms": diff.size(), "trivial": w is not None, "witness": "(1-t) preimage" if w else None}
