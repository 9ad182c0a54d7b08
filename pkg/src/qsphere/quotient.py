"""The quotient U_q(4)/RU_q(4) and the coaction it induces on S^7_q.

The right ideal is generated by the span R of the thirteen elements in
``R_ELEMENTS``.  Classes are represented on the SU_q(2) basis
t11^a t12^b t21^c t22^d with a*d = 0.  The quotient is only a right
U_q(4)-module, so products are computed as right actions on classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebras import BLOCK12, BLOCK34, OFF_BLOCK, QuantumGroup, build_s7q, build_uq4, tname
from .linalg import Echelon, nullspace
from .ncpoly import NCPoly, StepLimitExceeded, add_into, parse_ncpoly


class DegreeBoundExceeded(ValueError):
    pass


MAX_SLICE_DEGREE = 6

R_ELEMENTS = [
    "t13", "t31", "t14", "t41", "t24", "t42", "t23", "t32",
    "t11 - t44", "t12 + t43", "t21 + t34", "t22 - t33",
    "t11 t22 - q t12 t21 - 1",
]

# leading 34-block letter -> (12-block letter, sign), read off from R
_SWAP34 = {(4, 4): ((1, 1), 1), (4, 3): ((1, 2), -1), (3, 4): ((2, 1), -1), (3, 3): ((2, 2), 1)}


@dataclass(frozen=True)
class QuotientClass:
    """A class [x] in U_q(4)/R U_q(4), stored by its reduced representative."""

    rep: NCPoly

    def render(self):
        return f"[{self.rep.render()}]"

    def is_zero(self):
        return not self.rep.terms


class Quotient:
    def __init__(self, q=None, step_limit: int = 1_000_000):
        self.U: QuantumGroup = build_uq4(q)
        self.S7 = build_s7q(q)
        self.field = self.U.field
        self.step_limit = step_limit
        A = self.U.alphabet
        self._off = {A[tname(*ij)] for ij in OFF_BLOCK}
        self._b34 = {A[tname(*ij)]: (A[tname(*t)], s) for ij, (t, s) in _SWAP34.items()}
        self._b12 = {A[tname(*ij)] for ij in BLOCK12}
        self._t11, self._t22 = A["t11"], A["t22"]
        self._d2 = self.U.rs.nf_terms(parse_ncpoly("t11 t22 - q t12 t21", A, self.field).terms)
        self._act_cache = {}
        self._images = self._coaction_images()

    # projection r
    def reduce_terms(self, terms: dict) -> dict:
        rs = self.U.rs
        key = self.U.alphabet.key
        d = self.U.dinv
        work = rs.nf_terms(terms)
        block = {}
        steps = 0
        while work:
            w = max(work, key=key)
            c = work.pop(w)
            k = 0
            while k < len(w) and w[k] == d:
                k += 1
            w = w[k:]
            if not w or w[0] in self._b12:
                add_into(block, {w: c})
            elif w[0] in self._off:
                continue
            else:
                steps += 1
                if steps > self.step_limit:
                    raise StepLimitExceeded("reduction modulo R did not finish")
                img, s = self._b34[w[0]]
                add_into(work, rs.nf_word((img,) + w[1:]), c * s if s == 1 else -c)
        return self._reduce_su2(block)

    def _reduce_su2(self, block: dict) -> dict:
        """Reduce 12-block words modulo the central relation t11 t22 - q t12 t21 = 1."""
        rs = self.U.rs
        key = self.U.alphabet.key
        X = dict(block)
        out = {}
        while X:
            m = max(X, key=key)
            c = X[m]
            if self._t11 in m and self._t22 in m:
                u = list(m)
                u.remove(self._t11)
                u.remove(self._t22)
                u = tuple(u)
                prod = rs.mul_terms(self._d2, {u: self.field.one})
                f = c / prod[m]
                add_into(X, prod, -f)
                add_into(X, {u: f})
                X.pop(m, None)
            else:
                out[m] = c
                del X[m]
        return out

    def reduce_mod_R(self, p: NCPoly) -> QuotientClass:
        return QuotientClass(NCPoly(self.U.alphabet, self.reduce_terms(p.terms)))

    def parse(self, text: str) -> NCPoly:
        return parse_ncpoly(text, self.U.alphabet, self.field)

    def r_elements(self) -> list[NCPoly]:
        return [self.parse(t) for t in R_ELEMENTS]

    def absorption_failures(self, degree: int = 3) -> list:
        """Pairs (rho, u) with u a normal word of degree <= ``degree`` and r(rho u) != 0."""
        U = self.U
        words = [w for k in range(degree + 1) for w in U.normal_words(k)]
        bad = []
        for text, rho in zip(R_ELEMENTS, self.r_elements()):
            for u in words:
                if self.reduce_terms(U.mul_terms(rho.terms, {u: self.field.one})):
                    bad.append((text, U.alphabet.render_word(u)))
        return bad

    # right module structure
    def act_letter(self, v, i) -> dict:
        key = (v, i)
        r = self._act_cache.get(key)
        if r is None:
            r = self.reduce_terms({v + (i,): self.field.one})
            self._act_cache[key] = r
        return r

    def act(self, cls: dict, u: dict) -> dict:
        """[x] . u for a class given by basis terms and u in U_q(4)."""
        out = {}
        for w, c in u.items():
            cur = cls
            for i in w:
                nxt = {}
                for v, d in cur.items():
                    add_into(nxt, self.act_letter(v, i), d)
                cur = nxt
            add_into(out, cur, c)
        return out

    # coaction
    def _coaction_images(self):
        """Per S^7_q letter: list of (left letter, right U_q(4) terms)."""
        S7, U = self.S7, self.U
        A = S7.alphabet
        images = {}
        for i in range(1, 5):
            images[A[f"z{i}"]] = [(A[f"z{j}"], U.t(j, i).terms) for j in range(1, 5)]
            images[A[f"z{i}*"]] = [
                (A[f"z{j}*"], U.antipode_terms(U.t(i, j).terms)) for j in range(1, 5)
            ]
        return images

    def coact(self, x: NCPoly) -> dict:
        """Delta(x) in S^7_q (x) U_q(4) as ``{(left word, right word): coeff}``."""
        raw = {}
        for w, c in x.terms.items():
            state = {((), ()): c}
            for i in w:
                nxt = {}
                for (lw, rw), d in state.items():
                    for lg, u in self._images[i]:
                        for uw, e in u.items():
                            add_into(nxt, {(lw + (lg,), rw + uw): d * e})
                state = nxt
            add_into(raw, state)
        out = {}
        for (lw, rw), c in raw.items():
            for l2, a in self.S7.rs.nf_word(lw).items():
                for r2, b in self.U.nf_terms({rw: self.field.one}).items():
                    add_into(out, {(l2, r2): c * a * b})
        return out

    def coact_r(self, x: NCPoly) -> dict:
        """(id (x) r) Delta(x) as ``{(left word, class word): coeff}``."""
        return self.coact_r_terms(x.terms)

    def coact_r_terms(self, terms: dict) -> dict:
        one = self.field.one
        raw = {}
        for w, c in terms.items():
            state = {((), ()): c}
            for i in w:
                nxt = {}
                for (lw, v), d in state.items():
                    for lg, u in self._images[i]:
                        for v2, e in self.act({v: one}, u).items():
                            add_into(nxt, {(lw + (lg,), v2): d * e})
                state = nxt
            add_into(raw, state)
        out = {}
        for (lw, v), c in raw.items():
            add_into(out, {(l2, v): a * c for l2, a in self.S7.rs.nf_word(lw).items()})
        return out

    def is_coinvariant(self, x: NCPoly) -> bool:
        x = self.S7.nf(x)
        return self.coact_r(x) == {(w, ()): c for w, c in x.terms.items()}

    def coinvariant_defect(self, terms: dict) -> dict:
        out = self.coact_r_terms(terms)
        add_into(out, {(w, ()): c for w, c in terms.items()}, -1)
        return out

    def coinvariant_slice(self, d: int) -> list[NCPoly]:
        """Basis of the coinvariants among S^7_q elements of degree <= d."""
        if d > MAX_SLICE_DEGREE:
            raise DegreeBoundExceeded(f"degree {d} > {MAX_SLICE_DEGREE}")
        groups = {}
        for k in range(d + 1):
            for w in self.S7.normal_words(k):
                groups.setdefault(s7_charge(self.S7, w), []).append(w)
        basis = []
        for charge in sorted(groups):
            words = groups[charge]
            cols = [self.coinvariant_defect({w: self.field.one}) for w in words]
            for dep in nullspace(cols):
                basis.append(NCPoly(self.S7.alphabet, {words[j]: c for j, c in dep.items()}))
        return basis

    # coideal
    def check_coideal(self) -> list[tuple[str, dict, object]]:
        """For each element of R: ((r (x) r) Delta(rho), epsilon(rho))."""
        out = []
        for text, rho in zip(R_ELEMENTS, self.r_elements()):
            delta = self.U.coproduct(rho)
            proj = {}
            for (l, r), c in delta.items():
                for lv, a in self.reduce_terms({l: self.field.one}).items():
                    for rv, b in self.reduce_terms({r: self.field.one}).items():
                        add_into(proj, {(lv, rv): c * a * b})
            out.append((text, proj, self.U.counit(rho)))
        return out

    def render_tensor(self, t: dict, left=None, right=None) -> str:
        left = left or self.S7.alphabet
        right = right or self.U.alphabet
        if not t:
            return "0"
        from .ncpoly import fmt_scalar

        parts = []
        for (l, r), c in sorted(t.items(), key=lambda kv: (left.key(kv[0][0]), right.key(kv[0][1]))):
            parts.append(f"({fmt_scalar(c)}) {left.render_word(l)} (x) [{right.render_word(r)}]")
        return " + ".join(parts)


def s7_charge(S7, w) -> tuple[int, int]:
    """(z1,z2)-charge and (z3,z4)-charge; both preserved by the coaction."""
    names = S7.alphabet.names
    c12 = c34 = 0
    for i in w:
        n = names[i]
        s = -1 if n.endswith("*") else 1
        if n[1] in "12":
            c12 += s
        else:
            c34 += s
    return c12, c34


@lru_cache(maxsize=None)
def get_quotient(q=None) -> Quotient:
    return Quotient(q)


def span_check(Q: Quotient, slice_basis: list[NCPoly], expected: list[NCPoly]) -> dict:
    """Compare two spans inside S^7_q: ranks of each and of the union."""
    E1, E2, E3 = Echelon(), Echelon(), Echelon()
    for p in slice_basis:
        E1.add(p.terms)
        E3.add(p.terms)
    for p in expected:
        E2.add(Q.S7.nf(p).terms)
        E3.add(Q.S7.nf(p).terms)
    return {"slice": E1.rank, "expected": E2.rank, "union": E3.rank}
