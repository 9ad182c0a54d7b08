"""Noncommutative polynomials and rewriting systems.

Words are tuples of letter indices into an ``Alphabet``.  Monomials are
ordered by (degree, weight, lexicographic rank), where the weight of a word
is the sum of its letter weights (all zero unless an algebra asks for a
weighted order).  A ``RewriteSystem`` reduces words by replacing occurrences
of rule left-hand sides; ``complete`` runs Bergman completion.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .coeff import ONE, ZERO, LaurentQ, ParseError, RatQ, as_rational, as_ratq, mpq, render, parse_scalar

log = logging.getLogger(__name__)

Word = tuple


class StepLimitExceeded(RuntimeError):
    pass


class CompletionDiverged(RuntimeError):
    pass


class UnknownGenerator(KeyError):
    pass


# --- scalars ---


class ScalarField:
    """Either Q(q) (``q0 is None``) or the rationals with q specialised to ``q0``."""

    def __init__(self, q0=None):
        self.q0 = None if q0 is None else as_rational(q0)

    @property
    def symbolic(self):
        return self.q0 is None

    @property
    def q(self):
        return as_ratq(LaurentQ.monomial(1)) if self.q0 is None else self.q0

    @property
    def one(self):
        return ONE if self.q0 is None else mpq(1)

    @property
    def zero(self):
        return ZERO if self.q0 is None else mpq(0)

    def coerce(self, x):
        if self.q0 is None:
            return as_ratq(x)
        if isinstance(x, (RatQ, LaurentQ)):
            return x.eval(self.q0)
        if isinstance(x, str):
            return parse_scalar(x).eval(self.q0)
        return as_rational(x)

    def __eq__(self, other):
        return isinstance(other, ScalarField) and self.q0 == other.q0

    def __hash__(self):
        return hash(self.q0)

    def __repr__(self):
        return "ScalarField(q)" if self.q0 is None else f"ScalarField(q={self.q0})"


SYMBOLIC = ScalarField()


def fmt_scalar(c) -> str:
    if isinstance(c, (RatQ, LaurentQ)):
        return render(c)
    c = mpq(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# --- alphabet and polynomials ---


@dataclass(frozen=True)
class Generator:
    name: str
    star: str | None = None
    weight: int = 0


class Alphabet:
    """Ordered generator set; earlier letters are smaller."""

    def __init__(self, gens: Iterable[Generator | str]):
        gens = [g if isinstance(g, Generator) else Generator(g) for g in gens]
        self.gens = gens
        self.names = [g.name for g in gens]
        self.index = {n: i for i, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate generator names")
        self.weights = [g.weight for g in gens]
        self._weighted = any(self.weights)
        self.star_index = [self.index.get(g.star) if g.star else None for g in gens]

    def __len__(self):
        return len(self.names)

    def __getitem__(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def key(self, w: Word):
        if self._weighted:
            ws = self.weights
            return (len(w), sum(ws[i] for i in w), w)
        return (len(w), 0, w)

    def render_word(self, w: Word) -> str:
        return " ".join(self.names[i] for i in w) if w else "1"

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.gens == other.gens

    def __hash__(self):
        return hash(tuple(self.gens))

    def __repr__(self):
        return f"Alphabet({self.names})"


def add_into(acc: dict, terms: dict, c=None):
    """acc += c * terms (in place), dropping zero coefficients."""
    if c is None:
        for w, d in terms.items():
            v = acc.get(w)
            if v is None:
                acc[w] = d
            else:
                v = v + d
                if v:
                    acc[w] = v
                else:
                    del acc[w]
    else:
        for w, d in terms.items():
            d = c * d
            v = acc.get(w)
            if v is None:
                if d:
                    acc[w] = d
            else:
                v = v + d
                if v:
                    acc[w] = v
                else:
                    del acc[w]
    return acc


class NCPoly:
    """Element of the free algebra over an ``Alphabet``: ``{word: coeff}``."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: dict | None = None):
        self.alphabet = alphabet
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, alphabet, name, coeff=1):
        return cls(alphabet, {(alphabet[name],): coeff})

    @classmethod
    def scalar(cls, alphabet, c):
        return cls(alphabet, {(): c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def leading(self):
        """(word, coeff) of the largest monomial."""
        w = max(self.terms, key=self.alphabet.key)
        return w, self.terms[w]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.alphabet.key(t[0]), reverse=True)

    def _other(self, other):
        if isinstance(other, NCPoly):
            return other.terms
        return {(): other} if other else {}

    def __add__(self, other):
        return NCPoly(self.alphabet, add_into(dict(self.terms), self._other(other)))

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return NCPoly(self.alphabet, add_into(dict(self.terms), self._other(other), -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            out = {}
            for u, c in self.terms.items():
                for v, d in other.terms.items():
                    add_into(out, {u + v: c * d})
            return NCPoly(self.alphabet, out)
        return NCPoly(self.alphabet, {w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        return NCPoly(self.alphabet, {w: other * c for w, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        return self.terms == self._other(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_coeffs(self, f: Callable):
        return NCPoly(self.alphabet, {w: f(c) for w, c in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for w, c in self.sorted_terms():
            s = fmt_scalar(c)
            neg = s.startswith("-") and " " not in s.strip("-")
            if neg:
                s = s[1:]
            word = self.alphabet.render_word(w) if w else ""
            if word:
                if s == "1":
                    body = word
                elif " " in s or "/" in s and not re.fullmatch(r"\d+/\d+", s):
                    body = f"({s}) {word}"
                else:
                    body = f"{s} {word}"
            else:
                body = s if not (" " in s and out) else f"({s})"
            out.append(("-" if neg else "+", body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"NCPoly({self.render()!r})"

    __str__ = render


# --- rewriting ---


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: dict  # word -> coeff; all words smaller than lhs


@dataclass
class Ambiguity:
    kind: str  # "overlap" or "inclusion"
    rule1: Word
    rule2: Word
    word: Word
    obstruction: dict = field(default_factory=dict)

    def resolvable(self):
        return not self.obstruction


class RewriteSystem:
    """Reduction system ``lhs -> rhs`` with a memoised normal form."""

    def __init__(self, alphabet: Alphabet, rules: dict, field: ScalarField = SYMBOLIC, step_limit: int = 10_000):
        self.alphabet = alphabet
        self.field = field
        self.rules = dict(rules)
        self.step_limit = step_limit
        self._lengths = sorted({len(l) for l in self.rules})
        self._cache: dict = {}
        self._steps = 0

    # normal forms
    def _app(self, u):
        """Normal form of ``u`` assuming ``u[:-1]`` is already normal."""
        r = self._cache.get(u)
        if r is not None:
            return r
        rules = self.rules
        n = len(u)
        for L in self._lengths:
            if L > n:
                break
            rhs = rules.get(u[n - L:])
            if rhs is not None:
                self._steps += 1
                if self._steps > self.step_limit:
                    raise StepLimitExceeded(f"more than {self.step_limit} rewriting steps")
                prefix = u[: n - L]
                res = {}
                for v, d in rhs.items():
                    add_into(res, self._nfw(prefix + v), d)
                self._cache[u] = res
                return res
        res = {u: self.field.one}
        self._cache[u] = res
        return res

    def _nfw(self, w):
        cache = self._cache
        r = cache.get(w)
        if r is not None:
            return r
        if not w:
            return {(): self.field.one}
        k = len(w) - 1
        while k > 0 and w[:k] not in cache:
            k -= 1
        cur = cache[w[:k]] if k > 0 else {(): self.field.one}
        for j in range(k, len(w)):
            x = (w[j],)
            if len(cur) == 1:
                (v, c), = cur.items()
                r = self._app(v + x)
                nxt = r if c == 1 else {u: c * d for u, d in r.items()}
            else:
                nxt = {}
                for v, c in cur.items():
                    add_into(nxt, self._app(v + x), c)
            cur = nxt
            cache[w[: j + 1]] = cur
        return cur

    def nf_word(self, w: Word) -> dict:
        self._steps = 0
        return dict(self._nfw(tuple(w)))

    def nf_terms(self, terms: dict) -> dict:
        self._steps = 0
        out = {}
        for w, c in terms.items():
            add_into(out, self._nfw(w), c)
        return out

    def nf(self, p: NCPoly) -> NCPoly:
        return NCPoly(self.alphabet, self.nf_terms(p.terms))

    def mul_terms(self, a: dict, b: dict) -> dict:
        self._steps = 0
        out = {}
        for u, c in a.items():
            for v, d in b.items():
                add_into(out, self._nfw(u + v), c * d)
        return out

    def mul(self, *ps: NCPoly) -> NCPoly:
        terms = {(): self.field.one}
        for p in ps:
            terms = self.mul_terms(terms, p.terms)
        return NCPoly(self.alphabet, terms)

    def is_normal(self, w: Word) -> bool:
        n = len(w)
        for L in self._lengths:
            for i in range(n - L + 1):
                if w[i: i + L] in self.rules:
                    return False
        return True

    def clear_cache(self):
        self._cache.clear()

    # ambiguities
    def overlaps(self) -> list[Ambiguity]:
        out = []
        lhss = sorted(self.rules, key=self.alphabet.key)
        by_first = {}
        for l in lhss:
            by_first.setdefault(l[0], []).append(l)
        for l1 in lhss:
            for k in range(1, len(l1)):
                suffix = l1[k:]
                for l2 in by_first.get(suffix[0], ()):
                    m = len(suffix)
                    if len(l2) > m and l2[:m] == suffix:
                        word = l1 + l2[m:]
                        out.append(self._ambiguity("overlap", l1, 0, l2, k, word))
            for l2 in lhss:
                if l2 != l1 and len(l2) <= len(l1):
                    for i in range(len(l1) - len(l2) + 1):
                        if l1[i: i + len(l2)] == l2:
                            out.append(self._ambiguity("inclusion", l1, 0, l2, i, l1))
        return out

    def _ambiguity(self, kind, l1, i1, l2, i2, word):
        def branch(l, i):
            pre, post = word[:i], word[i + len(l):]
            return {pre + v + post: c for v, c in self.rules[l].items()}

        a = self.nf_terms(branch(l1, i1))
        b = self.nf_terms(branch(l2, i2))
        obs = add_into(dict(a), b, -1)
        return Ambiguity(kind, l1, l2, word, obs)

    def obstructions(self) -> list[Ambiguity]:
        return [a for a in self.overlaps() if a.obstruction]

    def is_confluent(self) -> bool:
        return not self.obstructions()

    # construction
    def orient(self, terms: dict):
        """Turn a nonzero relation into (lhs, rhs) with the leading word as lhs."""
        lead = max(terms, key=self.alphabet.key)
        c = terms[lead]
        rhs = {w: -d / c for w, d in terms.items() if w != lead}
        return lead, rhs

    def with_relations(self, relations: Iterable[dict], max_rules: int = 10_000) -> "RewriteSystem":
        rs = self
        queue = [dict(r) for r in relations]
        while queue:
            rel = rs.nf_terms(queue.pop(0))
            if not rel:
                continue
            lhs, rhs = rs.orient(rel)
            kept = {}
            for l, r in rs.rules.items():
                if _contains(l, lhs):
                    queue.append(add_into({l: rs.field.one}, r, -1))
                else:
                    kept[l] = r
            kept[lhs] = rhs
            if len(kept) > max_rules:
                raise CompletionDiverged(f"more than {max_rules} rules")
            rs = RewriteSystem(rs.alphabet, kept, rs.field, rs.step_limit)
            # interreduce right-hand sides
            rs.rules = {l: rs.nf_terms(r) for l, r in rs.rules.items()}
            rs.clear_cache()
            log.debug("rule %s -> %d terms", rs.alphabet.render_word(lhs), len(rhs))
        return rs

    @classmethod
    def from_relations(cls, alphabet, relations, field=SYMBOLIC, step_limit=10_000, max_rules=10_000):
        empty = cls(alphabet, {}, field, step_limit)
        return empty.with_relations(relations, max_rules)

    def complete(self, max_rules: int = 500, max_rounds: int = 50) -> "RewriteSystem":
        rs = self
        for _ in range(max_rounds):
            obs = rs.obstructions()
            if not obs:
                return rs
            log.info("completion round: %d obstructions, %d rules", len(obs), len(rs.rules))
            rs = rs.with_relations([a.obstruction for a in obs], max_rules)
        raise CompletionDiverged(f"not confluent after {max_rounds} rounds")

    # bases
    def irreducible_words(self, degree: int) -> list[Word]:
        """All normal words of exactly ``degree`` letters, in increasing order."""
        words = [()]
        n = len(self.alphabet)
        for _ in range(degree):
            nxt = []
            for w in words:
                for x in range(n):
                    u = w + (x,)
                    if not any(L <= len(u) and u[len(u) - L:] in self.rules for L in self._lengths):
                        nxt.append(u)
            words = nxt
        return sorted(words, key=self.alphabet.key)

    def render_rules(self) -> list[str]:
        out = []
        for l in sorted(self.rules, key=self.alphabet.key):
            out.append(f"{self.alphabet.render_word(l)} -> {NCPoly(self.alphabet, self.rules[l]).render()}")
        return out


def _contains(word, sub):
    n, m = len(word), len(sub)
    return any(word[i: i + m] == sub for i in range(n - m + 1))


# --- text input ---

_NC_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)(\^\*|\*(?![A-Za-z_(]))?|(\*\*|[-+*/^()]))")


def parse_ncpoly(text: str, alphabet: Alphabet, field: ScalarField = SYMBOLIC) -> NCPoly:
    """Parse ``"z1 z4* - q^-1 z2 z3*"``.

    A generator may be starred with ``^*`` or with a trailing ``*`` that is
    not followed by another factor.  ``q`` is the central scalar; juxtaposition
    and ``*`` both multiply; ``/`` divides by a scalar.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _NC_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        num, ident, star, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif ident is not None:
            name = ident + ("*" if star else "")
            if name == "q":
                toks.append(("q", None))
            else:
                if name not in alphabet.index:
                    raise UnknownGenerator(name)
                toks.append(("gen", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return _NCParser(toks, alphabet, field).parse()


class _NCParser:
    def __init__(self, toks, alphabet, field):
        self.toks, self.i, self.A, self.F = toks, 0, alphabet, field

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def const(self, c):
        return NCPoly(self.A, {(): self.F.coerce(c)})

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i:]}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.unary()
        while True:
            tok = self.peek()
            if tok in (("op", "*"), ("op", "/")):
                self.take()
                t = self.unary()
                if tok[1] == "*":
                    v = v * t
                else:
                    if set(t.terms) - {()} or not t.terms:
                        raise ParseError("division by a non-scalar")
                    inv = 1 / t.terms[()]
                    v = v * inv
            elif tok[0] in ("num", "q", "gen") or tok == ("op", "("):
                v = v * self.unary()
            else:
                return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, n = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            if sign < 0:
                if set(base.terms) - {()}:
                    raise ParseError("negative power of a non-scalar")
                return self.const(1) * (base.terms[()] ** -n)
            out = self.const(1)
            for _ in range(n):
                out = out * base
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.const(val)
        if kind == "q":
            return NCPoly(self.A, {(): self.F.q})
        if kind == "gen":
            return NCPoly(self.A, {(self.A[val],): self.F.one})
        if (kind, val) == ("op", "("):
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
            return v
        raise ParseError(f"unexpected token {val!r}")


# --- presentation files ---


def load_presentation(text: str, field: ScalarField = SYMBOLIC, weights: dict | None = None):
    """Read ``generators:`` / ``star:`` headers and ``lhs = rhs`` lines.

    Returns ``(alphabet, relations)`` with relations as term dicts.
    """
    names, star, rel_lines = None, {}, []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("generators:"):
            names = line.split(":", 1)[1].split()
        elif line.startswith("star:"):
            for pair in line.split(":", 1)[1].split():
                a, b = pair.split("<->")
                star[a], star[b] = b, a
        else:
            rel_lines.append(line)
    if names is None:
        raise ParseError("missing 'generators:' header")
    weights = weights or {}
    A = Alphabet([Generator(n, star.get(n), weights.get(n, 0)) for n in names])
    rels = []
    for line in rel_lines:
        if "=" not in line:
            raise ParseError(f"relation without '=': {line!r}")
        lhs, rhs = line.split("=", 1)
        rels.append((parse_ncpoly(lhs, A, field) - parse_ncpoly(rhs, A, field)).terms)
    return A, rels
