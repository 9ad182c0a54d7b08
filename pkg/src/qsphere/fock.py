"""The representations of Sigma^4_q: the counit and the Fock representation sigma.

sigma acts on l2(N)^2 with basis |n1, n2>:

    sigma(R)|n> = q^(2(n1+n2)) |n>
    sigma(a)|n> = q^(n1+2n2-1) sqrt(1-q^(2 n1)) |n1-1, n2>
    sigma(b)|n> = q^(n1+n2) sqrt(1-q^(2(n2+1))) |n1, n2+1>

with sigma(a*), sigma(b*) the adjoints.  Truncated matrices are exact: each
entry is ``coeff * sqrt(radicand)`` with rational coeff and integer radicand.
Traces tr_sigma = tr(sigma - epsilon) are summed in closed form.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq

from .algebras import Presentation, build_sigma4q, build_sigma4q_localized, SIGMA4_RELATIONS, ZETA_RELATIONS
from .coeff import LaurentQ, RatQ, as_rational, as_ratq, eval_at
from .ncpoly import Alphabet, NCPoly, parse_ncpoly

DEFAULT_Q0 = mpq(1, 2)
DEFAULT_CUTOFF = 40
FLOAT_TOL = 1e-10


class RadicalMixing(ArithmeticError):
    pass


class DivergentSum(ArithmeticError):
    pass


_SMALL_PRIMES = [p for p in range(2, 200) if all(p % d for d in range(2, int(p**0.5) + 1))]


def _canon(coeff, m):
    """Pull square factors out of the radicand (exact for perfect squares and small primes)."""
    if not coeff or m == 0:
        return mpq(0), 1
    if m == 1:
        return coeff, 1
    if gmpy2.is_square(m):
        return coeff * gmpy2.isqrt(m), 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > m:
            break
        while m % pp == 0:
            m //= pp
            coeff *= p
    if gmpy2.is_square(m):
        return coeff * gmpy2.isqrt(m), 1
    return coeff, m


@dataclass(frozen=True)
class RadicalScalar:
    coeff: mpq
    radicand: int = 1

    @classmethod
    def make(cls, coeff, radicand=1):
        c, m = _canon(mpq(coeff), gmpy2.mpz(radicand))
        return cls(c, int(m))

    def __bool__(self):
        return bool(self.coeff)

    def __mul__(self, other):
        if not isinstance(other, RadicalScalar):
            return RadicalScalar(self.coeff * as_rational(other), self.radicand) if other else ZERO_R
        m1, m2 = self.radicand, other.radicand
        g = math.gcd(m1, m2)
        return RadicalScalar.make(self.coeff * other.coeff * g, (m1 // g) * (m2 // g))

    __rmul__ = __mul__

    def __add__(self, other):
        if not other:
            return self
        if not self:
            return other
        if self.radicand == other.radicand:
            c = self.coeff + other.coeff
            return RadicalScalar(c, self.radicand) if c else ZERO_R
        prod = self.radicand * other.radicand
        if gmpy2.is_square(prod):
            # c2 sqrt(m2) = c2 sqrt(m1 m2)/m1 * sqrt(m1)
            c = self.coeff + other.coeff * gmpy2.isqrt(prod) / self.radicand
            return RadicalScalar(mpq(c), self.radicand) if c else ZERO_R
        raise RadicalMixing(f"cannot add sqrt({self.radicand}) and sqrt({other.radicand}) exactly")

    def __neg__(self):
        return RadicalScalar(-self.coeff, self.radicand)

    def __sub__(self, other):
        return self + (-other)

    def is_rational(self):
        return self.radicand == 1 or not self.coeff

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("irrational entry")
        return self.coeff

    def __float__(self):
        return float(self.coeff) * math.sqrt(self.radicand)

    def abs_bounds(self, bits: int = 80):
        """Rational lower/upper bounds for |value|."""
        c = abs(self.coeff)
        if self.radicand == 1:
            return c, c
        scale = gmpy2.mpz(1) << bits
        r = gmpy2.isqrt(self.radicand * scale * scale)
        lo = mpq(r, scale)
        hi = mpq(r + 1, scale)
        return c * lo, c * hi

    def __str__(self):
        if self.radicand == 1:
            return str(self.coeff)
        return f"{self.coeff}*sqrt({self.radicand})"


ZERO_R = RadicalScalar(mpq(0), 1)


def _sqrt_one_minus(q0: mpq, k: int) -> RadicalScalar:
    """sqrt(1 - q0^k) for k >= 0, as coeff * sqrt(integer)."""
    if k == 0:
        return ZERO_R
    p, s = q0.numerator, q0.denominator
    num = s**k - p**k  # 1 - q0^k = num / s^k
    if k % 2 == 0:
        return RadicalScalar.make(mpq(1, s ** (k // 2)), num)
    return RadicalScalar.make(mpq(1, s ** ((k + 1) // 2)), num * s)


def _qpow(q0, e):
    return q0**e


def generator_action(name: str, n1: int, n2: int, q0: mpq):
    """(output state, entry) for a generator applied to |n1, n2>, or None."""
    if name == "R":
        return (n1, n2), RadicalScalar(_qpow(q0, 2 * (n1 + n2)))
    if name == "Ri":
        return (n1, n2), RadicalScalar(_qpow(q0, -2 * (n1 + n2)))
    if name == "a":
        if n1 == 0:
            return None
        return (n1 - 1, n2), _sqrt_one_minus(q0, 2 * n1) * _qpow(q0, n1 + 2 * n2 - 1)
    if name == "a*":
        return (n1 + 1, n2), _sqrt_one_minus(q0, 2 * n1 + 2) * _qpow(q0, n1 + 2 * n2)
    if name == "b":
        return (n1, n2 + 1), _sqrt_one_minus(q0, 2 * n2 + 2) * _qpow(q0, n1 + n2)
    if name == "b*":
        if n2 == 0:
            return None
        return (n1, n2 - 1), _sqrt_one_minus(q0, 2 * n2) * _qpow(q0, n1 + n2 - 1)
    raise KeyError(name)


class TruncatedOperator:
    """Exact matrix on span{|n1,n2> : 0 <= n1, n2 <= N}; ``cols[n] = {m: entry}``."""

    def __init__(self, N: int, q0, cols: dict):
        self.N = N
        self.q0 = mpq(q0)
        self.cols = cols

    def entry(self, m, n) -> RadicalScalar:
        return self.cols.get(n, {}).get(m, ZERO_R)

    def entries(self):
        for n, col in self.cols.items():
            for m, v in col.items():
                if v:
                    yield m, n, v

    def adjoint(self) -> "TruncatedOperator":
        cols = {}
        for m, n, v in self.entries():
            cols.setdefault(m, {})[n] = v
        return TruncatedOperator(self.N, self.q0, cols)

    def __eq__(self, other):
        a = {(m, n): v for m, n, v in self.entries()}
        b = {(m, n): v for m, n, v in other.entries()}
        return a == b

    def interior_nonzero(self, margin: int):
        """Entries with every index <= N - margin that are nonzero."""
        lim = self.N - margin
        return [(m, n, v) for m, n, v in self.entries() if v and max(m + n) <= lim]

    def diagonal(self):
        return {n: col.get(n, ZERO_R) for n, col in self.cols.items()}

    def trace(self) -> mpq:
        total = mpq(0)
        for n, col in self.cols.items():
            v = col.get(n)
            if v:
                total += v.to_rational()
        return total


def _states(N):
    return [(n1, n2) for n1 in range(N + 1) for n2 in range(N + 1)]


def apply_word(names, word, n, N, q0):
    """sigma(word)|n> truncated after each letter: (state, entry) or None."""
    state, val = n, RadicalScalar(mpq(1))
    for i in reversed(word):
        r = generator_action(names[i], state[0], state[1], q0)
        if r is None:
            return None
        state, f = r
        if state[0] > N or state[1] > N:
            return None
        val = val * f
        if not val:
            return None
    return state, val


def rep_sigma(x: NCPoly, N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> TruncatedOperator:
    q0 = as_rational(q0)
    if not 0 < q0 < 1:
        raise ValueError("the Fock representation needs 0 < q0 < 1")
    if N < 0:
        raise ValueError("cutoff must be >= 0")
    names = x.alphabet.names
    coeffs = {w: eval_at(c, q0) for w, c in x.terms.items()}
    cols = {}
    for n in _states(N):
        col = {}
        for w, c in coeffs.items():
            r = apply_word(names, w, n, N, q0)
            if r is None:
                continue
            m, v = r
            v = v * c
            col[m] = col[m] + v if m in col else v
        cols[n] = {m: v for m, v in col.items() if v}
    return TruncatedOperator(N, q0, cols)


def rep_sigma_float(x: NCPoly, N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> dict:
    """Double-precision variant for expressions outside the exact radical class."""
    q0 = as_rational(q0)
    names = x.alphabet.names
    out = {}
    for n in _states(N):
        for w, c in x.terms.items():
            r = apply_word(names, w, n, N, q0)
            if r is not None:
                m, v = r
                out[(m, n)] = out.get((m, n), 0.0) + float(eval_at(c, q0)) * float(v)
    return {k: v for k, v in out.items() if abs(v) > FLOAT_TOL}


def rep_epsilon(x: NCPoly, P: Presentation | None = None):
    """The counit character: constant term of the normal form."""
    if P is not None:
        x = P.nf(x)
    return x.terms.get((), 0)


# --- relation checks on the truncated space ---


def check_relations_on_truncation(N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> list[dict]:
    S = build_sigma4q()
    out = []
    for text in SIGMA4_RELATIONS:
        rel = parse_ncpoly(text, S.alphabet)
        for label, p in ((text, rel), (f"({text})*", NCPoly(S.alphabet, _free_star(S.alphabet, rel.terms)))):
            op = rep_sigma(p, N, q0)
            bad = op.interior_nonzero(p.degree())
            out.append({"check": label, "interior_nonzero": len(bad), "vacuous": N - p.degree() < 0, "ok": not bad})
    return out


def _free_star(A: Alphabet, terms):
    return {tuple(A.star_index[i] for i in reversed(w)): c for w, c in terms.items()}


def rep_zeta_check(N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> list[dict]:
    L = build_sigma4q_localized()
    A = L.alphabet
    zeta = {k: parse_ncpoly(v, A) for k, v in L.zeta_texts.items()}
    Z = Alphabet(list(zeta))
    out = []
    for lhs, rhs in ZETA_RELATIONS:
        rel = parse_ncpoly(lhs, Z) - parse_ncpoly(rhs, Z)
        p = NCPoly(A, {})
        for w, c in rel.terms.items():
            term = NCPoly(A, {(): c})
            for i in w:
                term = term * zeta[Z.names[i]]
            p = p + term
        op = rep_sigma(p, N, q0)
        bad = op.interior_nonzero(p.degree())
        out.append({"check": f"{lhs} = {rhs}", "interior_nonzero": len(bad), "vacuous": N - p.degree() < 0, "ok": not bad})
    return out


# --- exact traces ---


@dataclass
class DiagonalSymbol:
    """sum_{(i,j)} c_ij x^i y^j with x = q^n1, y = q^n2: the diagonal entry function."""

    terms: dict
    offsets: tuple = (0, 0)

    def series_sum(self) -> RatQ:
        total = as_ratq(0)
        for (i, j), c in self.terms.items():
            if i <= 0 or j <= 0:
                raise DivergentSum(f"term x^{i} y^{j} does not sum")
            den = (LaurentQ.const(1) - LaurentQ.monomial(i)) * (LaurentQ.const(1) - LaurentQ.monomial(j))
            total = total + RatQ(c, den)
        return total

    def eval(self, n1, n2, q0):
        q0 = as_rational(q0)
        return sum((c.eval(q0) * q0 ** (i * n1 + j * n2) for (i, j), c in self.terms.items()), mpq(0))


def diagonal_symbol(names, word) -> DiagonalSymbol | None:
    """Symbol of the diagonal entry of sigma(word); None when the word shifts states."""
    d1 = d2 = 0
    const = alpha = beta = 0
    lo1 = lo2 = 0
    edges = Counter()
    for i in reversed(word):
        g = names[i]
        if g == "R":
            const += 2 * (d1 + d2)
            alpha += 2
            beta += 2
        elif g == "Ri":
            const -= 2 * (d1 + d2)
            alpha -= 2
            beta -= 2
        elif g == "a":
            const += d1 + 2 * d2 - 1
            alpha += 1
            beta += 2
            edges[(1, d1)] += 1
            d1 -= 1
        elif g == "a*":
            const += d1 + 2 * d2
            alpha += 1
            beta += 2
            edges[(1, d1 + 1)] += 1
            d1 += 1
        elif g == "b":
            const += d1 + d2
            alpha += 1
            beta += 1
            edges[(2, d2 + 1)] += 1
            d2 += 1
        elif g == "b*":
            const += d1 + d2 - 1
            alpha += 1
            beta += 1
            edges[(2, d2)] += 1
            d2 -= 1
        else:
            raise KeyError(g)
        lo1, lo2 = min(lo1, d1), min(lo2, d2)
    if d1 or d2:
        return None
    poly = {(alpha, beta): LaurentQ.monomial(const)}
    for (coord, c), k in edges.items():
        assert k % 2 == 0, "edge traversed an odd number of times on a closed path"
        for _ in range(k // 2):
            # multiply by (1 - q^(2c) X^2), X = x or y
            nxt = {}
            for (i, j), v in poly.items():
                nxt[(i, j)] = nxt.get((i, j), LaurentQ()) + v
                key = (i + 2, j) if coord == 1 else (i, j + 2)
                nxt[key] = nxt.get(key, LaurentQ()) - v.shift(2 * c)
            poly = {k2: v for k2, v in nxt.items() if v}
    return DiagonalSymbol(poly, (lo1, lo2))


def exact_trace(word, names) -> RatQ:
    if not word:
        return as_ratq(0)  # tr_sigma subtracts epsilon: tr_sigma(1) = 0
    sym = diagonal_symbol(names, word)
    if sym is None:
        return as_ratq(0)
    return sym.series_sum()


def trace_functional(x: NCPoly, P: Presentation | None = None) -> RatQ:
    """tr_sigma(x) = tr(sigma(x) - epsilon(x)) in closed form."""
    P = P or build_sigma4q()
    x = P.nf(x)
    total = as_ratq(0)
    for w, c in x.terms.items():
        if w:
            total = total + as_ratq(c) * exact_trace(w, x.alphabet.names)
    return total


def truncated_trace(x: NCPoly, N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> mpq:
    """sum over the box of <n|sigma(x)|n> - epsilon(x), with sigma truncated letter by letter."""
    op = rep_sigma(x, N, q0)
    eps = eval_at(x.terms.get((), 0), q0)
    return op.trace() - eps * (N + 1) ** 2


TRACE_TABLE = [
    ("R", "1/(1-q^2)^2"),
    ("R^2", "1/(1-q^4)^2"),
    ("R^3", "1/(1-q^6)^2"),
    ("R^4", "1/(1-q^8)^2"),
    ("R^5", "1/(1-q^10)^2"),
    ("a a^*", "1/(1-q^4)^2"),
    ("b b^*", "1/((1-q^2)(1-q^4))"),
    ("a", "0"),
    ("b", "0"),
    ("1", "0"),
]


def trace_report(N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> list[dict]:
    from .coeff import parse_scalar

    S = build_sigma4q()
    q0 = as_rational(q0)
    rows = []
    for expr, expected in TRACE_TABLE:
        x = S.parse(expr)
        exact = trace_functional(x, S)
        trunc = truncated_trace(x, N, q0)
        val = exact.eval(q0)
        delta = abs(trunc - val)
        rows.append({
            "check": f"tr({expr})",
            "exact": str(exact),
            "expected": expected,
            "exact_matches": exact == parse_scalar(expected),
            "truncated": float(trunc),
            "delta": float(delta),
            "C": float(delta / q0 ** (2 * N)) if delta else 0.0,
        })
    return rows


# --- trace-class diagnostics ---


def reference_bounds(q0) -> dict:
    """The bounds quoted for tr|sigma(x)| and bounds that hold by a direct estimate."""
    q = as_rational(q0)
    return {
        "R": {"claimed": 1 / (1 - q**2) ** 2, "valid": 1 / (1 - q**2) ** 2},
        "a": {"claimed": 1 / ((1 - q) * (1 - q**3)), "valid": 1 / ((1 - q) * (1 - q**2))},
        "b": {"claimed": (1 + q**2) / ((1 - q) * (1 - q**3)), "valid": 1 / (1 - q) ** 2},
    }


def trace_norm_partial_sums(name: str, N: int, q0) -> list[tuple[mpq, mpq]]:
    """Rigorous (lower, upper) bounds of sum |entries| of sigma(name) over boxes 0..k, k <= N."""
    q0 = as_rational(q0)
    out = []
    lo_tot = hi_tot = mpq(0)
    for k in range(N + 1):
        shell = [(n1, k) for n1 in range(k + 1)] + [(k, n2) for n2 in range(k)]
        for n in shell:
            r = generator_action(name, n[0], n[1], q0)
            if r is None:
                continue
            lo, hi = r[1].abs_bounds()
            lo_tot += lo
            hi_tot += hi
        out.append((lo_tot, hi_tot))
    return out


def trace_class_diagnostics(N: int = DEFAULT_CUTOFF, q0=DEFAULT_Q0) -> list[dict]:
    """Partial trace norms of sigma(R), sigma(a), sigma(b) against the reference bounds.

    These operators are weighted shifts, so singular values are entry moduli.
    """
    bounds = reference_bounds(q0)
    rows = []
    for g in ("R", "a", "b"):
        sums = trace_norm_partial_sums(g, N, q0)
        monotone = all(sums[i][0] <= sums[i + 1][0] for i in range(len(sums) - 1))
        lo, hi = sums[-1]
        b = bounds[g]
        rows.append({
            "check": f"tr|sigma({g})|",
            "partial_sum": float(lo),
            "claimed_bound": float(b["claimed"]),
            "below_claimed": hi <= b["claimed"],
            "exceeds_claimed": lo > b["claimed"],
            "valid_bound": float(b["valid"]),
            "below_valid": hi <= b["valid"],
            "monotone": monotone,
        })
    return rows
