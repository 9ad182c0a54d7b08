"""Exact scalars in the deformation parameter q.

``LaurentQ`` is a Laurent polynomial in q with rational coefficients and
``RatQ`` a reduced quotient of two of them.  Both are immutable.  Rational
numbers are ``gmpy2.mpq``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

__all__ = [
    "mpq",
    "LaurentQ",
    "RatQ",
    "PoleAtQ0",
    "DivisionByZero",
    "ParseError",
    "Q",
    "ONE",
    "ZERO",
    "as_ratq",
    "as_rational",
    "parse_scalar",
    "eval_at",
    "derivative_at_one",
]


class DivisionByZero(ZeroDivisionError):
    pass


class PoleAtQ0(ValueError):
    """Raised when a rational function is evaluated at one of its poles."""


class ParseError(ValueError):
    pass


def as_rational(x) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return mpq(x)


# --- dense helpers on coefficient lists (index = exponent, lowest first) ---


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _divmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    quot = [mpq(0)] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] / lead
        if c:
            quot[k] = c
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return _trim(quot), _trim(a[:db] if db > 0 else [])


def _gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


class LaurentQ:
    __slots__ = ("_t", "_h")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in dict(terms).items():
                c = as_rational(c)
                if c:
                    t[int(e)] = c
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t):
        obj = cls.__new__(cls)
        obj._t = t
        obj._h = None
        return obj

    @classmethod
    def const(cls, c):
        c = as_rational(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def monomial(cls, e, c=1):
        c = as_rational(c)
        return cls._raw({e: c} if c else {})

    @property
    def terms(self):
        return dict(self._t)

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_const(self):
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def is_monomial(self):
        return len(self._t) == 1

    def min_exp(self):
        return min(self._t) if self._t else 0

    def max_exp(self):
        return max(self._t) if self._t else 0

    def coeff(self, e):
        return self._t.get(e, mpq(0))

    def __eq__(self, other):
        if isinstance(other, LaurentQ):
            return self._t == other._t
        if isinstance(other, RatQ):
            return other == self
        try:
            return self._t == LaurentQ.const(other)._t
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.is_const():
                self._h = hash(self._t.get(0, mpq(0)))
            else:
                self._h = hash(frozenset(self._t.items()))
        return self._h

    def __neg__(self):
        return LaurentQ._raw({e: -c for e, c in self._t.items()})

    def __add__(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, RatQ):
                return NotImplemented
            other = LaurentQ.const(other)
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t = dict(a)
        for e, c in b.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return LaurentQ._raw(t)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatQ):
            return NotImplemented
        return self + (-other if isinstance(other, LaurentQ) else LaurentQ.const(-as_rational(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, RatQ):
                return NotImplemented
            c = as_rational(other)
            if not c:
                return LaurentQ._raw({})
            return LaurentQ._raw({e: v * c for e, v in self._t.items()})
        t = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = e1 + e2
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentQ._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise DivisionByZero("negative power of a non-monomial Laurent polynomial")
            (e, c), = self._t.items()
            return LaurentQ._raw({e * n: c ** n})
        out = LaurentQ.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        return LaurentQ._raw({e + k: c for e, c in self._t.items()})

    def dense(self):
        """Coefficient list after shifting the lowest exponent to 0."""
        if not self._t:
            return []
        lo, hi = self.min_exp(), self.max_exp()
        out = [mpq(0)] * (hi - lo + 1)
        for e, c in self._t.items():
            out[e - lo] = c
        return out

    @classmethod
    def from_dense(cls, coeffs, shift=0):
        return cls._raw({i + shift: c for i, c in enumerate(coeffs) if c})

    def eval(self, q0):
        q0 = as_rational(q0)
        if not q0 and any(e < 0 for e in self._t):
            raise PoleAtQ0("negative power of q at q = 0")
        return sum((c * q0 ** e for e, c in self._t.items()), mpq(0))

    def derivative(self):
        return LaurentQ._raw({e - 1: c * e for e, c in self._t.items() if e})

    def subs_inverse(self):
        """Substitute q -> 1/q."""
        return LaurentQ._raw({-e: c for e, c in self._t.items()})

    def __repr__(self):
        return f"LaurentQ({render_laurent(self)!r})"

    def __str__(self):
        return render_laurent(self)


_ONE_L = LaurentQ.const(1)
_SCALARS = (int, type(mpq(0)), Fraction, LaurentQ)


class RatQ:
    """Reduced rational function ``num/den`` in q.

    The denominator is a polynomial with nonzero constant term 1; a
    denominator of 1 is stored as ``None`` so that Laurent arithmetic stays
    on a fast path.
    """

    __slots__ = ("num", "_den", "_h")

    def __init__(self, num, den=None):
        num = num if isinstance(num, LaurentQ) else LaurentQ.const(num) if not isinstance(num, RatQ) else None
        if num is None:
            raise TypeError("use as_ratq for RatQ inputs")
        if den is not None and not isinstance(den, LaurentQ):
            den = LaurentQ.const(den)
        n, d = _reduce(num, den)
        self.num = n
        self._den = d
        self._h = None

    @classmethod
    def _raw(cls, num, den=None):
        obj = cls.__new__(cls)
        obj.num = num
        obj._den = den
        obj._h = None
        return obj

    @property
    def den(self):
        return _ONE_L if self._den is None else self._den

    def is_laurent(self):
        return self._den is None

    def __bool__(self):
        return bool(self.num._t)

    def is_zero(self):
        return not self.num._t

    def __eq__(self, other):
        if not isinstance(other, RatQ):
            try:
                other = as_ratq(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num._t == other.num._t and (
            (self._den is None and other._den is None)
            or (self._den is not None and other._den is not None and self._den._t == other._den._t)
        )

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.num) if self._den is None else hash((self.num, self._den))
        return self._h

    def __neg__(self):
        return RatQ._raw(-self.num, self._den)

    def __add__(self, other):
        if not isinstance(other, RatQ):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            other = as_ratq(other)
        if self._den is None and other._den is None:
            return RatQ._raw(self.num + other.num)
        if self._den is not None and other._den is not None and self._den._t == other._den._t:
            return _mk(self.num + other.num, self._den)
        return _mk(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RatQ):
            other = as_ratq(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatQ):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            if isinstance(other, LaurentQ):
                other = RatQ._raw(other)
            else:
                c = as_rational(other)
                if not c:
                    return RatQ._raw(LaurentQ._raw({}))
                return RatQ._raw(self.num * c, self._den)
        if self._den is None and other._den is None:
            return RatQ._raw(self.num * other.num)
        if not self.num._t or not other.num._t:
            return RatQ._raw(LaurentQ._raw({}))
        return _mk(self.num * other.num, _mul_den(self._den, other._den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num._t:
            raise DivisionByZero("division by the zero rational function")
        return _mk(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RatQ):
            other = as_ratq(other)
        if other.num.is_monomial() and other._den is None:
            (e, c), = other.num._t.items()
            return RatQ._raw(LaurentQ._raw({k - e: v / c for k, v in self.num._t.items()}), self._den)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_ratq(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if self._den is None:
            return RatQ._raw(self.num ** n)
        return RatQ._raw(self.num ** n, self._den ** n)

    def eval(self, q0):
        q0 = as_rational(q0)
        if self._den is None:
            return self.num.eval(q0)
        d = self._den.eval(q0)
        if not d:
            raise PoleAtQ0(f"denominator {self._den} vanishes at q = {q0}")
        return self.num.eval(q0) / d

    def derivative(self):
        if self._den is None:
            return RatQ._raw(self.num.derivative())
        n, d = self.num, self._den
        return _mk(n.derivative() * d - n * d.derivative(), d * d)

    def subs_inverse(self):
        return as_ratq(RatQ._raw(self.num.subs_inverse())) / as_ratq(self.den.subs_inverse())

    def __repr__(self):
        return f"RatQ({render(self)!r})"

    def __str__(self):
        return render(self)


def _mul_den(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a * b


def _reduce(num, den):
    if den is None or den._t == _ONE_L._t:
        return num, None
    if not den._t:
        raise DivisionByZero("zero denominator")
    if not num._t:
        return num, None
    # move q-powers of the denominator into the numerator
    lo = den.min_exp()
    num = num.shift(-lo)
    dd = den.dense()
    nd = num.dense()
    nshift = num.min_exp()
    g = _gcd(nd, dd)
    if len(g) > 1:
        nd, r1 = _divmod(nd, g)
        dd, r2 = _divmod(dd, g)
        assert not r1 and not r2
    c0 = dd[0]
    if c0 != 1:
        nd = [c / c0 for c in nd]
        dd = [c / c0 for c in dd]
    num = LaurentQ.from_dense(nd, nshift)
    if len(dd) == 1:
        return num, None
    return num, LaurentQ.from_dense(dd)


def _mk(num, den):
    n, d = _reduce(num, den)
    return RatQ._raw(n, d)


def as_ratq(x) -> RatQ:
    if isinstance(x, RatQ):
        return x
    if isinstance(x, LaurentQ):
        return RatQ._raw(x)
    if isinstance(x, str):
        return parse_scalar(x)
    return RatQ._raw(LaurentQ.const(x))


Q = RatQ._raw(LaurentQ.monomial(1))
ONE = RatQ._raw(LaurentQ.const(1))
ZERO = RatQ._raw(LaurentQ())


def eval_at(x, q0):
    """Evaluate a scalar at the rational point ``q0``."""
    if isinstance(x, (RatQ, LaurentQ)):
        return x.eval(q0)
    return as_rational(x)


def derivative_at_one(x):
    """d/dq of ``x`` evaluated at q = 1."""
    if isinstance(x, (RatQ, LaurentQ)):
        return x.derivative().eval(1)
    return mpq(0)


# --- text form ---


def _fmt_rat(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_laurent(p: LaurentQ) -> str:
    if not p._t:
        return "0"
    parts = []
    for e in sorted(p._t):
        c = p._t[e]
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if e == 0:
            body = _fmt_rat(a)
        else:
            qp = "q" if e == 1 else f"q^{e}"
            body = qp if a == 1 else f"{_fmt_rat(a)}*{qp}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def render(x) -> str:
    x = as_ratq(x)
    n = render_laurent(x.num)
    if x._den is None:
        return n
    if len(x.num._t) > 1:
        n = f"({n})"
    return f"{n}/({render_laurent(x._den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        num, q, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif q is not None:
            out.append(("q", None))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _ScalarParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise ParseError("empty scalar expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing tokens in scalar expression: {self.toks[self.i:]}")
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
                v = v * t if tok[1] == "*" else v / t
            elif tok[0] in ("num", "q") or tok == ("op", "("):
                v = v * self.unary()
            else:
                return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer literal")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RatQ._raw(LaurentQ.const(val))
        if kind == "q":
            return Q
        if (kind, val) == ("op", "("):
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
            return v
        raise ParseError(f"unexpected token {val!r}")


def parse_scalar(text: str) -> RatQ:
    """Parse strings such as ``"1 - q^2"`` or ``"(1-q^2)^2/(1-q^4)"``."""
    return _ScalarParser(text).parse()
