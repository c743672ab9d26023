"""Exact sparse multivariate polynomials over Q and GF(p).

Polynomials are thin immutable wrappers around python-flint's ``fmpq_mpoly``
and ``nmod_mpoly`` types.  The wrapper adds what the rest of the package
needs on top of raw arithmetic: a parser and a canonical printer for the text
grammar, hashing, coefficient extraction with respect to one variable,
substitutions, and the univariate tools (division by a monic divisor,
resultants, Bezout cofactors, Taylor splitting, monicization).
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

import flint

__all__ = [
    "Field",
    "QQ",
    "GF",
    "Ring",
    "Poly",
    "Substitution",
    "PolyParseError",
    "MonicizeError",
    "univariate_divide",
    "sylvester_matrix",
    "bareiss_det",
    "resultant",
    "bezout_cofactors",
    "taylor_split",
    "monicize",
]


class PolyParseError(ValueError):
    """Malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class MonicizeError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields


class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if p < 2 or not flint.fmpz(p).is_prime():
                raise ValueError(f"GF(p) requires a prime, got {p}")
            if p >= 2**63:
                raise ValueError("modulus too large")
        self.p = p

    @property
    def is_finite(self):
        return self.p is not None

    @property
    def characteristic(self):
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def spec(self):
        """Short text form used by the CLI: ``q`` or ``gf:p``."""
        return "q" if self.p is None else f"gf:{self.p}"

    @classmethod
    def from_spec(cls, text):
        text = text.strip().lower()
        if text in ("q", "qq", "rational"):
            return QQ
        m = re.fullmatch(r"gf[:(]?(\d+)\)?", text)
        if m:
            return GF(int(m.group(1)))
        raise ValueError(f"unknown field {text!r}; use 'q' or 'gf:p'")

    def scalar(self, value):
        """Convert an int / Fraction / flint scalar into the field's scalar type."""
        if self.p is None:
            if isinstance(value, Fraction):
                return flint.fmpq(value.numerator, value.denominator)
            return flint.fmpq(value)
        if isinstance(value, Fraction):
            return flint.nmod(value.numerator, self.p) / flint.nmod(value.denominator, self.p)
        if isinstance(value, flint.fmpq):
            return flint.nmod(int(value.p), self.p) / flint.nmod(int(value.q), self.p)
        return flint.nmod(int(value), self.p)

    def to_python(self, c):
        """Field scalar as a ``Fraction`` (over Q) or an ``int`` in [0, p)."""
        if self.p is None:
            c = flint.fmpq(c)
            return Fraction(int(c.p), int(c.q))
        return int(c)


QQ = Field()


@lru_cache(maxsize=None)
def GF(p):
    return Field(p)


# ---------------------------------------------------------------------------
# rings


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Ring:
    """Polynomial ring ``field[names...]`` with graded reverse lex order."""

    _cache = {}

    def __new__(cls, names, field=QQ):
        names = tuple(names)
        key = (names, field)
        ring = cls._cache.get(key)
        if ring is not None:
            return ring
        for name in names:
            if not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        ring = super().__new__(cls)
        ring.names = names
        ring.field = field
        if field.p is None:
            ring.ctx = flint.fmpq_mpoly_ctx.get(names, "degrevlex")
        else:
            ring.ctx = flint.nmod_mpoly_ctx.get(names, modulus=field.p, ordering="degrevlex")
        ring._index = {n: i for i, n in enumerate(names)}
        cls._cache[key] = ring
        return ring

    def __reduce__(self):
        return (Ring, (self.names, self.field))

    def __repr__(self):
        return f"Ring({list(self.names)}, {self.field!r})"

    @property
    def nvars(self):
        return len(self.names)

    def index(self, var):
        if isinstance(var, int):
            if not 0 <= var < len(self.names):
                raise IndexError(var)
            return var
        if isinstance(var, Poly):
            var = var.as_variable()
        try:
            return self._index[var]
        except KeyError:
            raise ValueError(f"{var!r} is not a variable of {self}") from None

    def gen(self, var):
        return Poly(self, self.ctx.gens()[self.index(var)])

    def gens(self):
        return tuple(Poly(self, g) for g in self.ctx.gens())

    @property
    def zero(self):
        return Poly(self, self.ctx.from_dict({}))

    @property
    def one(self):
        return self.const(1)

    def const(self, value):
        return Poly(self, self.ctx.constant(self.field.scalar(value)))

    def __call__(self, value):
        if isinstance(value, Poly):
            if value.ring is self:
                return value
            return self.embed(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def from_terms(self, terms):
        """Build from a mapping exponent-tuple -> coefficient."""
        f = self.field
        return Poly(self, self.ctx.from_dict({tuple(e): f.scalar(c) for e, c in terms.items()}))

    def extend(self, *names):
        return Ring(self.names + tuple(names), self.field)

    def fresh_names(self, count, stem="t"):
        out, i = [], 0
        while len(out) < count:
            name = f"_{stem}{i}"
            if name not in self._index:
                out.append(name)
            i += 1
        return out

    def embed(self, p):
        """Map ``p`` from another ring by variable name (missing names must not occur)."""
        if p.ring.field != self.field:
            raise TypeError(f"cannot mix coefficient fields {p.ring.field} and {self.field}")
        images = []
        for name in p.ring.names:
            if name in self._index:
                images.append(self.ctx.gens()[self._index[name]])
            else:
                images.append(None)
        if any(im is None for im in images):
            used = [n for n, d in zip(p.ring.names, p.raw.degrees()) if d > 0]
            missing = [n for n in used if n not in self._index]
            if missing:
                raise ValueError(f"variables {missing} not in {self}")
            images = [im if im is not None else self.ctx.from_dict({}) for im in images]
        if not p.ring.names:
            return Poly(self, self.ctx.constant(p.raw.leading_coefficient() if not p.raw.is_zero() else 0))
        return Poly(self, p.raw.compose(*images, ctx=self.ctx))

    def parse(self, text):
        return _Parser(self, text).parse()

    def random_poly(self, rng, degree=2, coeff_range=2, variables=None, density=0.6):
        """Random polynomial with integer coefficients in [-coeff_range, coeff_range]."""
        idx = [self.index(v) for v in (variables if variables is not None else self.names)]
        terms = {}
        for e in _monomials_up_to(len(idx), degree):
            if rng.random() < density:
                c = rng.randint(-coeff_range, coeff_range)
                if c:
                    full = [0] * self.nvars
                    for k, d in zip(idx, e):
                        full[k] = d
                    terms[tuple(full)] = c
        return self.from_terms(terms)


def _monomials_up_to(nvars, degree):
    if nvars == 0:
        yield ()
        return
    for d in range(degree + 1):
        for rest in _monomials_up_to(nvars - 1, degree - d):
            yield (d,) + rest


def grevlex_key(exp):
    """Sort key: larger key means larger monomial in graded reverse lex order."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Immutable polynomial; ``raw`` is the underlying flint object."""

    __slots__ = ("ring", "raw", "_hash")

    def __init__(self, ring, raw):
        self.ring = ring
        self.raw = raw
        self._hash = None

    # -- coercion helpers
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                if other.ring.field != self.ring.field:
                    raise TypeError(
                        f"cannot mix coefficient fields {self.ring.field} and {other.ring.field}"
                    )
                raise TypeError(f"polynomials live in different rings: {self.ring} vs {other.ring}")
            return other.raw
        if isinstance(other, (int, Fraction, flint.fmpq, flint.nmod)):
            return self.ring.ctx.constant(self.ring.field.scalar(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly(self.ring, self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly(self.ring, self.raw - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly(self.ring, o - self.raw)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly(self.ring, self.raw * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(self.ring, -self.raw)

    def __pos__(self):
        return self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative exponent")
        if k == 0:
            return self.ring.one
        return Poly(self.ring, self.raw**k)

    def __truediv__(self, other):
        """Exact division; raises ``ArithmeticError`` when not exact."""
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        try:
            return Poly(self.ring, self.raw / o)
        except flint.DomainError as exc:
            raise ArithmeticError(str(exc)) from None

    def divides(self, other):
        """True when ``self`` divides ``other`` exactly."""
        if self.is_zero():
            return other.is_zero()
        q, r = divmod(other.raw, self.raw)
        return r.is_zero()

    def exquo(self, other):
        """``self / other`` if exact, else ``None``."""
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q, r = divmod(self.raw, o)
        if not r.is_zero():
            return None
        return Poly(self.ring, q)

    def gcd(self, other):
        return Poly(self.ring, self.raw.gcd(self._coerce(other)))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring is other.ring and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.ring.ctx.constant(self.ring.field.scalar(other))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, self.ring.field, tuple(sorted(
                (e, str(c)) for e, c in self.raw.terms()))))
        return self._hash

    def __bool__(self):
        return not self.raw.is_zero()

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_poly(self)

    def __reduce__(self):
        return (_rebuild_poly, (self.ring, str(self)))

    # -- inspection
    def is_zero(self):
        return self.raw.is_zero()

    def is_constant(self):
        return self.raw.is_constant()

    def is_one(self):
        return self.raw.is_one()

    def constant_value(self):
        """Coefficient of the constant monomial, as a field scalar."""
        return self._coeff_of((0,) * self.ring.nvars)

    def _coeff_of(self, exp):
        return self.raw[tuple(exp)] if self.ring.nvars else (
            self.raw.leading_coefficient() if not self.raw.is_zero() else self.ring.field.scalar(0))

    def coefficient(self, exp):
        return self.ring.field.to_python(self._coeff_of(exp))

    def terms(self):
        """(exponent tuple, field scalar) pairs in descending grevlex order."""
        return list(self.raw.terms())

    def nterms(self):
        return len(self.raw)

    def degree(self, var):
        if self.raw.is_zero():
            return -1
        return self.raw.degrees()[self.ring.index(var)]

    def degrees(self):
        return tuple(self.raw.degrees())

    def total_degree(self):
        if self.raw.is_zero():
            return -1
        return int(self.raw.total_degree())

    def variables(self):
        """Names of the variables that actually occur."""
        if self.raw.is_zero():
            return ()
        return tuple(n for n, d in zip(self.ring.names, self.raw.degrees()) if d > 0)

    def involves(self, var):
        return self.degree(var) > 0

    def as_variable(self):
        terms = self.terms()
        if len(terms) == 1 and sum(terms[0][0]) == 1 and terms[0][1] == 1:
            return self.ring.names[list(terms[0][0]).index(1)]
        raise ValueError(f"{self} is not a variable")

    def leading_term(self):
        """(exponent, coefficient) of the grevlex-leading term."""
        if self.raw.is_zero():
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self.raw.terms()))

    def coeffs_in(self, var):
        """Dense list ``[c_0, c_1, ...]`` of coefficients with respect to ``var``."""
        k = self.ring.index(var)
        if self.raw.is_zero():
            return []
        buckets = {}
        for e, c in self.raw.terms():
            d = e[k]
            e2 = e[:k] + (0,) + e[k + 1:]
            buckets.setdefault(d, {})[e2] = c
        top = max(buckets)
        ctx = self.ring.ctx
        return [Poly(self.ring, ctx.from_dict(buckets.get(d, {}))) for d in range(top + 1)]

    def leading_coeff_in(self, var):
        cs = self.coeffs_in(var)
        return cs[-1] if cs else self.ring.zero

    def is_monic_in(self, var):
        return not self.is_zero() and self.leading_coeff_in(var).is_one()

    @classmethod
    def from_coeffs(cls, ring, var, coeffs):
        x = ring.gen(var)
        out = ring.zero
        for c in reversed(list(coeffs)):
            out = out * x + c
        return out

    # -- substitution
    def subs(self, mapping):
        """Substitute polynomials or scalars for variables (simultaneously)."""
        if not mapping:
            return self
        ring = self.ring
        gens = ring.ctx.gens()
        images = list(gens)
        for var, val in mapping.items():
            images[ring.index(var)] = ring(val).raw
        return Poly(ring, self.raw.compose(*images, ctx=ring.ctx) if ring.nvars else self.raw)

    def evaluate(self, var, value):
        return self.subs({var: value})

    def scale_to_monic_in(self, var):
        lc = self.leading_coeff_in(var)
        if not lc.is_constant() or lc.is_zero():
            raise ValueError(f"leading coefficient {lc} is not a nonzero constant")
        return self / lc

    def inverse_constant(self):
        """Multiplicative inverse of a nonzero constant polynomial."""
        if not self.is_constant() or self.is_zero():
            raise ZeroDivisionError(f"{self} is not a unit")
        return self.ring.one / self


def _rebuild_poly(ring, text):
    return ring.parse(text)


# ---------------------------------------------------------------------------
# printing and parsing


def _format_coeff(field, c):
    if field.p is None:
        c = flint.fmpq(c)
        if c.q == 1:
            return str(c.p)
        return f"{c.p}/{c.q}"
    return str(int(c))


def format_poly(p):
    """Canonical text: grevlex descending terms, explicit ``*`` and ``^``."""
    if p.raw.is_zero():
        return "0"
    names = p.ring.names
    field = p.ring.field
    terms = sorted(p.raw.terms(), key=lambda t: grevlex_key(t[0]), reverse=True)
    out = []
    for idx, (exp, c) in enumerate(terms):
        text = _format_coeff(field, c)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exp) if e > 0
        )
        if mono:
            body = mono if text == "1" else f"{text}*{mono}"
        else:
            body = text
        if idx == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolyParseError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastindex)
            kind = ("num", "ident", "op")[m.lastindex - 1]
            value = m.group(m.lastindex)
            if value == "**":
                value = "^"
            self.tokens.append((kind, value, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise PolyParseError("empty polynomial", self.text, 0)
        value = self.expr()
        tok = self.peek()
        if tok is not None:
            raise PolyParseError(f"unexpected token {tok[1]!r}", self.text, tok[2])
        return value

    def expr(self):
        value = self.term()
        while (tok := self.peek()) is not None and tok[1] in "+-" and tok[0] == "op":
            self.next()
            rhs = self.term()
            value = value + rhs if tok[1] == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "*/":
            self.next()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolyParseError("division only by a nonzero constant", self.text, tok[2])
                value = value / rhs
        return value

    def unary(self):
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.next()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok[0] != "num":
                raise PolyParseError("exponent must be a non-negative integer", self.text, exp_tok[2])
            return base ** int(exp_tok[1])
        return base

    def atom(self):
        tok = self.next()
        kind, value, pos = tok
        if kind == "num":
            return self.ring.const(int(value))
        if kind == "ident":
            if value not in self.ring._index:
                raise PolyParseError(f"unknown variable {value!r}", self.text, pos)
            return self.ring.gen(value)
        if value == "(":
            inner = self.expr()
            close = self.next()
            if close[1] != ")":
                raise PolyParseError("expected ')'", self.text, close[2])
            return inner
        raise PolyParseError(f"unexpected token {value!r}", self.text, pos)


# ---------------------------------------------------------------------------
# substitutions


class Substitution:
    """Simultaneous substitution of polynomials for variables.

    ``inverse`` is recorded when the map is a ring automorphism.
    """

    def __init__(self, ring, assignments, inverse=None):
        self.ring = ring
        self.assignments = {ring.names[ring.index(k)]: ring(v) for k, v in assignments.items()}
        self._inverse = inverse

    @classmethod
    def identity(cls, ring):
        sub = cls(ring, {})
        sub._inverse = sub
        return sub

    @property
    def invertible(self):
        return self._inverse is not None

    @property
    def inverse(self):
        if self._inverse is None:
            raise ValueError("substitution is not marked invertible")
        return self._inverse

    def is_identity(self):
        return all(v == self.ring.gen(k) for k, v in self.assignments.items())

    def __call__(self, p):
        return p.subs(self.assignments) if self.assignments else p

    def compose(self, other):
        """``self`` after ``other``: p -> self(other(p))."""
        mapping = {n: self(other(self.ring.gen(n))) for n in self.ring.names}
        inv = None
        if self.invertible and other.invertible:
            inv = Substitution(self.ring, {n: other.inverse(self.inverse(self.ring.gen(n)))
                                           for n in self.ring.names})
            inv._inverse = None
        sub = Substitution(self.ring, mapping)
        if inv is not None:
            inv._inverse = sub
            sub._inverse = inv
        return sub

    def __repr__(self):
        body = ", ".join(f"{k} -> {v}" for k, v in self.assignments.items())
        return f"Substitution({body})"


# ---------------------------------------------------------------------------
# univariate tools over the coefficient ring of the remaining variables


def univariate_divide(f, g, var):
    """Divide ``f`` by ``g``, monic in ``var``; returns ``(quotient, remainder)``."""
    if g.is_zero() or not g.is_monic_in(var):
        raise ValueError(f"divisor {g} is not monic in {var}")
    ring = f.ring
    x = ring.gen(var)
    dg = g.degree(var)
    q = ring.zero
    r = f
    while not r.is_zero() and r.degree(var) >= dg:
        dr = r.degree(var)
        lc = r.leading_coeff_in(var)
        t = lc * x ** (dr - dg)
        q = q + t
        r = r - t * g
    return q, r


def sylvester_matrix(f1, f2, var):
    """Sylvester matrix, ``f1`` rows first, columns indexed by ascending powers."""
    a = f1.coeffs_in(var)
    b = f2.coeffs_in(var)
    d, e = len(a) - 1, len(b) - 1
    size = d + e
    zero = f1.ring.zero
    rows = []
    for shift in range(e):
        row = [zero] * size
        for k, c in enumerate(a):
            row[shift + k] = c
        rows.append(row)
    for shift in range(d):
        row = [zero] * size
        for k, c in enumerate(b):
            row[shift + k] = c
        rows.append(row)
    return rows


def bareiss_det(matrix, ring):
    """Fraction-free determinant of a square matrix of polynomials."""
    m = [[c.raw for c in row] for row in matrix]
    n = len(m)
    if n == 0:
        return ring.one
    sign = 1
    prev = ring.ctx.constant(ring.field.scalar(1))
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) / prev
            row_i[k] = ring.ctx.from_dict({})
        prev = pivot
    det = Poly(ring, m[n - 1][n - 1])
    return det if sign == 1 else -det


def _check_pair(f1, f2, var):
    if f1.is_zero() or f2.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if f1.degree(var) == 0 and f2.degree(var) == 0:
        raise ValueError(f"both inputs are constant in {var}")


def resultant(f1, f2, var):
    """Resultant with respect to ``var``: determinant of :func:`sylvester_matrix`.

    With ascending-power columns, Res(X - a, X - b) = b - a.
    """
    _check_pair(f1, f2, var)
    return bareiss_det(sylvester_matrix(f1, f2, var), f1.ring)


def bezout_cofactors(f1, f2, var):
    """Return ``(g1, g2, r)`` with ``f1*g1 + f2*g2 = r = resultant(f1, f2, var)``.

    The cofactors solve the transposed Sylvester system fraction-free, so
    deg(g1) < deg(f2) and deg(g2) < deg(f1) in ``var``.
    """
    _check_pair(f1, f2, var)
    ring = f1.ring
    syl = sylvester_matrix(f1, f2, var)
    n = len(syl)
    d, e = f1.degree(var), f2.degree(var)
    # columns of M are the rows of the Sylvester matrix; augmented with e_0
    one = ring.ctx.constant(ring.field.scalar(1))
    zero = ring.ctx.from_dict({})
    m = [[syl[j][i].raw for j in range(n)] + [one if i == 0 else zero] for i in range(n)]
    sign = 1
    prev = one
    for k in range(n):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                raise ValueError("zero resultant: the polynomials share a common factor")
        pivot = m[k][k]
        for i in range(k + 1, n):
            lead = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) / prev
            row_i[k] = zero
        prev = pivot
    big_d = m[n - 1][n - 1]
    y = [zero] * n
    for i in range(n - 1, -1, -1):
        acc = big_d * m[i][n]
        for j in range(i + 1, n):
            acc -= m[i][j] * y[j]
        y[i] = acc / m[i][i]
    r = Poly(ring, big_d) if sign == 1 else -Poly(ring, big_d)
    coeffs = [Poly(ring, c) if sign == 1 else -Poly(ring, c) for c in y]
    g1 = Poly.from_coeffs(ring, var, coeffs[:e])
    g2 = Poly.from_coeffs(ring, var, coeffs[e:])
    if f1 * g1 + f2 * g2 != r:
        raise ArithmeticError("Bezout identity failed")  # pragma: no cover
    return g1, g2, r


def taylor_split(f, var_x, var_y, var_z):
    """``s`` with ``f(X + Y*Z) = f(X) + Y*s(X, Y, Z)``."""
    x, y, z = (f.ring.gen(v) for v in (var_x, var_y, var_z))
    shifted = f.subs({var_x: x + y * z})
    diff = shifted - f
    if diff.is_zero():
        return f.ring.zero
    return diff / y


def divided_shift(f, var, b, t, d):
    """``s(b, t, d)`` for the Taylor split of ``f`` in ``var``, without dividing by ``t``.

    Satisfies ``f(b + t*d) = f(b) + t * s`` identically, also when ``t`` is 0.
    """
    ring = f.ring
    yname, zname = ring.fresh_names(2, "y")
    big = ring.extend(yname, zname)
    s = taylor_split(big(f), var, yname, zname)
    return ring.embed(big(s).subs({var: big(b), yname: big(t), zname: big(d)})
                      .subs({yname: big.zero, zname: big.zero}))


def monicize(polys, var, variables=None, seed=0, attempts=64):
    """Invertible substitution making ``polys[0]`` monic in ``var`` up to a constant.

    ``variables`` lists the other variables allowed to move (default: all).
    Over Q: linear maps ``x_j -> x_j + c_j*var`` (all-ones first, then random
    small integers).  Over GF(p): the power map ``x_j -> x_j + var^(D^k)`` with
    ``D`` one more than the largest single exponent.
    """
    f = polys[0]
    if f.is_zero():
        raise ValueError("cannot monicize the zero polynomial")
    ring = f.ring
    var = ring.names[ring.index(var)]
    if variables is None:
        variables = [n for n in ring.names if n != var]
    variables = [ring.names[ring.index(v)] for v in variables if ring.names[ring.index(v)] != var]
    x = ring.gen(var)

    def lc_is_constant(sub):
        lc = sub(f).leading_coeff_in(var)
        return lc.is_constant() and not lc.is_zero()

    identity = Substitution.identity(ring)
    if lc_is_constant(identity):
        return identity
    moving = [v for v in variables if f.involves(v)]
    if ring.field.is_finite:
        big = 1 + max(max(f.degrees()), 1)
        fwd = {v: ring.gen(v) + x ** (big ** (k + 1)) for k, v in enumerate(moving)}
        bwd = {v: ring.gen(v) - x ** (big ** (k + 1)) for k, v in enumerate(moving)}
        candidates = [(fwd, bwd)]
    else:
        rng = random.Random(seed)
        candidates = [({v: ring.gen(v) + x for v in moving}, {v: ring.gen(v) - x for v in moving})]
        for _ in range(attempts - 1):
            cs = {v: rng.choice([-3, -2, -1, 1, 2, 3]) for v in moving}
            candidates.append(({v: ring.gen(v) + cs[v] * x for v in moving},
                               {v: ring.gen(v) - cs[v] * x for v in moving}))
    for fwd, bwd in candidates:
        sub = Substitution(ring, fwd)
        if lc_is_constant(sub):
            inv = Substitution(ring, bwd, inverse=sub)
            sub._inverse = inv
            return sub
    raise MonicizeError(f"no monicizing substitution found for {f} in {var}")
