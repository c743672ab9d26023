"""Localization at a maximal ideal and Murthy's algorithm.

Elements of ``R_M[X]`` are stored as ``num / den`` with ``num`` in ``R[X]``
and ``den`` in ``R`` outside ``M``.  Fractions are kept reduced, with the
denominator scaled to leading coefficient 1, so equal elements have equal
representations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import bezout_cofactors

__all__ = [
    "NotLocalUnit",
    "LocalElem",
    "LocalFactor",
    "LocalMatrix",
    "local_product",
    "lemma5_combine",
    "lemma5_split",
    "murthy_realize",
    "MurthyResult",
]


class NotLocalUnit(ArithmeticError):
    pass


class LocalElem:
    """Fraction ``num / den`` over ``R_M`` (``num`` may involve the main variable)."""

    __slots__ = ("num", "den", "ideal")

    def __init__(self, num, den=None, ideal=None, _reduced=False):
        ring = num.ring
        if den is None:
            den = ring.one
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if ideal is not None and ideal.contains(den):
            raise NotLocalUnit(f"denominator {den} lies in {ideal}")
        if not _reduced and not den.is_one():
            if num.is_zero():
                den = ring.one
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num.exquo(g), den.exquo(g)
            lc = den.leading_term()[1]
            if lc != 1:
                inv = ring.const(lc).inverse_constant()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self.ideal = ideal

    # -- helpers
    @property
    def ring(self):
        return self.num.ring

    def _wrap(self, num, den):
        return LocalElem(num, den, None, _reduced=False)._with(self.ideal)

    def _with(self, ideal):
        self.ideal = ideal
        return self

    def _coerce(self, other):
        if isinstance(other, LocalElem):
            return other
        return LocalElem(self.ring(other), ideal=self.ideal)

    # -- arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return self._wrap(self.num + o.num, self.den)
        return self._wrap(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return LocalElem(-self.num, self.den, None, _reduced=True)._with(self.ideal)

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LocalElem):
            other = self._coerce(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_one():
            return f"LocalElem({self.num})"
        return f"LocalElem(({self.num})/({self.den}))"

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_unit(self):
        """Unit of ``R_M``: free of the main variables and numerator outside ``M``."""
        if self.ideal is None:
            raise ValueError("unit test needs an ideal")
        if set(self.num.variables()) - set(self.ideal.base_vars):
            return False
        return not self.ideal.contains(self.num)

    def inverse(self):
        if self.num.is_zero() or not self.is_unit():
            raise NotLocalUnit(f"{self} is not a unit at {self.ideal}")
        return LocalElem(self.den, self.num, self.ideal)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    # -- polynomial structure in the main variable
    def degree(self, var):
        return self.num.degree(var) if not self.num.is_zero() else -1

    def coeff(self, var, k):
        cs = self.num.coeffs_in(var)
        c = cs[k] if k < len(cs) else self.ring.zero
        return self._wrap(c, self.den)

    def leading_coeff(self, var):
        return self._wrap(self.num.leading_coeff_in(var), self.den)

    def at_zero(self, var):
        return self._wrap(self.num.subs({var: self.ring.zero}), self.den)

    def is_monic(self, var):
        return not self.num.is_zero() and self.num.leading_coeff_in(var) == self.den

    def subs(self, mapping):
        return self._wrap(self.num.subs(mapping), self.den)

    def divmod_monic(self, p, var):
        """``(f, g)`` with ``self = f p + g`` and ``deg g < deg p`` for monic ``p``."""
        if not p.is_monic(var):
            raise ValueError(f"{p} is not monic in {var}")
        ring = self.ring
        x = ring.gen(var)
        dp = p.degree(var)
        q = LocalElem(ring.zero, ideal=self.ideal)
        rem = self
        while not rem.is_zero() and rem.degree(var) >= dp:
            t = rem.leading_coeff(var) * self._wrap(x ** (rem.degree(var) - dp), ring.one)
            q = q + t
            rem = rem - t * p
        return q, rem

    def exquo_var(self, var):
        """``self / var`` for an element vanishing at ``var = 0``."""
        x = self.ring.gen(var)
        num = self.num.exquo(x)
        if num is None:
            raise ArithmeticError(f"{self} is not divisible by {var}")
        return LocalElem(num, self.den, None, _reduced=True)._with(self.ideal)

    def to_fraction(self):
        return self.num, self.den


def _local(ideal, value):
    if isinstance(value, LocalElem):
        return value
    return LocalElem(ideal.ring(value), ideal=ideal)


@dataclass(frozen=True)
class LocalFactor:
    """``E_ij(a)`` with ``a`` in ``R_M[X]`` (1-based indices)."""

    i: int
    j: int
    a: LocalElem

    def __repr__(self):
        return f"E{self.i}{self.j}({self.a})"


class LocalMatrix:
    """Square matrix over ``R_M[X]``."""

    def __init__(self, ideal, rows):
        self.ideal = ideal
        self.rows = [[_local(ideal, c) for c in r] for r in rows]
        self.n = len(self.rows)

    @classmethod
    def identity(cls, ideal, n):
        ring = ideal.ring
        return cls(ideal, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, LocalMatrix) and self.n == other.n
                and all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)))

    def __repr__(self):
        return "LocalMatrix(" + "; ".join(", ".join(map(str, r)) for r in self.rows) + ")"


def local_product(factors, n, ideal):
    """Ordered product of local factors."""
    m = LocalMatrix.identity(ideal, n).rows
    for e in factors:
        if e.a.is_zero():
            continue
        for row in m:
            if not row[e.i - 1].is_zero():
                row[e.j - 1] = row[e.j - 1] + row[e.i - 1] * e.a
    return LocalMatrix(ideal, m)


def special_matrix(ideal, p, q, r, s):
    z = ideal.ring.zero
    return LocalMatrix(ideal, [[p, q, z], [r, s, z], [z, z, ideal.ring.one]])


# ---------------------------------------------------------------------------
# Lemma on splitting


def lemma5_combine(h1, h2, h1p, h2p, a, ap, b):
    """From ``h1 a + h2 b = 1`` and ``h1' a' + h2' b = 1``, cofactors for ``(a a', b)``."""
    if not (h1 * a + h2 * b).is_one() or not (h1p * ap + h2p * b).is_one():
        raise ValueError("input pairs are not unimodular relations")
    g1 = h1 * h1p
    g2 = h2p + ap * h2 * h1p
    if not (g1 * a * ap + g2 * b).is_one():  # pragma: no cover - algebraic identity
        raise ArithmeticError("combined relation failed")
    return g1, g2


@dataclass
class Lemma5Split:
    """``[[aa', b], [c, d]] = prefix * left * infix * right * suffix`` (3 x 3 embedding)."""

    prefix: list
    left: tuple
    infix: list
    right: tuple
    suffix: list


def lemma5_split(a, ap, b, c, d, one=None):
    """Split the special matrix of ``(a a', b, c, d)`` with ``c1 = c2 = c``, ``d1 = a' d``, ``d2 = a d``.

    ``left`` and ``right`` are ``(a, b, c1, d1)`` and ``(a', b, c2, d2)``.
    Works for :class:`LocalElem` or plain polynomial inputs.
    """
    if not (a * ap * d - b * c).is_one():
        raise ValueError("need a a' d - b c = 1")
    if one is None:
        one = (a * ap * d - b * c)
    c1 = c2 = c
    d1 = ap * d
    d2 = a * d
    F = LocalFactor
    prefix = [F(2, 1, c * d1 * d2 - d * (c2 + ap * c1 * d2)), F(2, 3, d2 - one),
              F(3, 2, one), F(2, 3, -one)]
    infix = [F(2, 3, one), F(3, 2, -one), F(2, 3, one)]
    suffix = [F(2, 3, -one), F(3, 2, one), F(2, 3, a - one), F(3, 1, -ap * c1), F(3, 2, -d1)]
    return Lemma5Split(prefix, (a, b, c1, d1), infix, (ap, b, c2, d2), suffix)


# ---------------------------------------------------------------------------
# Murthy


@dataclass
class MurthyResult:
    factors: list
    depth: int
    denominators: list


def _terminal(x, q, c, d, var, ideal):
    """Factor ``[[X, q], [c, d]]`` where ``q(0)`` is a unit."""
    f, u = q.divmod_monic(x, var)
    # [[X, u], [c, d - f c]] * E12(f)
    d2 = d - f * c
    inv = u.inverse()
    F = LocalFactor
    return [F(1, 2, u), F(2, 1, -inv), F(1, 2, u - d2 * u), F(2, 1, x * inv), F(1, 2, f)]


def murthy_realize(p, q, r, s, var, ideal, max_depth=None):
    """Factor ``[[p, q, 0], [r, s, 0], [0, 0, 1]]`` over ``R_M[X]`` for monic ``p``.

    Inputs are :class:`LocalElem` (or polynomials, read with denominator 1).
    Returns a :class:`MurthyResult` whose factors multiply to the matrix.
    """
    p, q, r, s = (_local(ideal, t) for t in (p, q, r, s))
    if not (p * s - q * r).is_one():
        raise ValueError(f"determinant is {p * s - q * r}, not 1")
    if not p.is_monic(var):
        raise ValueError(f"{p} is not monic in {var}")
    bound = p.degree(var) if max_depth is None else max_depth
    one = _local(ideal, 1)
    x = _local(ideal, ideal.ring.gen(var))
    stats = {"depth": 0}

    def case1(p, q, r, s, depth):
        # q(0) is a unit: clear p(0), split off X, recurse on p / X
        F = LocalFactor
        q0 = q.at_zero(var)
        c = p.at_zero(var) * q0.inverse()
        post = [F(2, 1, c)] if not c.is_zero() else []
        p, r = p - c * q, r - c * s
        pp = p.exquo_var(var)
        sp = lemma5_split(x, pp, q, r, s, one=one)
        left = _terminal(x, q, sp.left[2], sp.left[3], var, ideal)
        right = run(*sp.right, depth + 1)
        return sp.prefix + left + sp.infix + right + sp.suffix + post

    def run(p, q, r, s, depth):
        stats["depth"] = max(stats["depth"], depth)
        if depth > bound:
            raise AssertionError("recursion deeper than deg p")
        F = LocalFactor
        d = p.degree(var)
        if d == 0:
            return [F(2, 1, r), F(1, 2, q)]
        post = []
        if q.degree(var) >= d:
            f, g = q.divmod_monic(p, var)
            q, s = g, s - f * r
            post = [F(1, 2, f)]
        if not q.is_zero() and q.at_zero(var).is_unit():
            return case1(p, q, r, s, depth) + post
        if not p.at_zero(var).is_unit():
            raise AssertionError("neither p(0) nor q(0) is a unit")
        # Case 2: p' p - q' q = 1 from the resultant, then one step into case 1
        pn, pd = p.to_fraction()
        qn, qd = q.to_fraction()
        g1, g2, res = bezout_cofactors(pn, qn, var)
        rho = _local(ideal, res)
        if not rho.is_unit():  # pragma: no cover - p monic and (p, q) unimodular
            raise AssertionError("resultant is not a unit")
        rinv = rho.inverse()
        pprime = LocalElem(g1 * pd, ideal=ideal) * rinv
        qprime = -(LocalElem(g2 * qd, ideal=ideal) * rinv)
        head = [F(2, 1, r * pprime - s * qprime), F(1, 2, -one)]
        return head + case1(p + qprime, q + pprime, qprime, pprime, depth) + post

    factors = run(p, q, r, s, 0)
    dens = []
    for e in factors:
        if not e.a.den.is_one() and e.a.den not in dens:
            dens.append(e.a.den)
    return MurthyResult(factors, stats["depth"], dens)
