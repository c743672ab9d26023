"""Square polynomial matrices, elementary factors and factorizations.

Factorizations are read left to right: ``Factorization([E1, E2, E3])``
stands for the matrix product ``E1 * E2 * E3``.  Elementary factor indices are
1-based, as in ``E_ij(a) = I + a * e_ij``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .ideals import NotUnit, UnimodCertificate, unit_certificate
from .ring import QQ, Field, Poly, Ring, bareiss_det

__all__ = [
    "NotUnimodular",
    "FormatError",
    "PolyMatrix",
    "ElemFactor",
    "Factorization",
    "product_of",
    "verify",
    "embed",
    "unimodular_certificate_for_column",
    "elementary_matrix",
    "diag_unit_factors",
]

FORMAT_VERSION = 1


class NotUnimodular(ValueError):
    pass


class FormatError(ValueError):
    """Malformed matrix / factorization JSON."""


class PolyMatrix:
    """Immutable n x n matrix of polynomials over one ring (0-based access)."""

    __slots__ = ("ring", "rows", "n")

    def __init__(self, ring, rows):
        rows = tuple(tuple(ring(c) for c in row) for row in rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        self.ring = ring
        self.rows = rows
        self.n = n

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_strings(cls, ring, rows):
        return cls(ring, [[ring.parse(str(c)) for c in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def column(self, j):
        return [r[j] for r in self.rows]

    def tolist(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(c) for c in r) for r in self.rows)
        return f"PolyMatrix([{body}])"

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def apply(self, vector):
        """Matrix times column vector (list of Poly)."""
        out = []
        for r in self.rows:
            acc = self.ring.zero
            for c, v in zip(r, vector):
                if not c.is_zero() and not v.is_zero():
                    acc = acc + c * v
            out.append(acc)
        return out

    def map(self, fn):
        return PolyMatrix(self.ring, [[fn(c) for c in r] for r in self.rows])

    def subs(self, mapping):
        return self.map(lambda c: c.subs(mapping))

    def is_identity(self):
        return all(c.is_one() if i == j else c.is_zero()
                   for i, r in enumerate(self.rows) for j, c in enumerate(r))

    def det(self):
        return mat_det(self)

    def inverse_sl(self):
        return mat_inverse_sl(self)

    def minor(self, i, j):
        return PolyMatrix(self.ring, [[c for jj, c in enumerate(r) if jj != j]
                                      for ii, r in enumerate(self.rows) if ii != i]) \
            if self.n > 1 else None

    def block(self, k):
        """Leading k x k block."""
        return PolyMatrix(self.ring, [r[:k] for r in self.rows[:k]])

    # -- JSON
    def to_json(self):
        return {
            "n": self.n,
            "vars": list(self.ring.names),
            "field": self.ring.field.spec(),
            "entries": [[str(c) for c in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data, field=None):
        try:
            n = int(data["n"])
            names = list(data.get("vars", []))
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"matrix JSON needs 'n', 'vars', 'entries': {exc}") from None
        if field is None:
            field = Field.from_spec(data.get("field", "q"))
        ring = Ring(names, field)
        if len(entries) != n or any(len(r) != n for r in entries):
            raise FormatError(f"'entries' must be a {n}x{n} array")
        rows = []
        for i, r in enumerate(entries):
            row = []
            for j, text in enumerate(r):
                try:
                    row.append(ring.parse(str(text)))
                except ValueError as exc:
                    raise FormatError(f"entry ({i + 1},{j + 1}): {exc}") from None
            rows.append(row)
        return cls(ring, rows)


def mat_mul(a, b):
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    n = a.n
    ring = a.ring
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero
            for k in range(n):
                x, y = a.rows[i][k], b.rows[k][j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return PolyMatrix(ring, out)


def _cofactor_det(rows, ring):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ring.zero
    for j in range(n):
        c = rows[0][j]
        if c.is_zero():
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = c * _cofactor_det(sub, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def mat_det(a):
    """Cofactor expansion up to 4 x 4, fraction-free elimination beyond."""
    rows = [list(r) for r in a.rows]
    if a.n <= 4:
        return _cofactor_det(rows, a.ring)
    return bareiss_det(rows, a.ring)


def adjugate(a):
    n = a.n
    ring = a.ring
    if n == 1:
        return PolyMatrix(ring, [[ring.one]])
    rows = [list(r) for r in a.rows]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            m = _cofactor_det(sub, ring) if n - 1 <= 4 else bareiss_det(sub, ring)
            adj[j][i] = m if (i + j) % 2 == 0 else -m
    return PolyMatrix(ring, adj)


def mat_inverse_sl(a):
    """Inverse of a determinant-one matrix, via the adjugate."""
    d = mat_det(a)
    if not d.is_one():
        raise NotUnimodular(f"determinant is {d}, not 1")
    return adjugate(a)


@dataclass(frozen=True)
class ElemFactor:
    """Elementary matrix ``E_ij(a) = I + a * e_ij`` (1-based, i != j)."""

    i: int
    j: int
    a: Poly

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"elementary factor needs i != j, got ({self.i}, {self.j})")
        if self.i < 1 or self.j < 1:
            raise ValueError("elementary factor indices are 1-based")

    def inverse(self):
        return ElemFactor(self.i, self.j, -self.a)

    def map(self, fn):
        return ElemFactor(self.i, self.j, fn(self.a))

    def shifted(self, offset):
        return ElemFactor(self.i + offset, self.j + offset, self.a)

    def matrix(self, n):
        return elementary_matrix(self.a.ring, n, self.i, self.j, self.a)

    def __repr__(self):
        return f"E{self.i}{self.j}({self.a})"


def elementary_matrix(ring, n, i, j, a):
    rows = [[ring.one if r == c else ring.zero for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = ring(a)
    return PolyMatrix(ring, rows)


class Factorization:
    """Ordered product of elementary factors, read left to right."""

    __slots__ = ("n", "ring", "factors")

    def __init__(self, n, factors=(), ring=None):
        factors = tuple(factors)
        if ring is None:
            if not factors:
                raise ValueError("an empty factorization needs an explicit ring")
            ring = factors[0].a.ring
        for f in factors:
            if f.i > n or f.j > n:
                raise ValueError(f"factor {f} out of range for n={n}")
            if f.a.ring is not ring:
                raise TypeError("factors live in different rings")
        self.n = n
        self.ring = ring
        self.factors = factors

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, k):
        return self.factors[k]

    def __add__(self, other):
        if not isinstance(other, Factorization):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return Factorization(self.n, self.factors + other.factors, self.ring)

    def __eq__(self, other):
        return (isinstance(other, Factorization) and self.n == other.n
                and self.factors == other.factors)

    def __hash__(self):
        return hash((self.n, self.factors))

    def __repr__(self):
        return f"Factorization(n={self.n}, [{', '.join(map(repr, self.factors))}])"

    @classmethod
    def empty(cls, ring, n):
        return cls(n, (), ring)

    def inverse(self):
        """Factorization of the inverse: reversed order, negated coefficients."""
        return Factorization(self.n, [f.inverse() for f in reversed(self.factors)], self.ring)

    def map(self, fn, ring=None):
        return Factorization(self.n, [f.map(fn) for f in self.factors], ring or self.ring)

    def subs(self, mapping):
        return self.map(lambda a: a.subs(mapping))

    def nonzero(self):
        return Factorization(self.n, [f for f in self.factors if not f.a.is_zero()], self.ring)

    def embedded(self, n, offset=0):
        """Same factors viewed in dimension ``n``, indices shifted by ``offset``."""
        return Factorization(n, [f.shifted(offset) for f in self.factors], self.ring)

    def product(self):
        return product_of(self)

    def apply(self, vector):
        """``product() * vector`` without forming the matrix (right-most factor first)."""
        v = list(vector)
        for f in reversed(self.factors):
            if not f.a.is_zero():
                v[f.i - 1] = v[f.i - 1] + f.a * v[f.j - 1]
        return v

    # -- JSON
    def to_json(self):
        return {
            "format_version": FORMAT_VERSION,
            "n": self.n,
            "vars": list(self.ring.names),
            "field": self.ring.field.spec(),
            "order": "left-to-right",
            "factors": [{"i": f.i, "j": f.j, "a": str(f.a)} for f in self.factors],
        }

    @classmethod
    def from_json(cls, data, ring=None):
        try:
            n = int(data["n"])
            raw = data["factors"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"factorization JSON needs 'n' and 'factors': {exc}") from None
        if ring is None:
            ring = Ring(list(data.get("vars", [])), Field.from_spec(data.get("field", "q")))
        factors = []
        for k, item in enumerate(raw):
            try:
                i, j = int(item["i"]), int(item["j"])
                a = ring.parse(str(item["a"]))
                factors.append(ElemFactor(i, j, a))
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"factor #{k}: {exc}") from None
        try:
            return cls(n, factors, ring)
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)


def product_of(f):
    """Ordered product of a factorization (the identity when empty)."""
    n, ring = f.n, f.ring
    rows = [[ring.one if r == c else ring.zero for c in range(n)] for r in range(n)]
    # right-multiplying by E_ij(a) adds a * (column i) to column j
    for e in f.factors:
        if e.a.is_zero():
            continue
        i, j = e.i - 1, e.j - 1
        for r in range(n):
            x = rows[r][i]
            if not x.is_zero():
                rows[r][j] = rows[r][j] + x * e.a
    return PolyMatrix(ring, rows)


def verify(f, target):
    """Exact check that the product of ``f`` equals ``target``."""
    if f.n != target.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {target.n}")
    if f.ring is not target.ring:
        raise TypeError("factorization and target live in different rings")
    return product_of(f) == target


def embed(a, n):
    """Block diagonal ``diag(A, I)`` of size ``n``."""
    if isinstance(a, Factorization):
        if n < a.n:
            raise ValueError("cannot embed into a smaller dimension")
        return a.embedded(n)
    if n < a.n:
        raise ValueError("cannot embed into a smaller dimension")
    ring = a.ring
    rows = [[(a.rows[i][j] if i < a.n and j < a.n else (ring.one if i == j else ring.zero))
             for j in range(n)] for i in range(n)]
    return PolyMatrix(ring, rows)


def unimodular_certificate_for_column(v, matrix=None, column=None):
    """Certificate ``sum(v_i g_i) = 1`` for a column.

    When ``matrix`` (of determinant 1) and the column index are given, the
    signed minors of that column are used (cofactor expansion); otherwise a
    unit-ideal certificate is computed.
    """
    v = list(v)
    ring = v[0].ring
    for idx, c in enumerate(v):
        if c.is_constant() and not c.is_zero():
            g = [ring.zero] * len(v)
            g[idx] = c.inverse_constant()
            return UnimodCertificate(v, g)
    if matrix is not None:
        j = matrix.n - 1 if column is None else column
        if matrix.column(j) != v:
            raise ValueError("v is not the given column of the matrix")
        rows = [list(r) for r in matrix.rows]
        g = []
        for i in range(matrix.n):
            sub = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            m = _cofactor_det(sub, ring) if len(sub) <= 4 else bareiss_det(sub, ring)
            g.append(m if (i + j) % 2 == 0 else -m)
        cert = UnimodCertificate(v, g)
        if not cert.check():
            raise NotUnimodular("matrix does not have determinant 1")
        return cert
    try:
        return unit_certificate(v)
    except NotUnit as exc:
        raise NotUnimodular(str(exc)) from None


def diag_unit_factors(ring, n, i, j, u):
    """Four elementary factors multiplying to diag with ``u`` at i and ``1/u`` at j.

    diag(u, 1/u) = E_ji(1/u) E_ij(1 - u) E_ji(-1) E_ij(1 - 1/u) on the (i, j) plane.
    """
    u = ring(u)
    inv = u.inverse_constant()
    one = ring.one
    return [
        ElemFactor(j, i, inv),
        ElemFactor(i, j, one - u),
        ElemFactor(j, i, -one),
        ElemFactor(i, j, one - inv),
    ]
