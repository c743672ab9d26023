"""Cohn-type matrices and conjugates of elementary matrices.

A Cohn-type matrix is ``I + a * v * (v_j e_i - v_i e_j)`` for a column ``v``
and ``i < j``.  For ``n >= 3`` it is an explicit product of eight
transvections in the rows ``i, j, t`` followed by ``2 (n - 2)`` factors that
carry the remaining rows.  Everything else in this module reduces to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    ElemFactor,
    Factorization,
    NotUnimodular,
    PolyMatrix,
    adjugate,
    mat_det,
    unimodular_certificate_for_column,
)
from .ring import Poly

__all__ = [
    "CohnTypeSpec",
    "cohn_matrix",
    "factor_cohn_type",
    "factor_I_plus_vw",
    "conjugate_elementary",
    "push_elementary_past_sl2",
    "gl_inverse",
]


@dataclass(frozen=True)
class CohnTypeSpec:
    """Data of ``I + a * v * (v_j e_i - v_i e_j)`` (1-based ``i < j``)."""

    v: tuple
    a: Poly
    i: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        n = len(self.v)
        if not 1 <= self.i < self.j <= n:
            raise ValueError(f"need 1 <= i < j <= n, got i={self.i}, j={self.j}, n={n}")

    @property
    def n(self):
        return len(self.v)

    @property
    def ring(self):
        return self.a.ring


def cohn_matrix(spec):
    """The matrix ``I + a * v * (v_j e_i - v_i e_j)`` itself."""
    ring, n = spec.ring, spec.n
    v, a = spec.v, spec.a
    i, j = spec.i - 1, spec.j - 1
    rows = [[ring.one if r == c else ring.zero for c in range(n)] for r in range(n)]
    for r in range(n):
        if v[r].is_zero():
            continue
        rows[r][i] = rows[r][i] + a * v[r] * v[j]
        rows[r][j] = rows[r][j] - a * v[r] * v[i]
    return PolyMatrix(ring, rows)


def factor_cohn_type(spec):
    """Eight core transvections, then ``E_li(a v_l v_j) E_lj(-a v_l v_i)`` for ``l != i, j``.

    The auxiliary index ``t`` is the smallest index outside ``{i, j}``.
    Zero coefficients are kept so the shape is always ``8 + 2 (n - 2)``.
    """
    n = spec.n
    if n < 3:
        raise ValueError("Cohn-type matrices are only realizable for n >= 3")
    i, j = spec.i, spec.j
    t = next(k for k in range(1, n + 1) if k not in (i, j))
    a = spec.a
    vi, vj = spec.v[i - 1], spec.v[j - 1]
    factors = [
        ElemFactor(i, t, -vi),
        ElemFactor(j, t, -vj),
        ElemFactor(t, i, -a * vj),
        ElemFactor(t, j, a * vi),
        ElemFactor(i, t, vi),
        ElemFactor(j, t, vj),
        ElemFactor(t, i, a * vj),
        ElemFactor(t, j, -a * vi),
    ]
    for l in range(1, n + 1):
        if l in (i, j):
            continue
        vl = spec.v[l - 1]
        factors.append(ElemFactor(l, i, a * vl * vj))
        factors.append(ElemFactor(l, j, -a * vl * vi))
    return Factorization(n, factors, a.ring)


def _single_support(vec):
    nz = [k for k, c in enumerate(vec) if not c.is_zero()]
    return nz[0] if len(nz) == 1 else None


def _as_cohn_pair(v, w):
    """``(a, i, j)`` when ``w = a (v_j e_i - v_i e_j)`` is supported on one pair."""
    nz = [k for k, c in enumerate(w) if not c.is_zero()]
    if len(nz) != 2:
        return None
    i, j = nz
    if v[j].is_zero() or not v[j].divides(w[i]):
        return None
    a = w[i].exquo(v[j])
    if w[j] != -a * v[i]:
        return None
    return a, i + 1, j + 1


def factor_I_plus_vw(v, w, cert=None):
    """Factor ``I + v * w`` for a unimodular column ``v`` and a row ``w`` with ``w . v = 0``.

    ``cert`` may supply cofactors ``g`` with ``g . v = 1``; otherwise they are
    computed.  Rank-one updates supported on one row or one column are
    returned directly as commuting transvections, and a ``w`` that is already
    of Cohn type for one pair needs no certificate.
    """
    v, w = list(v), list(w)
    n = len(v)
    if len(w) != n:
        raise ValueError("v and w have different lengths")
    ring = v[0].ring
    dot = ring.zero
    for x, y in zip(w, v):
        dot = dot + x * y
    if not dot.is_zero():
        raise ValueError(f"w . v = {dot}, expected 0")
    if all(c.is_zero() for c in w):
        return Factorization.empty(ring, n)
    k = _single_support(v)
    if k is not None:
        # I + v_k e_k w with w_k = 0: one row of transvections
        return Factorization(n, [ElemFactor(k + 1, l + 1, v[k] * w[l])
                                 for l in range(n) if l != k and not w[l].is_zero()], ring)
    l = _single_support(w)
    if l is not None:
        return Factorization(n, [ElemFactor(k + 1, l + 1, v[k] * w[l])
                                 for k in range(n) if k != l and not v[k].is_zero()], ring)
    if n < 3:
        raise ValueError("I + v w is only guaranteed realizable for n >= 3")
    pair = _as_cohn_pair(v, w)
    if pair is not None:
        return factor_cohn_type(CohnTypeSpec(v, *pair))
    if cert is None:
        g = list(unimodular_certificate_for_column(v).cofactors)
    else:
        g = list(cert)
        check = ring.zero
        for x, y in zip(g, v):
            check = check + x * y
        if not check.is_one():
            raise NotUnimodular("supplied cofactors do not certify v")
    factors = []
    for i in range(n):
        for j in range(i + 1, n):
            a_ij = w[i] * g[j] - w[j] * g[i]
            if a_ij.is_zero():
                continue
            factors.extend(factor_cohn_type(CohnTypeSpec(v, a_ij, i + 1, j + 1)).factors)
    return Factorization(n, factors, ring)


def gl_inverse(b):
    """Inverse of a matrix whose determinant is a nonzero constant."""
    d = mat_det(b)
    if d.is_zero() or not d.is_constant():
        raise NotUnimodular(f"determinant {d} is not a unit")
    adj = adjugate(b)
    if d.is_one():
        return adj
    inv = d.inverse_constant()
    return adj.map(lambda c: c * inv)


def _conjugate(b, b_inv, e):
    """Factorization of ``B E B^-1`` given both ``B`` and its inverse."""
    i, j = e.i - 1, e.j - 1
    v = b.column(i)
    w = [e.a * c for c in b_inv.row(j)]
    return factor_I_plus_vw(v, w, cert=b_inv.row(i))


def conjugate_elementary(b, e, b_inv=None):
    """Factorization of ``B * E_ij(a) * B^-1`` for ``B`` with unit determinant."""
    if b.n < 3:
        raise ValueError("conjugation needs n >= 3")
    if b_inv is None:
        b_inv = gl_inverse(b)
    if e.a.is_zero():
        return Factorization.empty(b.ring, b.n)
    return _conjugate(b, b_inv, e)


def _check_block(b1):
    for r in range(b1.n):
        for c in range(b1.n):
            if r >= 2 or c >= 2:
                expect = b1.ring.one if r == c else b1.ring.zero
                if b1[r, c] != expect:
                    raise ValueError("matrix is not an embedded 2 x 2 block")


def push_elementary_past_sl2(factors, b1, b1_inv=None):
    """Rewrite ``factors * B1`` as ``B1 * factors'``.

    ``factors'`` is the conjugate ``B1^-1 * factors * B1``, factor by factor.
    """
    _check_block(b1)
    if b1_inv is None:
        b1_inv = gl_inverse(b1)
    out = []
    for e in factors:
        if e.a.is_zero():
            continue
        out.extend(_conjugate(b1_inv, b1, e).factors)
    return b1, Factorization(factors.n, out, b1.ring)
