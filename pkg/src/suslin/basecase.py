"""Base cases: matrices over the coefficient field and over k[x].

Both reduce the matrix to the identity with row and column transvections
and read the factorization off the recorded operations.
"""

from __future__ import annotations

from .linalg import ElemFactor, Factorization, NotUnimodular, PolyMatrix, diag_unit_factors

__all__ = ["Elimination", "factor_over_field", "factor_univariate", "constant_divide"]


class Elimination:
    """Mutable working copy of a matrix with an operation log.

    ``row_op(i, j, c)`` left-multiplies by ``E_ij(c)`` and ``col_op(i, j, c)``
    right-multiplies by ``E_ij(c)`` (indices 0-based here).  Once the working
    matrix is the identity, :meth:`factorization` returns factors of the
    original matrix.
    """

    def __init__(self, a):
        self.ring = a.ring
        self.n = a.n
        self.m = [list(r) for r in a.rows]
        self.left = []
        self.right = []

    def row_op(self, i, j, c):
        if c.is_zero():
            return
        ri, rj = self.m[i], self.m[j]
        for k in range(self.n):
            if not rj[k].is_zero():
                ri[k] = ri[k] + c * rj[k]
        self.left.append(ElemFactor(i + 1, j + 1, c))

    def col_op(self, i, j, c):
        if c.is_zero():
            return
        for row in self.m:
            if not row[i].is_zero():
                row[j] = row[j] + row[i] * c
        self.right.append(ElemFactor(i + 1, j + 1, c))

    def left_product(self, factors):
        """Left-multiply by the product of ``factors``."""
        for f in reversed(factors):
            self.row_op(f.i - 1, f.j - 1, f.a)

    def is_identity(self):
        return all(c.is_one() if i == j else c.is_zero()
                   for i, r in enumerate(self.m) for j, c in enumerate(r))

    def current(self):
        return PolyMatrix(self.ring, self.m)

    def factorization(self):
        # L_t ... L_1 A R_1 ... R_s = I
        if not self.is_identity():
            raise RuntimeError("elimination did not reach the identity")
        factors = [f.inverse() for f in self.left]
        factors += [f.inverse() for f in reversed(self.right)]
        return Factorization(self.n, factors, self.ring)

    # -- shared steps

    def make_pivot_one(self, k, rows):
        """Turn a nonzero constant at (k, k) into 1 using another row of ``rows``."""
        c = self.m[k][k]
        if c.is_one():
            return
        other = next(i for i in rows if i != k)
        # row_other gets a 1 in column k, then row_k picks up 1 - c of it
        self.row_op(other, k, (self.ring.one - self.m[other][k]) * c.inverse_constant())
        self.row_op(k, other, self.ring.one - c)

    def clear_cross(self, k, rows, cols):
        """With a 1 at (k, k), clear the rest of column k and row k."""
        for i in rows:
            if i != k:
                self.row_op(i, k, -self.m[i][k])
        for j in cols:
            if j != k:
                self.col_op(k, j, -self.m[k][j])

    def clear_diagonal(self):
        """Turn a diagonal matrix of determinant 1 into the identity."""
        n = self.n
        for k in range(n - 1):
            d = self.m[k][k]
            if d.is_one():
                continue
            # left-multiply by diag(1/d at k, d at k + 1)
            self.left_product(diag_unit_factors(self.ring, n, k + 1, k + 2, d.inverse_constant()))


def _check_det(a):
    d = a.det()
    if not d.is_one():
        raise NotUnimodular(f"determinant is {d}, not 1")


def factor_over_field(a):
    """Gaussian elimination with transvections only, for constant entries."""
    if a.n < 2:
        raise ValueError("need n >= 2")
    for r in a.rows:
        for c in r:
            if not c.is_constant():
                raise ValueError(f"entry {c} is not constant")
    _check_det(a)
    el = Elimination(a)
    n = a.n
    for k in range(n):
        if not el.m[k][k].is_one():
            # borrow from a lower row so that the pivot becomes 1
            below = [i for i in range(k + 1, n) if not el.m[i][k].is_zero()]
            if below:
                i = below[0]
                el.row_op(k, i, (el.ring.one - el.m[k][k]) * el.m[i][k].inverse_constant())
        piv_inv = el.m[k][k].inverse_constant()
        for i in range(k + 1, n):
            el.row_op(i, k, -el.m[i][k] * piv_inv)
        for j in range(k + 1, n):
            el.col_op(k, j, -el.m[k][j] * piv_inv)
    el.clear_diagonal()
    return el.factorization()


def constant_divide(f, g, var):
    """Division by ``g`` whose leading coefficient in ``var`` is a nonzero constant."""
    ring = f.ring
    x = ring.gen(var)
    dg = g.degree(var)
    inv = g.leading_coeff_in(var).inverse_constant()
    q, r = ring.zero, f
    while not r.is_zero() and r.degree(var) >= dg:
        t = r.leading_coeff_in(var) * inv * x ** (r.degree(var) - dg)
        q = q + t
        r = r - t * g
    return q, r


def factor_univariate(a, var=None):
    """Euclidean elimination over ``k[var]``; entries may involve only ``var``."""
    if a.n < 2:
        raise ValueError("need n >= 2")
    used = set()
    for r in a.rows:
        for c in r:
            used.update(c.variables())
    if not used:
        return factor_over_field(a)
    if var is None:
        if len(used) > 1:
            raise ValueError(f"entries involve several variables {sorted(used)}")
        (var,) = used
    elif used - {var}:
        raise ValueError(f"entries involve variables other than {var}")
    _check_det(a)
    el = Elimination(a)
    n = a.n
    for k in range(n):
        # Euclid on column k, rows k..n-1
        while True:
            live = [i for i in range(k, n) if not el.m[i][k].is_zero()]
            if len(live) == 1:
                break
            p = min(live, key=lambda i: (el.m[i][k].degree(var), i))
            for i in live:
                if i != p:
                    q, _ = constant_divide(el.m[i][k], el.m[p][k], var)
                    el.row_op(i, p, -q)
        (p,) = live
        if p != k:
            el.row_op(k, p, el.m[p][k].inverse_constant())
            el.row_op(p, k, -el.m[p][k])
        piv = el.m[k][k]
        if not piv.is_constant():  # pragma: no cover - det 1 forces a unit
            raise ArithmeticError(f"pivot {piv} is not a unit")
        inv = piv.inverse_constant()
        for j in range(k + 1, n):
            el.col_op(k, j, -el.m[k][j] * inv)
    el.clear_diagonal()
    return el.factorization()
