"""Top-level factorization of determinant-one matrices.

Matrices in at most one variable go to the Euclidean base case.  Otherwise the
size is reduced one column at a time down to a ``2 x 2`` core sitting in a
``3 x 3`` matrix, which is either finished directly (``"auto"``) or through the
local-global patching for a core whose top-left entry is monic.
"""

from __future__ import annotations

from .basecase import Elimination, factor_univariate
from .colreduce import _quotient, _weight, greedy_column_reduce, shrink_once
from .linalg import ElemFactor, Factorization, NotUnimodular, PolyMatrix, diag_unit_factors, embed, verify
from .quillen import quillen_realize_special
from .ring import Substitution, monicize
from .steinberg import simplify as steinberg_simplify

__all__ = ["realize", "greedy_eliminate", "RealizeError", "COHN_OBSTRUCTION"]

COHN_OBSTRUCTION = (
    "2 x 2 matrices are not supported: SL_2 of a polynomial ring in two or more "
    "variables is not generated by elementary matrices (Cohn's matrix "
    "[[1 + x*y, x^2], [-y^2, 1 - x*y]] is not a product of them)"
)

STRATEGIES = ("auto", "suslin")


class RealizeError(ArithmeticError):
    pass


def _used(a):
    used = set()
    for row in a.rows:
        for c in row:
            used.update(c.variables())
    return [nm for nm in a.ring.names if nm in used]


def realize(a, strategy="auto", simplify=False, seed=0):
    """Elementary factorization of ``a`` (``n >= 3``, determinant 1).

    ``strategy="auto"`` tries cheap eliminations before the constructive
    route; ``"suslin"`` always takes the constructive route.  The result is
    verified exactly before it is returned.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if a.n < 3:
        raise ValueError(COHN_OBSTRUCTION if a.n == 2 else "need n >= 3")
    d = a.det()
    if not d.is_one():
        raise NotUnimodular(f"determinant is {d}, expected 1")
    out = _realize(a, strategy, seed)
    if simplify:
        out = steinberg_simplify(out)
    if not verify(out, a):
        raise RealizeError("factorization does not reproduce the matrix")  # pragma: no cover
    return out


def _matrix_weight(rows):
    return sum(_weight(c) for r in rows for c in r if not c.is_zero())


def _best_move(m):
    """Row or column operation lowering the weight the most, or ``None``."""
    n = len(m)
    base = _matrix_weight(m)
    best = None
    for kind in ("row", "col"):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                src = m[j] if kind == "row" else [r[j] for r in m]
                dst = m[i] if kind == "row" else [r[i] for r in m]
                for k in range(n):
                    if src[k].is_zero() or dst[k].is_zero():
                        continue
                    q = _quotient(dst[k], src[k])
                    if q.is_zero():
                        continue
                    new = [d - q * s_ for d, s_ in zip(dst, src)]
                    gain = sum(_weight(c) for c in dst if not c.is_zero()) - \
                        sum(_weight(c) for c in new if not c.is_zero())
                    if gain > 0 and (best is None or gain > best[0]):
                        best = (gain, kind, i, j, -q)
    return best, base


def _trivial(m, k):
    """Row ``k`` and column ``k`` are both ``e_k``."""
    n = len(m)
    return all((m[k][j].is_one() if j == k else m[k][j].is_zero()) and
               (m[j][k].is_one() if j == k else m[j][k].is_zero()) for j in range(n))


def _unit_pivot(el):
    """Use a constant entry to split off a trivial row and column; ``False`` if none."""
    m, n, one = el.m, el.n, el.ring.one
    for i in range(n):
        if _trivial(m, i):
            continue
        for j in range(n):
            u = m[i][j]
            if u.is_zero() or not u.is_constant():
                continue
            inv = u.inverse_constant()
            for k in range(n):
                if k != i:
                    el.row_op(k, i, -m[k][j] * inv)
            for k in range(n):
                if k != j:
                    el.col_op(j, k, -m[i][k] * inv)
            if i != j:
                # row i is u e_j: put a 1 on the diagonal, then clear again
                el.col_op(j, i, inv)
                for k in range(n):
                    if k != i:
                        el.row_op(k, i, -m[k][i])
                el.col_op(i, j, -m[i][j])
            if not m[i][i].is_one():  # pragma: no cover - det 1 keeps the pivot a unit
                raise ArithmeticError("pivot did not become 1")
            return True
    return False


def greedy_eliminate(a, max_steps=500):
    """Unit pivots and weight-decreasing transvections; returns the :class:`Elimination`."""
    el = Elimination(a)
    for _ in range(max_steps):
        if el.is_identity() or len(_used(el.current())) <= 1:
            break
        if _unit_pivot(el):
            continue
        move, _ = _best_move(el.m)
        if move is None:
            break
        _, kind, i, j, c = move
        if kind == "row":
            el.row_op(i, j, c)  # row i += c * row j
        else:
            el.col_op(j, i, c)  # column i += c * column j
    return el


def _wrap(el, inner):
    """Factorization of the original matrix from that of ``el.current()``."""
    prefix = [f.inverse() for f in el.left]
    suffix = [f.inverse() for f in reversed(el.right)]
    return Factorization(inner.n, prefix + list(inner.factors) + suffix, inner.ring)


def _realize(a, strategy, seed):
    if strategy == "auto":
        el = greedy_eliminate(a)
        if el.left or el.right:
            return _wrap(el, _realize_rest(el.current(), strategy, seed))
    return _realize_rest(a, strategy, seed)


def _realize_rest(a, strategy, seed):
    ring, n = a.ring, a.n
    if a.is_identity():
        return Factorization.empty(ring, n)
    if len(_used(a)) <= 1:
        return factor_univariate(a)
    active = [k for k in range(n) if not _trivial(a.rows, k)]
    if len(active) < 3:
        active = sorted(active + [k for k in range(n) if k not in active][:3 - len(active)])
    if len(active) < n:
        # work on the rows and columns that are not already trivial
        keep = active
        sub = PolyMatrix(ring, [[a[i, j] for j in keep] for i in keep])
        inner = _realize_rest(sub, strategy, seed)
        return Factorization(n, [ElemFactor(keep[f.i - 1] + 1, keep[f.j - 1] + 1, f.a) for f in inner], ring)
    left, right = [], []
    cur = a
    while cur.n > 2:
        prefix, core, suffix = shrink_once(cur, strategy=strategy, seed=seed)
        left.extend(prefix.inverse().embedded(n).factors)
        right[:0] = suffix.inverse().embedded(n).factors
        cur = core
    middle = None
    if strategy == "auto":
        middle = _finish_2x2(cur)
    if middle is None:
        middle = _realize_core(embed(cur, 3), strategy, seed)
    return Factorization(n, left + list(middle.embedded(n).factors) + right, ring)


def _finish_2x2(c):
    """``C`` in ``SL_2`` as a product of transvections, when Euclid-like steps reach it."""
    ops = greedy_column_reduce(c.column(1))
    if ops is None:
        return None
    b = ops.product() * c
    # b has second column e_2 and determinant 1, hence b = E_21(b_21)
    tail = [ElemFactor(2, 1, b[1, 0])] if not b[1, 0].is_zero() else []
    return Factorization(2, list(ops.inverse().factors) + tail, c.ring)


def _pick_monic_entry(core, names):
    """Position and variable of an entry of ``core`` with constant leading coefficient."""
    best = None
    for var in names:
        for i in range(2):
            for j in range(2):
                c = core[i, j]
                if c.is_zero():
                    continue
                if c.is_constant() or c.leading_coeff_in(var).is_constant():
                    key = (c.degree(var), c.total_degree(), i, j, names.index(var))
                    if best is None or key < best[0]:
                        best = (key, i, j, var)
    return None if best is None else best[1:]


def _realize_core(a3, strategy, seed):
    """Factor ``diag(C, 1)`` for a ``2 x 2`` block ``C`` of determinant 1."""
    ring = a3.ring
    names = _used(a3)
    if len(names) <= 1:
        return factor_univariate(a3)
    el = Elimination(a3)
    one = ring.one
    picked = _pick_monic_entry(a3.block(2), names)
    sigma = Substitution.identity(ring)
    if picked is not None:
        i, j, var = picked
        # signed swaps bring the entry to the top-left corner
        if i == 1:
            el.row_op(0, 1, one)
            el.row_op(1, 0, -one)
            el.row_op(0, 1, one)
        if j == 1:
            el.col_op(0, 1, one)
            el.col_op(1, 0, -one)
            el.col_op(0, 1, one)
    else:
        var = names[-1]
        if el.m[0][0].is_zero():
            el.row_op(0, 1, one)
        sigma = monicize([el.m[0][0]], var, variables=[nm for nm in names if nm != var], seed=seed)
    work = PolyMatrix(ring, [[sigma(c) for c in row] for row in el.m])
    head = Factorization(3, [], ring)
    c = work[0, 0].leading_coeff_in(var)
    if not c.is_one():
        # work = diag(c, 1/c, 1) * work'
        head = Factorization(3, diag_unit_factors(ring, 3, 1, 2, c), ring)
        inv = c.inverse_constant()
        rows = [list(r) for r in work.rows]
        rows[0] = [x * inv for x in rows[0]]
        rows[1] = [x * c for x in rows[1]]
        work = PolyMatrix(ring, rows)

    def base_factor(a0):
        if a0.is_identity():
            return Factorization.empty(ring, 3)
        return _realize(a0, strategy, seed)

    # realize() verifies the final answer, so the inner self-check is skipped
    inner = head + quillen_realize_special(work, var, base_factor, check=False)
    if not sigma.is_identity():
        inner = inner.map(sigma.inverse)
    return _wrap(el, inner)
