"""Reducing unimodular columns to the last unit vector.

The constructive route follows the induction on the number of variables:
make ``v_1`` monic in the last variable ``X``, transport ``v(X)`` to ``v(0)``
with an ``SL_2`` block times elementary factors, and recurse on ``v(0)``.
The block is never factored; it is moved past the recursive factors by
conjugation and then disappears because it fixes ``e_n``.

A cheaper greedy reduction (normal forms against the other entries, unit
certificates for all-but-one entry) is tried first unless the constructive
route is requested.
"""

from __future__ import annotations

from .basecase import constant_divide
from .cohn import gl_inverse, push_elementary_past_sl2
from .ideals import (
    NotUnit,
    UnimodCertificate,
    find_maximal_ideal_containing,
    reduce_with_cofactors,
    unit_certificate,
    univar_gcd_in_residue,
)
from .linalg import (
    ElemFactor,
    Factorization,
    NotUnimodular,
    PolyMatrix,
    diag_unit_factors,
    embed,
    unimodular_certificate_for_column,
)
from .ring import Substitution, bezout_cofactors, divided_shift, monicize

__all__ = [
    "lemma4_sl2",
    "theorem3_reduce",
    "elementary_column_reduce",
    "greedy_column_reduce",
    "gl2_completion",
    "shrink_once",
    "ChainStep",
]


def lemma4_sl2(f1, f2, b, d, var):
    """``B`` in ``SL_2`` with ``B (f1(b), f2(b)) = (f1(b + r d), f2(b + r d))``.

    ``r`` is the resultant of ``f1`` and ``f2`` in ``var``; ``b`` and ``d`` are
    arbitrary polynomials substituted for ``var``.
    """
    ring = f1.ring
    g1, g2, r = bezout_cofactors(f1, f2, var)
    s1 = divided_shift(f1, var, b, r, d)
    s2 = divided_shift(f2, var, b, r, d)
    t1 = divided_shift(g1, var, b, r, d)
    t2 = divided_shift(g2, var, b, r, d)
    at_b = {var: b}
    f1b, f2b, g1b, g2b = (p.subs(at_b) for p in (f1, f2, g1, g2))
    one = ring.one
    return PolyMatrix(ring, [
        [one + s1 * g1b + t2 * f2b, s1 * g2b - t2 * f1b],
        [s2 * g1b - t1 * f2b, one + s2 * g2b + t1 * f1b],
    ])


def gl2_completion(v, cert=None):
    """``U = [[v2, -v1], [g1, g2]]`` with ``U v = e_2`` for ``v1 g1 + v2 g2 = 1``."""
    v1, v2 = v
    if cert is None:
        try:
            cert = unit_certificate([v1, v2])
        except NotUnit as exc:
            raise NotUnimodular(str(exc)) from None
    g1, g2 = cert.cofactors if isinstance(cert, UnimodCertificate) else cert
    if not (v1 * g1 + v2 * g2).is_one():
        raise NotUnimodular("cofactors do not certify the column")
    return PolyMatrix(v1.ring, [[v2, -v1], [g1, g2]])


# ---------------------------------------------------------------------------
# operation log shared by the reductions


class _Ops:
    """Left row operations on a column; ``factorization()`` is their product."""

    def __init__(self, v):
        self.v = list(v)
        self.ring = self.v[0].ring
        self.n = len(self.v)
        self.ops = []

    def add(self, i, j, c):
        """``v_i += c * v_j`` (0-based)."""
        if c.is_zero():
            return
        self.v[i] = self.v[i] + c * self.v[j]
        self.ops.append(ElemFactor(i + 1, j + 1, c))

    def left(self, factors):
        """Left-multiply by the product of ``factors``."""
        for f in reversed(list(factors)):
            self.add(f.i - 1, f.j - 1, f.a)

    def factorization(self):
        return Factorization(self.n, list(reversed(self.ops)), self.ring)

    def unit_index(self):
        for k, c in enumerate(self.v):
            if c.is_constant() and not c.is_zero():
                return k
        return None

    def finish_from_unit(self, k):
        """Reach ``e_n`` from a nonzero constant at ``k``."""
        n, one = self.n, self.ring.one
        last = n - 1
        if k == last and not self.v[k].is_one():
            self.add(0, last, (one - self.v[0]) * self.v[last].inverse_constant())
            k = 0
        if k != last:
            self.add(last, k, (one - self.v[last]) * self.v[k].inverse_constant())
        for i in range(n):
            if i != last:
                self.add(i, last, -self.v[i])


def _is_unit_vector(v):
    return all(c.is_one() if k == len(v) - 1 else c.is_zero() for k, c in enumerate(v))


def _size(p):
    return (p.total_degree() if not p.is_zero() else -1, p.nterms())


def _weight(p):
    """Terms weighted by degree; ``1`` has weight 1."""
    return sum(sum(e) + 1 for e, _ in p.terms())


def _quotient(f, g):
    """Quotient of ``f`` by the single polynomial ``g`` (division on leading terms)."""
    _, cof = reduce_with_cofactors(f, [g])
    return cof[0]


def _weight_move(v):
    """``(i, j, c)`` such that ``v_i += c v_j`` lowers the weight the most, or ``None``."""
    best = None
    for i, vi in enumerate(v):
        for j, vj in enumerate(v):
            if i == j or vi.is_zero() or vj.is_zero():
                continue
            q = _quotient(vi, vj)
            if q.is_zero():
                continue
            gain = _weight(vi) - _weight(vi - q * vj)
            if gain > 0 and (best is None or gain > best[0]):
                best = (gain, i, j, -q)
    return None if best is None else best[1:]


# ---------------------------------------------------------------------------
# greedy


def greedy_column_reduce(v, max_rounds=64):
    """Try to reach ``e_n`` by weight-lowering and normal-form reductions; ``None`` when stuck."""
    st = _Ops(v)
    n = st.n
    for _ in range(max_rounds):
        k = st.unit_index()
        if k is not None:
            st.finish_from_unit(k)
            return st.factorization()
        if _certificate_step(st):
            continue
        move = _weight_move(st.v)
        if move is not None:
            st.add(*move)
            continue
        if not _normal_form_step(st):
            return None
    return None


def _certificate_step(st):
    """If the entries other than ``v_i`` generate 1, make ``v_i = 1``."""
    n = st.n
    for i in range(n):
        others = [j for j in range(n) if j != i]
        gens = [st.v[j] for j in others]
        if all(g.is_zero() for g in gens):
            continue
        try:
            cert = unit_certificate(gens)
        except NotUnit:
            continue
        # v_i + (1 - v_i) * sum(c_j v_j) = 1
        mult = st.ring.one - st.v[i]
        for j, c in zip(others, cert.cofactors):
            st.add(i, j, mult * c)
        return True
    return False


def _normal_form_step(st):
    """Replace the largest entry by its normal form modulo the others."""
    n = st.n
    for i in sorted(range(n), key=lambda i: (_size(st.v[i]), i), reverse=True):
        others = [j for j in range(n) if j != i]
        gens = [st.v[j] for j in others]
        if all(g.is_zero() for g in gens):
            continue
        rem, cof = reduce_with_cofactors(st.v[i], gens)
        if rem != st.v[i]:
            for j, c in zip(others, cof):
                st.add(i, j, -c)
            return True
    return False


# ---------------------------------------------------------------------------
# one-step transport v(X) -> v(0)


class ChainStep:
    """Data of one maximal ideal in the chain of :func:`theorem3_reduce`."""

    def __init__(self, ideal, ops, gtilde, f, h, r, q):
        self.ideal = ideal
        self.ops = ops  # E_i as elementary factors, left to right
        self.gtilde = gtilde
        self.f = f
        self.h = h
        self.r = r
        self.q = q  # entries 3..n after E_i


def _residue_ops(v, ideal, var):
    """``E`` with ``E v = (v_1, G, q_3, ..., q_n)``, ``q_l`` in ``M[X]``."""
    tail = v[1:]
    res = univar_gcd_in_residue(tail, ideal, var)
    # slot s of the tail is row s + 2 (1-based)
    ops = [ElemFactor(t + 2, s + 2, c) for t, s, c in res.ops if not c.is_zero()]
    return list(reversed(ops))


def _combination_candidates(n, ring, limit):
    """``E = prod E_{2l}(c_l)`` for small integers, identity first."""
    yield []
    values = [1, -1, 2, -2, 3, -3]
    count = 0
    for size in range(1, n - 1):
        for c in values:
            for first in range(3, n + 1 - size + 1):
                rows = list(range(first, first + size))
                yield [ElemFactor(2, l, ring(c)) for l in rows]
                count += 1
                if count >= limit:
                    return


def _try_resultant(v1, g, var, ideal):
    if g.is_zero() or (v1.degree(var) == 0 and g.degree(var) == 0):
        return None
    try:
        f, h, r = bezout_cofactors(v1, g, var)
    except ValueError:
        return None
    if ideal.contains(r):
        return None
    return f, h, r


def _chain(v, var, base, max_chain, reduction="combination"):
    ring = v[0].ring
    n = len(v)
    rs, steps = [], []
    for _ in range(max_chain):
        found = find_maximal_ideal_containing(rs, ring, base)
        if isinstance(found, UnimodCertificate):
            return steps, found
        picked = None
        if reduction == "combination":
            # any E whose second entry is coprime to v_1 modulo M will do;
            # small integer combinations keep the coefficients small
            for ops in _combination_candidates(n, ring, limit=24):
                w = Factorization(n, ops, ring).apply(v)
                out = _try_resultant(v[0], w[1], var, found)
                if out is not None:
                    picked = ops, w, out
                    break
        if picked is None:
            ops = _residue_ops(v, found, var)
            w = Factorization(n, ops, ring).apply(v)
            for q in w[2:]:
                if not found.contains(q):
                    raise ArithmeticError("residue reduction left an entry outside M[X]")  # pragma: no cover
            out = _try_resultant(v[0], w[1], var, found)
            if out is None:
                raise ArithmeticError(f"resultant lies in {found}")  # pragma: no cover
            picked = ops, w, out
        ops, w, (f, h, r) = picked
        rs.append(r)
        steps.append(ChainStep(found, ops, w[1], f, h, r, w[2:]))
    raise ArithmeticError(f"maximal ideal chain longer than {max_chain}")


def _sl2_inverse(b):
    (a, c), (d, e) = b.rows
    return PolyMatrix(b.ring, [[e, -c], [-d, a]])


def theorem3_reduce(v, var, base=None, max_chain=32, trace=None, reduction="combination"):
    """``(B1, B2)`` with ``B1 * product(B2) * v(X) = v(0)``.

    ``v[0]`` must be monic in ``var``; ``B1`` is an ``n x n`` matrix that is the
    identity outside its top-left ``2 x 2`` block.  ``base`` lists the
    variables of the coefficient ring (default: every other variable that
    occurs in ``v``).  ``reduction="euclid"`` always uses the Euclidean
    reduction over the residue field; the default first tries small integer
    combinations of the entries, which suffice whenever the resultant avoids
    the current maximal ideal.
    """
    v = list(v)
    ring, n = v[0].ring, len(v)
    if n < 3:
        raise ValueError("need n >= 3")
    if not v[0].is_monic_in(var):
        raise ValueError(f"{v[0]} is not monic in {var}")
    zero = ring.zero
    at0 = {var: zero}
    v0 = [c.subs(at0) for c in v]
    ident = PolyMatrix.identity(ring, n)
    if v0 == v:
        return ident, Factorization.empty(ring, n)
    if v[0].degree(var) == 0:
        # v_1 = 1: subtract the X-parts directly
        fs = [ElemFactor(l + 1, 1, v0[l] - v[l]) for l in range(1, n) if v0[l] != v[l]]
        return ident, Factorization(n, fs, ring)
    if base is None:
        used = set()
        for c in v:
            used.update(c.variables())
        base = [nm for nm in ring.names if nm in used and nm != var]
    steps, cert = _chain(v, var, base, max_chain, reduction)
    if trace is not None:
        trace.extend(steps)
    x = ring.gen(var)
    bs = [zero]
    for step, g in zip(steps, cert.cofactors):
        bs.append(bs[-1] + step.r * g * x)

    # v(0) = T_1^-1 ... T_L^-1 v(X), T_i^-1 = P(b_{i-1})^-1 C^-1 Bt^-1 P(b_i)
    items = []
    for k, (step, g) in enumerate(zip(steps, cert.cofactors)):
        prev, cur = bs[k], bs[k + 1]
        p_prev = Factorization(n, step.ops, ring).subs({var: prev})
        p_cur = Factorization(n, step.ops, ring).subs({var: cur})
        fb, hb = step.f.subs({var: prev}), step.h.subs({var: prev})
        c_fs = []
        for l, q in enumerate(step.q, start=3):
            s = divided_shift(q, var, prev, step.r, g * x)
            c_fs.append(ElemFactor(l, 1, s * fb))
            c_fs.append(ElemFactor(l, 2, s * hb))
        bt = lemma4_sl2(v[0], step.gtilde, prev, g * x, var)
        items.append(("E", p_prev.inverse().factors))
        items.append(("E", Factorization(n, c_fs, ring).inverse().factors))
        items.append(("S", _sl2_inverse(bt)))
        items.append(("E", p_cur.factors))

    # move every block to the far left
    acc = PolyMatrix.identity(ring, 2)
    tail = []
    for kind, payload in reversed(items):
        if kind == "S":
            acc = payload * acc
            continue
        fs = Factorization(n, payload, ring)
        if not acc.is_identity():
            big = embed(acc, n)
            _, fs = push_elementary_past_sl2(fs, big, embed(_sl2_inverse(acc), n))
        tail = list(fs.factors) + tail
    b1 = embed(acc, n)
    b2 = Factorization(n, [e for e in tail if not e.a.is_zero()], ring)
    if b1.apply(b2.apply(v)) != v0:
        raise ArithmeticError("transport to v(0) failed")  # pragma: no cover
    return b1, b2


# ---------------------------------------------------------------------------
# full reduction


def _used_vars(vals):
    used = set()
    for c in vals:
        used.update(c.variables())
    return used


def _euclid_univariate(st, var):
    """Euclid on the entries over ``k[var]`` until a unit appears."""
    while st.unit_index() is None:
        live = [i for i, c in enumerate(st.v) if not c.is_zero()]
        if len(live) < 2:
            raise NotUnimodular("column is not unimodular")
        p = min(live, key=lambda i: (st.v[i].degree(var), i))
        for i in live:
            if i != p:
                q, _ = constant_divide(st.v[i], st.v[p], var)
                st.add(i, p, -q)


def _pick_pivot(v, names, seed):
    """Entry and variable for the transport step, with the monicizing map.

    An entry that is already monic up to a constant in some variable is
    preferred (lowest degree first); otherwise the cheapest substitution.
    """
    best = None
    for var in names:
        for k, c in enumerate(v):
            if c.is_zero() or c.degree(var) == 0:
                continue
            lc = c.leading_coeff_in(var)
            if lc.is_constant():
                key = (c.degree(var), c.total_degree(), k, names.index(var))
                if best is None or key < best[0]:
                    best = (key, k, var)
    if best is not None:
        _, k, var = best
        return k, var, Substitution.identity(v[0].ring)
    for var in reversed(names):
        others = [nm for nm in names if nm != var]
        for k, c in enumerate(v):
            if c.is_zero():
                continue
            sigma = monicize([c], var, variables=others, seed=seed)
            image = sigma(c)
            key = (image.degree(var), image.nterms(), k, names.index(var))
            if best is None or key < best[0]:
                best = (key, k, var, sigma)
    _, k, var, sigma = best
    return k, var, sigma


def _constructive(v, seed=0):
    """Reduction of ``v`` to ``e_n`` by induction on the variables."""
    st = _Ops(v)
    ring, n = st.ring, st.n
    if _is_unit_vector(st.v):
        return st.factorization()
    k = st.unit_index()
    if k is not None:
        st.finish_from_unit(k)
        return st.factorization()
    names = [nm for nm in ring.names if nm in _used_vars(st.v)]
    if len(names) <= 1:
        _euclid_univariate(st, names[0])
        st.finish_from_unit(st.unit_index())
        return st.factorization()
    k, var, sigma = _pick_pivot(st.v, names, seed)
    base = [nm for nm in names if nm != var]
    if k != 0:
        # (a, b) -> (b, -a) in the slots 0 and k
        st.add(0, k, ring.one)
        st.add(k, 0, -ring.one)
        st.add(0, k, ring.one)
    pre = st.factorization()
    w = _Ops([sigma(c) for c in st.v])
    c = w.v[0].leading_coeff_in(var)
    if not c.is_one():
        w.left(diag_unit_factors(ring, n, 1, 2, c.inverse_constant()))
    b1, b2 = theorem3_reduce(w.v, var, base)
    at0 = b2.apply(w.v)
    rest = _constructive(b1.apply(at0), seed=seed)
    _, moved = push_elementary_past_sl2(rest, b1, gl_inverse(b1))
    inner = moved + b2 + w.factorization()
    if sigma.is_identity():
        return inner + pre
    return inner.map(sigma.inverse) + pre


def elementary_column_reduce(v, strategy="auto", seed=0):
    """Factorization ``B`` with ``product(B) * v = e_n``.

    ``strategy`` is ``"auto"`` (greedy first, constructive fallback) or
    ``"suslin"`` (constructive only).
    """
    v = list(v)
    if len(v) < 3:
        raise ValueError("the column property needs n >= 3")
    if strategy not in ("auto", "suslin"):
        raise ValueError(f"unknown strategy {strategy!r}")
    # a successful greedy reduction already proves v unimodular; the certificate
    # (a Groebner basis of all entries) can be far more expensive than the reduction
    out = greedy_column_reduce(v) if strategy == "auto" else None
    if out is None:
        unimodular_certificate_for_column(v)
        out = _constructive(v, seed=seed)
    if not _is_unit_vector(out.apply(v)):
        raise ArithmeticError("column reduction failed")  # pragma: no cover
    return out


def shrink_once(a, strategy="auto", seed=0):
    """``(prefix, core, suffix)`` with ``prefix * A * suffix = diag(core, 1)``."""
    n, ring = a.n, a.ring
    prefix = elementary_column_reduce(a.column(n - 1), strategy=strategy, seed=seed)
    b = prefix.product() * a
    suffix = Factorization(n, [ElemFactor(n, j + 1, -b[n - 1, j]) for j in range(n - 1)
                               if not b[n - 1, j].is_zero()], ring)
    core = PolyMatrix(ring, [b.rows[i][:n - 1] for i in range(n - 1)])
    return prefix, core, suffix
