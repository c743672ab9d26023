"""Peephole simplification of factorizations with the Steinberg relations.

The relations, with ``[X, Y] = X Y X^-1 Y^-1``:

1. ``E_ij(0) = I``
2. ``E_ij(a) E_ij(b) = E_ij(a + b)``
3. ``[E_ij(a), E_jl(b)] = E_il(ab)`` for ``i != l``
4. ``[E_ij(a), E_li(b)] = E_lj(-ab)`` for ``j != l``
5. ``[E_ij(a), E_lp(b)] = I`` for ``i != p``, ``j != l``

Every rewrite shortens the word, so the product is preserved and the
length never grows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .linalg import ElemFactor, Factorization, product_of
from .ring import Ring

__all__ = ["simplify", "commute", "check_relations", "RelationReport"]


def commute(e, f):
    """True when ``E_ij`` and ``E_lp`` commute for all coefficients (relation 5 or same pair)."""
    return e.j != f.i and e.i != f.j


def _merge_pass(fs):
    """Relation 2, possibly after commuting the partner past relation-5 neighbours."""
    changed = False
    p = 0
    while p < len(fs):
        e = fs[p]
        q = p + 1
        while q < len(fs):
            f = fs[q]
            if (f.i, f.j) == (e.i, e.j):
                e = ElemFactor(e.i, e.j, e.a + f.a)
                fs[p] = e
                del fs[q]
                changed = True
                continue
            if not commute(e, f):
                break
            q += 1
        if e.a.is_zero():
            del fs[p]
            changed = True
            continue
        p += 1
    return changed


def _commutator_pass(fs):
    """Collapse ``X Y X^-1 Y^-1`` windows through relations 3 and 4."""
    changed = False
    p = 0
    while p + 3 < len(fs):
        x, y, xi, yi = fs[p:p + 4]
        if ((xi.i, xi.j) == (x.i, x.j) and (yi.i, yi.j) == (y.i, y.j)
                and (xi.a + x.a).is_zero() and (yi.a + y.a).is_zero()):
            repl = None
            if x.j == y.i and x.i != y.j:
                repl = [ElemFactor(x.i, y.j, x.a * y.a)]
            elif y.j == x.i and x.j != y.i:
                repl = [ElemFactor(y.i, x.j, -x.a * y.a)]
            elif commute(x, y):
                repl = []
            if repl is not None:
                fs[p:p + 4] = [r for r in repl if not r.a.is_zero()]
                changed = True
                p = max(p - 3, 0)
                continue
        p += 1
    return changed


def simplify(f, max_passes=None):
    """Shorter factorization with the same product."""
    fs = [e for e in f.factors if not e.a.is_zero()]
    cap = max_passes if max_passes is not None else 10 * max(len(f), 1)
    for _ in range(cap):
        changed = _merge_pass(fs)
        changed = _commutator_pass(fs) or changed
        if not changed:
            break
    return Factorization(f.n, fs, f.ring)


@dataclass
class RelationReport:
    """Outcome of :func:`check_relations`: passes and failures per relation."""

    passed: dict = field(default_factory=lambda: {k: 0 for k in range(1, 6)})
    failed: dict = field(default_factory=lambda: {k: 0 for k in range(1, 6)})

    @property
    def ok(self):
        return all(v == 0 for v in self.failed.values()) and all(v > 0 for v in self.passed.values())

    def __str__(self):
        return ", ".join(f"relation {k}: {self.passed[k]} ok / {self.failed[k]} failed"
                         for k in range(1, 6))


def check_relations(trials=50, seed=0, ring=None, sizes=(3, 4)):
    """Verify the five relations by exact multiplication on random data."""
    ring = ring or Ring(["x", "y"])
    rng = random.Random(seed)
    report = RelationReport()

    def rand():
        return ring.random_poly(rng, degree=2, coeff_range=3)

    def mat(n, factors):
        return product_of(Factorization(n, factors, ring))

    for _ in range(trials):
        n = rng.choice(sizes)
        a, b = rand(), rand()
        i, j, l = rng.sample(range(1, n + 1), 3)
        checks = {
            1: mat(n, [ElemFactor(i, j, ring.zero)]) == mat(n, []),
            2: mat(n, [ElemFactor(i, j, a), ElemFactor(i, j, b)]) == mat(n, [ElemFactor(i, j, a + b)]),
            3: mat(n, [ElemFactor(i, j, a), ElemFactor(j, l, b), ElemFactor(i, j, -a),
                       ElemFactor(j, l, -b)]) == mat(n, [ElemFactor(i, l, a * b)]),
            4: mat(n, [ElemFactor(i, j, a), ElemFactor(l, i, b), ElemFactor(i, j, -a),
                       ElemFactor(l, i, -b)]) == mat(n, [ElemFactor(l, j, -a * b)]),
        }
        # relation 5: any (l, p) with i != p and j != l, (l, p) != (i, j) allowed
        pairs = [(s, t) for s in range(1, n + 1) for t in range(1, n + 1)
                 if s != t and t != i and s != j]
        s, t = rng.choice(pairs)
        checks[5] = mat(n, [ElemFactor(i, j, a), ElemFactor(s, t, b), ElemFactor(i, j, -a),
                            ElemFactor(s, t, -b)]) == mat(n, [])
        for k, ok in checks.items():
            if ok:
                report.passed[k] += 1
            else:
                report.failed[k] += 1
    return report
