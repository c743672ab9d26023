import random

import pytest

from suslin.ideals import find_maximal_ideal_containing
from suslin.local import (
    LocalElem,
    NotLocalUnit,
    lemma5_combine,
    lemma5_split,
    local_product,
    murthy_realize,
    special_matrix,
)
from suslin.ring import Ring, bezout_cofactors, resultant

S = Ring(["x", "X"])
x, X = S.gens()
M = find_maximal_ideal_containing([], S, ["x"])


def L(num, den=None):
    return LocalElem(S(num), None if den is None else S(den), M)


def mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), L(0)) for j in range(n)] for i in range(n)]


def elementary(e, n=3):
    m = [[L(1) if r == c else L(0) for c in range(n)] for r in range(n)]
    m[e.i - 1][e.j - 1] = e.a
    return m


def dense_product(*pieces):
    """Multiply factor lists and 3 x 3 blocks given as (a, b, c, d) tuples."""
    out = [[L(1) if r == c else L(0) for c in range(3)] for r in range(3)]
    for piece in pieces:
        if isinstance(piece, tuple):
            a, b, c, d = piece
            m = [[a, b, L(0)], [c, d, L(0)], [L(0), L(0), L(1)]]
            out = mat_mul(out, m)
        else:
            for e in piece:
                out = mat_mul(out, elementary(e))
    return out


def same(rows_a, rows_b):
    return all(p == q for ra, rb in zip(rows_a, rows_b) for p, q in zip(ra, rb))


def test_unit_tests():
    assert L(1).is_unit()
    assert not L(x).is_unit()
    u = L(1 + x, 1 - x)
    assert u.is_unit()
    inv = u.inverse()
    assert inv == L(1 - x, 1 + x)
    assert (u * inv).is_one()
    with pytest.raises(NotLocalUnit):
        L(x).inverse()
    with pytest.raises(NotLocalUnit):
        L(1, x)


def test_fraction_arithmetic_cross_multiplication():
    rng = random.Random(61)
    for _ in range(20):
        a = L(S.random_poly(rng, variables=["x"]) , 1 + x * rng.randint(1, 3))
        b = L(S.random_poly(rng, variables=["x"]), 2 - x)
        s, p = a + b, a * b
        assert s.num * a.den * b.den == (a.num * b.den + b.num * a.den) * s.den
        assert p.num * a.den * b.den == a.num * b.num * p.den


def test_combine_trivial_cases():
    one, zero = L(1), L(0)
    h2, h2p = L(x), L(x + 1)
    g1, g2 = lemma5_combine(one, h2, one, h2p, one, one, zero)
    assert g1 == one and g2 == h2p + h2
    g1, g2 = lemma5_combine(zero, one, zero, one, zero, zero, one)
    assert g1 == zero and g2 == one


def random_in_x(rng, d):
    """Random polynomial of degree at most ``d`` in ``X`` with coefficients in ``Q[x]``."""
    return sum((S.random_poly(rng, degree=1, variables=["x"]) * X**k for k in range(d + 1)), S.zero)


def relation(a, b):
    """``(h1, h2)`` with ``h1 a + h2 b = 1`` over ``R_M[X]``, or ``None``."""
    if a.is_zero() or b.is_zero() or resultant(a, b, "X").is_zero():
        return None
    g1, g2, r = bezout_cofactors(a, b, "X")
    rho = L(r)
    if not rho.is_unit():
        return None
    return L(g1) / rho, L(g2) / rho


def test_combine_random():
    rng = random.Random(62)
    done = 0
    while done < 10:
        b = X**2 + random_in_x(rng, 1)
        a, ap = random_in_x(rng, 2), random_in_x(rng, 2)
        first, second = relation(a, b), relation(ap, b)
        if first is None or second is None:
            continue
        g1, g2 = lemma5_combine(*first, *second, L(a), L(ap), L(b))
        assert (g1 * L(a) * L(ap) + g2 * L(b)).is_one()
        done += 1
    with pytest.raises(ValueError):
        lemma5_combine(L(1), L(1), L(1), L(0), L(1), L(1), L(1))


def check_split(a, ap, b, c, d):
    sp = lemma5_split(a, ap, b, c, d)
    target = dense_product((a * ap, b, c, d))
    got = dense_product(sp.prefix, sp.left, sp.infix, sp.right, sp.suffix)
    assert same(target, got)
    la, lb, lc, ld = sp.left
    ra, rb, rc, rd = sp.right
    assert (la * ld - lb * lc).is_one() and (ra * rd - rb * rc).is_one()
    return sp


def test_split_with_unit_right_factor():
    a, b = L(x + 1), L(x)
    # a d - b c = 1 with d = 1, c = 1
    sp = check_split(a, L(1), b, L(1), L(1))
    assert sp.right[:3] == (L(1), b, L(1))


def test_split_trivial():
    sp = check_split(L(1), L(1), L(0), L(0), L(1))
    assert sp.left == (L(1), L(0), L(0), L(1))


def test_split_random():
    rng = random.Random(63)
    for _ in range(10):
        a, ap, d = (L(S.random_poly(rng, degree=2)) for _ in range(3))
        c = L(1 + x * rng.randint(1, 3))  # a unit of the local ring
        b = (a * ap * d - 1) / c
        check_split(a, ap, b, c, d)
    with pytest.raises(ValueError):
        lemma5_split(L(1), L(1), L(1), L(1), L(1))


def murthy_ok(p, q, r, s):
    res = murthy_realize(p, q, r, s, "X", M)
    got = local_product(res.factors, 3, M)
    assert got == special_matrix(M, p, q, r, s)
    return res


def test_local_realize_base_case():
    res = murthy_ok(S.one, S.zero, x + X, S.one)
    nz = [e for e in res.factors if not e.a.is_zero()]
    assert [(e.i, e.j) for e in nz] == [(2, 1)]


def test_local_realize_case_one():
    u = x + 2 * X
    q = 1 + X * u
    # X s - q r = 1 with r = -1 forces s = -u
    res = murthy_ok(X, q, -S.one, -u)
    assert res.depth <= 1


def completing_column(p, q):
    """``(r, s)`` with ``p s - q r = 1`` from the resultant identity (resultant a local unit)."""
    g1, g2, res = bezout_cofactors(p, q, "X")
    rho = L(res)
    assert rho.is_unit()
    return -L(g2) / rho, L(g1) / rho


def test_local_realize_case_two():
    # q(0) = x is not a unit, p(0) = 1 is; Res(p, q) = p(-x) = 1
    p, q = X**2 + x * X + 1, X + x
    assert not L(q.subs({"X": S.zero})).is_unit()
    r, s = completing_column(p, q)
    res = murthy_ok(L(p), L(q), r, s)
    assert res.depth <= 2


def test_local_realize_random():
    rng = random.Random(64)
    done = 0
    while done < 15:
        d = rng.randint(1, 3)
        p = X**d + random_in_x(rng, d - 1)
        q = random_in_x(rng, 2)
        if relation(p, q) is None:
            continue
        r, s = completing_column(p, q)
        out = murthy_ok(L(p), L(q), r, s)
        assert out.depth <= d
        done += 1


def test_local_realize_rejects():
    with pytest.raises(ValueError):
        murthy_realize(x * X, S.one, -S.one, S.zero, "X", M)
    with pytest.raises(ValueError):
        murthy_realize(X, S.one, S.one, S.one, "X", M)
