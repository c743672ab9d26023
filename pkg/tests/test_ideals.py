import random
from itertools import combinations

import pytest
import sympy

from oracles import to_sympy
from suslin.ideals import (
    MaximalIdealRep,
    NotUnit,
    UnimodCertificate,
    UnsupportedZeroSearch,
    find_maximal_ideal_containing,
    groebner_with_cofactors,
    ideal_contains,
    lift,
    normal_form,
    reduce_with_cofactors,
    unit_certificate,
    univar_gcd_in_residue,
)
from suslin.ring import GF, Ring

R = Ring(["x", "y"])
x, y = R.gens()
Rx = Ring(["x", "X"])
xx, X = Rx.gens()


def combination(row, gens):
    total = gens[0].ring.zero
    for c, g in zip(row, gens):
        total = total + c * g
    return total


def s_poly(f, g):
    (ef, cf), (eg, cg) = f.leading_term(), g.leading_term()
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    ring = f.ring
    mf = ring.from_terms({tuple(a - b for a, b in zip(lcm, ef)): 1})
    mg = ring.from_terms({tuple(a - b for a, b in zip(lcm, eg)): 1})
    return mf * f * cg - mg * g * cf


def test_single_generator():
    basis, expr = groebner_with_cofactors([x])
    assert basis == [x] and expr == [[R.one]]


def test_x_and_one_minus_x():
    basis, expr = groebner_with_cofactors([x, 1 - x])
    assert basis == [R.one]
    assert expr[0] == [R.one, R.one]


def test_monomial_ideal_expressions_multiply_back():
    gens = [x**2, x * y, y**2]
    basis, expr = groebner_with_cofactors(gens)
    assert sorted(map(str, basis)) == sorted(map(str, gens))
    for b, row in zip(basis, expr):
        assert combination(row, gens) == b


def test_buchberger_criterion_random():
    rng = random.Random(11)
    for _ in range(8):
        gens = [R.random_poly(rng, degree=2) for _ in range(3)]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        basis, expr = groebner_with_cofactors(gens)
        for b, row in zip(basis, expr):
            assert combination(row, gens) == b
        for f, g in combinations(basis, 2):
            assert normal_form(s_poly(f, g), basis).is_zero()


def test_groebner_matches_sympy():
    rng = random.Random(12)
    syms = sympy.symbols("x y")
    for _ in range(6):
        gens = [g for g in (R.random_poly(rng, degree=2) for _ in range(3)) if not g.is_zero()]
        ours = groebner_with_cofactors(gens)[0]
        ref = sympy.groebner([to_sympy(g) for g in gens], *syms, order="grevlex")
        ref_monic = sorted((sympy.expand(p / sympy.Poly(p, *syms).LC(order="grevlex")) for p in ref.exprs), key=str)
        assert sorted((sympy.expand(to_sympy(b)) for b in ours), key=str) == ref_monic


def test_unit_certificates():
    cert = unit_certificate([x, 1 - x])
    assert cert.cofactors == (R.one, R.one)
    with pytest.raises(NotUnit):
        unit_certificate([x, y])
    cert = unit_certificate([x**2, 1 - x])
    assert cert.check()
    assert x**2 * cert.cofactors[0] + (1 - x) * cert.cofactors[1] == R.one


def test_reduce_with_cofactors_identity():
    rng = random.Random(13)
    for _ in range(10):
        gens = [g for g in (R.random_poly(rng, degree=2) for _ in range(2)) if not g.is_zero()]
        f = R.random_poly(rng, degree=3)
        rem, cof = reduce_with_cofactors(f, gens)
        assert rem + combination(cof, gens) == f


def test_ideal_contains():
    assert ideal_contains([x, y], x * y + y**2)
    assert not ideal_contains([x, y], x + 1)


def test_maximal_ideal_for_empty_list_is_origin():
    m = find_maximal_ideal_containing([], Rx, ["x"])
    assert isinstance(m, MaximalIdealRep)
    assert m.point == {"x": Rx.zero}
    assert m.contains(xx) and not m.contains(xx + 1)


def test_maximal_ideal_rational_zero():
    m = find_maximal_ideal_containing([xx - 1], Rx, ["x"])
    assert m.contains(xx - 1) and m.dimension == 1


def test_maximal_ideal_quadratic():
    m = find_maximal_ideal_containing([xx**2 - 2], Rx, ["x"])
    assert m.dimension == 2
    assert m.generators == (xx**2 - 2,)


def test_maximal_ideal_gf_factorization():
    S = Ring(["x"], GF(7))
    t = S.gen("x")
    # x^2 + 1 is irreducible mod 7 (7 = 3 mod 4)
    m = find_maximal_ideal_containing([(t**2 + 1) * (t**2 + 1)], S, ["x"])
    assert m.dimension == 2 and m.contains(t**2 + 1)


def test_maximal_ideal_unit_gives_certificate():
    out = find_maximal_ideal_containing([xx, 1 - xx], Rx, ["x"])
    assert isinstance(out, UnimodCertificate) and out.check()


def test_maximal_ideal_two_variables():
    S = Ring(["x", "y", "z"])
    sx, sy, _ = S.gens()
    m = find_maximal_ideal_containing([sx - 1, sy**2 - 4], S, ["x", "y"])
    assert m.contains(sx - 1) and m.contains(sy**2 - 4)
    with pytest.raises(UnsupportedZeroSearch):
        find_maximal_ideal_containing([1 + sx**2 + sy**2], S, ["x", "y"])


def test_residue_arithmetic():
    m = find_maximal_ideal_containing([xx**2 - 2], Rx, ["x"])
    k = m.residue_field
    a = k(xx)
    assert a * a == k(2)
    inv = a.inverse()
    assert inv.rep == xx / 2
    assert (a * inv).rep.is_one()
    with pytest.raises(ZeroDivisionError):
        k.zero.inverse()


def test_residue_field_of_origin_is_constants():
    m = find_maximal_ideal_containing([], Rx, ["x"])
    k = m.residue_field
    rng = random.Random(14)
    for _ in range(10):
        assert k(Rx.random_poly(rng, degree=3, variables=["x"])).rep.is_constant()


def test_lift():
    m0 = find_maximal_ideal_containing([], Rx, ["x"])
    assert lift(m0.residue_field(Rx.const(3))) == Rx.const(3)
    m = find_maximal_ideal_containing([xx**2 - 2], Rx, ["x"])
    k = m.residue_field
    assert lift(k(xx)) == xx
    rng = random.Random(15)
    for _ in range(50):
        a = k(Rx.random_poly(rng, degree=4, variables=["x"]))
        assert k(lift(a)) == a and m.reduce(lift(a)) == lift(a)


def test_residue_inverse_random():
    m = find_maximal_ideal_containing([xx**3 - xx - 1], Rx, ["x"])
    k = m.residue_field
    rng = random.Random(16)
    for _ in range(20):
        a = k(Rx.random_poly(rng, degree=4, variables=["x"]))
        if a.is_zero():
            continue
        assert (a * a.inverse()).rep.is_one()


def gcd_oracle(polys):
    sx = sympy.Symbol("X")
    g = sympy.Integer(0)
    for p in polys:
        g = sympy.gcd(g, to_sympy(p))
    return sympy.Poly(g, sx).monic().as_expr() if g != 0 else g


@pytest.mark.parametrize("polys", [
    [X**2, X],
    [X**2 - 1, X - 1],
    [Rx.const(5)],
    [X**3 - X, X**2 + 2 * X + 1, X + 1],
])
def test_univar_gcd_over_rationals(polys):
    m = find_maximal_ideal_containing([], Rx, ["x"])
    res = univar_gcd_in_residue(polys, m, "X")
    assert sympy.expand(to_sympy(res.generator) - gcd_oracle(polys)) == 0
    vals = list(polys)
    for tgt, src, c in res.ops:
        vals[tgt] = vals[tgt] + c * vals[src]
    assert vals[0] == res.pivot
    assert all(v.is_zero() for v in vals[1:])


def test_univar_gcd_all_zero_rejected():
    m = find_maximal_ideal_containing([], Rx, ["x"])
    with pytest.raises(ValueError):
        univar_gcd_in_residue([xx * X], m, "X")


def test_univar_gcd_over_extension():
    m = find_maximal_ideal_containing([xx**2 - 2], Rx, ["x"])
    res = univar_gcd_in_residue([X**2 - 2, X - xx], m, "X")
    assert res.generator == X - xx
