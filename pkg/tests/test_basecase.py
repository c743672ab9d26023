import random

import pytest

from oracles import factorization_reproduces, random_elementary_product
from suslin.basecase import factor_over_field, factor_univariate
from suslin.linalg import ElemFactor, Factorization, NotUnimodular, PolyMatrix, verify
from suslin.ring import GF, Ring

K = Ring(["x"])
x = K.gen("x")


def test_identity_gives_empty():
    assert len(factor_over_field(PolyMatrix.identity(K, 3))) == 0


def test_rotation_three_factors():
    a = PolyMatrix(K, [[0, 1], [-1, 0]])
    f = factor_over_field(a)
    assert verify(f, a) and factorization_reproduces(f, a)
    assert [(e.i, e.j) for e in f] == [(1, 2), (2, 1), (1, 2)]
    assert [e.a for e in f] == [K.one, -K.one, K.one]


def test_diagonal_unit():
    a = PolyMatrix(K, [[2, 0], [0, K.const(1) / 2]])
    f = factor_over_field(a)
    assert len(f) == 4 and verify(f, a) and factorization_reproduces(f, a)


def test_random_constant_matrices():
    rng = random.Random(31)
    for field in (None, GF(101)):
        ring = Ring(["x"], field) if field else K
        for _ in range(20):
            a, _ = random_elementary_product(ring, rng.choice([2, 3, 4]), 8, rng, degree=0, coeff_range=5)
            f = factor_over_field(a)
            assert verify(f, a)


def test_field_rejects_bad_input():
    with pytest.raises(NotUnimodular):
        factor_over_field(PolyMatrix(K, [[2, 0], [0, 1]]))
    with pytest.raises(ValueError):
        factor_over_field(PolyMatrix(K, [[1, x], [0, 1]]))


def test_univariate_single_factor():
    a = Factorization(3, [ElemFactor(1, 3, x**5)], K).product()
    f = factor_univariate(a)
    assert verify(f, a)
    assert [(e.i, e.j, e.a) for e in f] == [(1, 3, x**5)]


def test_univariate_random_products():
    rng = random.Random(32)
    lengths = []
    for _ in range(40):
        n = rng.choice([2, 3, 4])
        a, _ = random_elementary_product(K, n, rng.randint(1, 10), rng, degree=2)
        f = factor_univariate(a)
        assert verify(f, a)
        lengths.append(len(f))
    assert factorization_reproduces(f, a)


def test_univariate_over_gf():
    S = Ring(["t"], GF(7))
    rng = random.Random(33)
    for _ in range(20):
        a, _ = random_elementary_product(S, 3, 8, rng, degree=2, coeff_range=6)
        assert verify(factor_univariate(a), a)


def test_univariate_constant_input_delegates():
    a = PolyMatrix(K, [[0, 1], [-1, 0]])
    assert factor_univariate(a) == factor_over_field(a)


def test_univariate_rejects_det():
    with pytest.raises(NotUnimodular):
        factor_univariate(PolyMatrix(K, [[x, 0], [0, 1]]))
