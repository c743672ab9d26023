"""Independent reference computations for the tests.

Everything here goes through sympy and never calls back into the package's
arithmetic, so agreement is a real cross-check.  Polynomials cross over as
strings.
"""

import random

import sympy


def symbols_for(ring):
    return {name: sympy.Symbol(name) for name in ring.names}


def to_sympy(p):
    """A package polynomial as a sympy expression (integer or rational coefficients)."""
    return sympy.sympify(str(p).replace("^", "**"), locals=symbols_for(p.ring))


def matrix_to_sympy(a):
    return sympy.Matrix([[to_sympy(c) for c in row] for row in a.rows])


def _gens(ring):
    return [sympy.Symbol(n) for n in ring.names] or [sympy.Symbol("_unused")]


def to_sympy_poly(p):
    """The polynomial as a ``sympy.Poly`` over QQ in the ring's variables."""
    return sympy.Poly(to_sympy(p), *_gens(p.ring), domain="QQ")


def product_oracle(fact):
    """Left-to-right product of ``I + a e_ij``, done as column operations on sympy polynomials.

    Right-multiplying by ``E_ij(a)`` adds ``a`` times column ``i`` to column ``j``.
    """
    gens = _gens(fact.ring)
    zero = sympy.Poly(0, *gens, domain="QQ")
    one = sympy.Poly(1, *gens, domain="QQ")
    n = fact.n
    m = [[one if r == c else zero for c in range(n)] for r in range(n)]
    for e in fact:
        a = to_sympy_poly(e.a)
        for r in range(n):
            m[r][e.j - 1] = m[r][e.j - 1] + m[r][e.i - 1] * a
    return sympy.Matrix([[c.as_expr() for c in row] for row in m])


def is_zero_expr(expr, ring):
    """Zero as a polynomial over the ring's field (coefficients read mod p for GF(p))."""
    expr = sympy.expand(expr)
    if expr == 0:
        return True
    p = ring.field.p
    if p is None:
        return False
    poly = sympy.Poly(expr, *_gens(ring))
    return all(sympy.Rational(c).p % p == 0 and sympy.Rational(c).q % p != 0 for c in poly.coeffs())


def same_matrix(expected, a):
    """``expected`` (sympy) equals the package matrix ``a`` entrywise."""
    got = matrix_to_sympy(a)
    if expected.shape != got.shape:
        return False
    return all(is_zero_expr(expected[k] - got[k], a.ring) for k in range(len(got)))


def factorization_reproduces(fact, a):
    """Multiply ``fact`` out with sympy and compare with ``a``."""
    return same_matrix(product_oracle(fact), a)


def det_oracle(a):
    return sympy.expand(matrix_to_sympy(a).det(method="berkowitz"))


def resultant_oracle(f1, f2, var):
    """Determinant of the textbook Sylvester matrix (descending powers, ``f1`` rows
    first) times ``(-1)^(d e)``: the package orders columns by ascending powers,
    which amounts to ``Res(f2, f1)``."""
    x = sympy.Symbol(var)
    a = sympy.Poly(to_sympy(f1), x).all_coeffs()
    b = sympy.Poly(to_sympy(f2), x).all_coeffs()
    d, e = len(a) - 1, len(b) - 1
    size = d + e
    rows = []
    for k in range(e):
        rows.append([0] * k + a + [0] * (size - k - d - 1))
    for k in range(d):
        rows.append([0] * k + b + [0] * (size - k - e - 1))
    det = sympy.Matrix(rows).det(method="berkowitz") if size else sympy.Integer(1)
    return sympy.expand((-1) ** (d * e) * det)


def random_elementary_product(ring, n, count, rng, degree=2, coeff_range=2):
    """A random product of ``count`` elementary matrices and its factor list."""
    from suslin.linalg import ElemFactor, Factorization

    factors = []
    for _ in range(count):
        i, j = rng.sample(range(1, n + 1), 2)
        factors.append(ElemFactor(i, j, ring.random_poly(rng, degree=degree, coeff_range=coeff_range)))
    fact = Factorization(n, factors, ring)
    return fact.product(), fact


def seeded(seed):
    return random.Random(seed)


def cohn_entries(x, y):
    """The 2 x 2 Cohn matrix embedded in 3 x 3 (entries as sympy or package polynomials)."""
    return [[1 + x * y, x**2, 0], [-(y**2), 1 - x * y, 0], [0, 0, 1]]


def shifted_oracle(f, var, shift):
    """``f`` with ``var`` replaced by the sympy expression ``shift``, as a ``sympy.Poly``.

    Horner evaluation on ``sympy.Poly`` objects; much faster than ``subs`` and ``expand``.
    """
    gens = _gens(f.ring)
    v = sympy.Symbol(var)
    shift = sympy.Poly(shift, *gens, domain="QQ")
    acc = sympy.Poly(0, *gens, domain="QQ")
    for c in sympy.Poly(to_sympy(f), v).all_coeffs():
        acc = acc * shift + sympy.Poly(c, *gens, domain="QQ")
    return acc
