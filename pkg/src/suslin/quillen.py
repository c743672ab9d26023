"""Patching local factorizations into a global one.

For ``A`` over ``R[X]`` and maximal ideals ``M_1, ..., M_L`` with local
factorizations over ``R_{r_i}[X]`` and ``sum r_i^L g_i = 1``, write

    A(X) = A(0) * B_L * ... * B_1,   B_i = A^-1(c_i X) A((c_i + r_i^L g_i) X),

with ``c_i = 1 - sum_{k <= i} r_k^L g_k``.  Each bracket is a product of
conjugates ``C_p E^p(Z f_p) C_p^-1`` at ``Z = r_i^L g_i``; those are expanded
into Cohn-type matrices whose entries become polynomial once ``L`` is large.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohn import CohnTypeSpec, factor_cohn_type
from .ideals import UnimodCertificate, find_maximal_ideal_containing, unit_certificate
from .linalg import ElemFactor, Factorization, PolyMatrix, verify
from .local import LocalElem, LocalMatrix, murthy_realize
from .ring import divided_shift

__all__ = [
    "localize_matrix",
    "common_denominator",
    "LocalData",
    "bracket_exponent",
    "build_bracket_factorization",
    "patch",
    "quillen_realize_special",
    "PatchError",
]


class PatchError(ArithmeticError):
    pass


def localize_matrix(a, ideal):
    """Image of ``a`` in ``R_M[X]`` (every entry over denominator 1)."""
    return LocalMatrix(ideal, [[LocalElem(c, ideal=ideal) for c in r] for r in a.rows])


@dataclass
class LocalData:
    """Local factorization over ``R_r[X]``: factor ``k`` is ``E_{s t}(num_k / r)``."""

    ideal: object
    r: object
    factors: list  # (i, j, numerator)


def common_denominator(factors, ideal):
    """Single denominator ``r`` (least common multiple) and numerators over it."""
    ring = ideal.ring
    r = ring.one
    for e in factors:
        d = e.a.den
        if not d.is_one():
            r = r * d.exquo(r.gcd(d))
    if ideal.contains(r):
        raise PatchError(f"common denominator {r} lies in {ideal}")
    out = []
    for e in factors:
        if e.a.is_zero():
            continue
        out.append((e.i, e.j, e.a.num * r.exquo(e.a.den)))
    return r, LocalData(ideal, r, out)


# ---------------------------------------------------------------------------
# fractions with powers of r as denominators


class _PowerFrac:
    """Arithmetic on pairs ``(N, e)`` meaning ``N / r^e``."""

    def __init__(self, r):
        self.r = r
        self.zero = (r.ring.zero, 0)
        self.one = (r.ring.one, 0)
        self._pow = [r.ring.one]

    def rpow(self, e):
        while len(self._pow) <= e:
            self._pow.append(self._pow[-1] * self.r)
        return self._pow[e]

    def reduce(self, a):
        n, e = a
        if n.is_zero():
            return self.zero
        if self.r.is_constant():
            return (n * self.r.inverse_constant() ** e, 0) if e else a
        while e > 0:
            q = n.exquo(self.r)
            if q is None:
                break
            n, e = q, e - 1
        return (n, e)

    def add(self, a, b):
        if a[0].is_zero():
            return b
        if b[0].is_zero():
            return a
        e = max(a[1], b[1])
        return self.reduce((a[0] * self.rpow(e - a[1]) + b[0] * self.rpow(e - b[1]), e))

    def neg(self, a):
        return (-a[0], a[1])

    def mul(self, a, b):
        if a[0].is_zero() or b[0].is_zero():
            return self.zero
        return self.reduce((a[0] * b[0], a[1] + b[1]))

    def subs(self, a, mapping):
        return self.reduce((a[0].subs(mapping), a[1]))


def _suffix_products(data, n, arith):
    """For each factor index p, the suffix ``S_p = E^{p+1} ... E^h`` and its inverse."""
    h = len(data.factors)
    s = [[arith.one if i == j else arith.zero for j in range(n)] for i in range(n)]
    s_inv = [row[:] for row in s]
    out = [None] * h
    for p in range(h - 1, -1, -1):
        out[p] = ([row[:] for row in s], [row[:] for row in s_inv])
        i, j, num = data.factors[p]
        a = arith.reduce((num, 1))
        # S_{p-1} = E_ij(a) S_p : row i += a * row j
        s[i - 1] = [arith.add(x, arith.mul(a, y)) for x, y in zip(s[i - 1], s[j - 1])]
        # S_{p-1}^-1 = S_p^-1 E_ij(-a) : col j -= a * col i
        for row in s_inv:
            row[j - 1] = arith.add(row[j - 1], arith.mul(arith.neg(a), row[i - 1]))
    return out


def _term_data(data, n, arith):
    """Per factor: ``v`` (column of C_p), cert row ``g`` and row ``w`` of ``C_p^-1``."""
    terms = []
    for (i, j, num), (s, s_inv) in zip(data.factors, _suffix_products(data, n, arith)):
        v = [s_inv[k][i - 1] for k in range(n)]
        g = s[i - 1]
        w = s[j - 1]
        terms.append((i, j, num, v, g, w))
    return terms


def _pair_coeffs(w, g, arith):
    n = len(w)
    out = {}
    for a in range(n):
        for b in range(a + 1, n):
            c = arith.add(arith.mul(w[a], g[b]), arith.neg(arith.mul(w[b], g[a])))
            if not c[0].is_zero():
                out[(a, b)] = c
    return out


def bracket_exponent(data, n, var):
    """Least ``l`` with ``r^l`` clearing every ``v``, Cohn coefficient and ``f`` of the bracket."""
    arith = _PowerFrac(data.r)
    l = 0
    for i, j, num, v, g, w in _term_data(data, n, arith):
        l = max(l, max(e for _, e in v))
        for c in _pair_coeffs(w, g, arith).values():
            l = max(l, c[1])
        coeffs = num.coeffs_in(var)[1:]
        if any(not c.is_zero() for c in coeffs):
            l = max(l, max(arith.reduce((c, 1))[1] for c in coeffs if not c.is_zero()))
    return l


def build_bracket_factorization(data, n, var, g, c, big_l, l=None, ring=None):
    """Denominator-free factorization of ``A^-1(cX) A((c + r^L g) X)``.

    ``l`` is the exponent used to rescale the Cohn-type data; ``big_l`` must be
    at least ``4 l``.
    """
    ring = ring or data.r.ring
    r = data.r
    if l is None:
        l = bracket_exponent(data, n, var)
    if big_l < 4 * l:
        raise PatchError(f"exponent {big_l} below 4 * {l}")
    arith = _PowerFrac(r)
    x = ring.gen(var)
    zeta = r ** big_l * g
    if zeta.is_zero():
        return Factorization.empty(ring, n)
    to_c = {var: c * x}
    out = []
    for i, j, num, v, gr, w in _term_data(data, n, arith):
        # f with Z f = a((c + Z) X) - a(c X), at Z = zeta
        f = arith.reduce((divided_shift(num, var, c * x, zeta, x), 1))
        if f[0].is_zero():
            continue
        vc = [arith.subs(t, to_c) for t in v]
        v_scaled = []
        for t in vc:
            q = arith.reduce((t[0] * arith.rpow(l), t[1]))
            if q[1] != 0:
                raise PatchError("column entry keeps a denominator after rescaling")
            v_scaled.append(q[0])
        pairs = _pair_coeffs([arith.subs(t, to_c) for t in w], [arith.subs(t, to_c) for t in gr], arith)
        zf = arith.mul((zeta, 0), f)
        for (a, b), coef in pairs.items():
            big = arith.mul(zf, coef)
            big = arith.reduce((big[0], big[1] + 2 * l))
            if big[1] != 0:
                raise PatchError("Cohn coefficient keeps a denominator; exponent too small")
            if big[0].is_zero():
                continue
            spec = CohnTypeSpec(tuple(v_scaled), big[0], a + 1, b + 1)
            out.extend(e for e in factor_cohn_type(spec).factors if not e.a.is_zero())
    return Factorization(n, out, ring)


def patch(a, locals_, var, base_factor, big_l=None, cert=None, check=True):
    """Global factorization of ``a`` from local data ``[LocalData, ...]``.

    ``base_factor`` factors ``a(0)`` over ``R``.  ``big_l`` defaults to
    ``max 4 l_i``; ``cert`` (for ``{r_i^L}``) is computed when omitted.
    With ``check=False`` the final product is not multiplied out; callers that
    verify the result themselves save the cost, which dominates on large outputs.
    """
    ring, n = a.ring, a.n
    ls = [bracket_exponent(d, n, var) for d in locals_]
    if big_l is None:
        big_l = max([4 * l for l in ls] + [0])
    powers = [d.r ** big_l for d in locals_]
    if cert is None:
        cert = unit_certificate(powers)
    if not isinstance(cert, UnimodCertificate) or not cert.check():
        raise PatchError("certificate does not certify the powers of the denominators")
    gs = list(cert.cofactors)
    a0 = a.subs({var: ring.zero})
    result = base_factor(a0)
    brackets = []
    c = ring.one
    for d, l, rp, g in zip(locals_, ls, powers, gs):
        c = c - rp * g
        brackets.append(build_bracket_factorization(d, n, var, g, c, big_l, l=l, ring=ring))
    for b in reversed(brackets):
        result = result + b
    if check and not verify(result, a):
        raise PatchError("patched factorization does not reproduce the matrix")
    return result


@dataclass
class SpecialTrace:
    """Record of one run of :func:`quillen_realize_special`."""

    ideals: list
    denominators: list
    exponent: int
    local_lengths: list


def quillen_realize_special(a, var, base_factor, max_chain=32, trace=None, check=True):
    """Factor ``[[p, q, 0], [r, s, 0], [0, 0, 1]]`` over ``R[X]`` with ``p`` monic in ``var``.

    ``check`` is passed on to :func:`patch`.
    """
    ring = a.ring
    if a.n != 3:
        raise ValueError("special form is 3 x 3")
    z, o = ring.zero, ring.one
    if [a[0, 2], a[1, 2], a[2, 0], a[2, 1], a[2, 2]] != [z, z, z, z, o]:
        raise ValueError("matrix is not of the form [[p, q, 0], [r, s, 0], [0, 0, 1]]")
    p, q, r, s = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    if not p.is_monic_in(var):
        raise ValueError(f"{p} is not monic in {var}")
    used = set()
    for row in a.rows:
        for e in row:
            used.update(e.variables())
    base = [nm for nm in ring.names if nm in used and nm != var]
    rs, locals_, ideals = [], [], []
    for _ in range(max_chain):
        found = find_maximal_ideal_containing(rs, ring, base)
        if isinstance(found, UnimodCertificate):
            break
        res = murthy_realize(p, q, r, s, var, found)
        rr, data = common_denominator(res.factors, found)
        if found.contains(rr) or not all(found.contains(t) for t in rs):
            raise PatchError("maximal ideal chain is not strict")  # pragma: no cover
        rs.append(rr)
        locals_.append(data)
        ideals.append(found)
    else:
        raise PatchError(f"maximal ideal chain longer than {max_chain}")
    result = patch(a, locals_, var, base_factor, check=check)
    if trace is not None:
        trace.append(SpecialTrace(ideals, rs, max([4 * bracket_exponent(d, 3, var) for d in locals_] + [0]),
                                  [len(d.factors) for d in locals_]))
    return result
