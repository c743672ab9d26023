"""Ideals of the coefficient ring: Groebner bases with cofactors, unit
certificates, maximal ideals containing given polynomials, and arithmetic in
the residue field of a maximal ideal.

A "base ring" here is the subring of a :class:`~suslin.ring.Ring` generated by
a chosen list of variables (``base_vars``).  Everything stays inside the big
ring so that no conversions are needed when results are used as coefficients
of polynomials in the remaining variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import flint

from .ring import Poly, Ring

__all__ = [
    "NotUnit",
    "UnsupportedZeroSearch",
    "UnimodCertificate",
    "MaximalIdealRep",
    "ResidueField",
    "ResidueElem",
    "GcdResult",
    "groebner_with_cofactors",
    "groebner_basis",
    "normal_form",
    "ideal_contains",
    "reduce_with_cofactors",
    "unit_certificate",
    "find_maximal_ideal_containing",
    "origin_ideal",
    "lift",
    "univar_gcd_in_residue",
]


class NotUnit(ValueError):
    """The given polynomials do not generate the unit ideal."""


class UnsupportedZeroSearch(RuntimeError):
    """No maximal ideal could be located (no rational common zero in >= 2 variables)."""

    def __init__(self, message, generators=()):
        super().__init__(message)
        self.generators = list(generators)


@dataclass(frozen=True)
class UnimodCertificate:
    """``sum(r * g for r, g in zip(generators, cofactors)) == 1``."""

    generators: tuple
    cofactors: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "cofactors", tuple(self.cofactors))
        if len(self.generators) != len(self.cofactors):
            raise ValueError("generator / cofactor length mismatch")

    def combination(self):
        ring = self.generators[0].ring
        total = ring.zero
        for r, g in zip(self.generators, self.cofactors):
            total = total + r * g
        return total

    def check(self):
        return self.combination().is_one()


# ---------------------------------------------------------------------------
# Groebner bases (Buchberger, with the expression matrix carried along)


def _order_ctx(ring, order):
    if order == "grevlex":
        return ring.ctx
    if order == "lex":
        if ring.field.p is None:
            return flint.fmpq_mpoly_ctx.get(ring.names, "lex")
        return flint.nmod_mpoly_ctx.get(ring.names, modulus=ring.field.p, ordering="lex")
    raise ValueError(f"unknown monomial order {order!r}")


def _convert(raw, ctx):
    if raw.context() is ctx:
        return raw
    return ctx.from_dict(raw.to_dict())


def _lt(raw):
    exp, c = next(iter(raw.terms()))
    if isinstance(raw, flint.nmod_mpoly):
        # coefficients come back as plain ints; keep division modular
        c = flint.nmod(c, raw.context().modulus())
    return exp, c


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono(ctx, exp, coeff):
    return ctx.from_dict({tuple(exp): coeff})


def _reduce(f, cof, basis, ctx, full=True):
    """Reduce ``f`` by ``basis`` (list of (poly, cofactors, lt)); track cofactors."""
    zero = ctx.from_dict({})
    remainder = zero
    cof = list(cof) if cof is not None else None
    while not f.is_zero():
        exp, c = _lt(f)
        for g, gcof, (gexp, gc) in basis:
            if _divides(gexp, exp):
                q = _mono(ctx, [a - b for a, b in zip(exp, gexp)], c / gc)
                f = f - q * g
                if cof is not None:
                    for k in range(len(cof)):
                        if not gcof[k].is_zero():
                            cof[k] = cof[k] + q * gcof[k]
                break
        else:
            if not full:
                return f, cof
            lead = _mono(ctx, exp, c)
            remainder = remainder + lead
            f = f - lead
    # invariant tracked as: original = remainder + sum(cof_k * gen_k) with sign flipped below
    return remainder, cof


def groebner_with_cofactors(gens, order="grevlex"):
    """Reduced Groebner basis of ``gens`` plus the expression matrix.

    Returns ``(basis, expressions)`` where ``basis[i] == sum(expressions[i][j] *
    gens[j])`` exactly.  The basis elements are monic.
    """
    gens = [g for g in gens]
    if not gens:
        raise ValueError("groebner_with_cofactors needs at least one generator")
    ring = gens[0].ring
    ctx = _order_ctx(ring, order)
    zero = ctx.from_dict({})
    one = ctx.constant(ring.field.scalar(1))
    k = len(gens)

    # Elements are (poly, cof) with poly == sum(cof[j] * gens[j]).
    elems = []
    for j, g in enumerate(gens):
        raw = _convert(g.raw, ctx)
        if raw.is_zero():
            continue
        cof = [zero] * k
        cof[j] = one
        elems.append((raw, cof, _lt(raw)))
    if not elems:
        return [ring.zero], [[ring.zero] * k]

    def reduce_tracked(f, fcof, basis):
        # f - sum q_i b_i ; cofactors: fcof - sum q_i bcof_i
        r, negcof = _reduce(f, [zero] * k, basis, ctx)
        return r, [a - b for a, b in zip(fcof, negcof)]

    basis = []
    for f, fcof, _ in elems:
        r, rcof = reduce_tracked(f, fcof, basis)
        if not r.is_zero():
            basis.append((r, rcof, _lt(r)))
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        # normal selection: smallest lcm degree first
        pairs.sort(key=lambda ij: -sum(max(a, b) for a, b in zip(basis[ij[0]][2][0], basis[ij[1]][2][0])))
        i, j = pairs.pop()
        (f, fcof, (fe, fc)), (g, gcof, (ge, gc)) = basis[i], basis[j]
        lcm = [max(a, b) for a, b in zip(fe, ge)]
        if all(min(a, b) == 0 for a, b in zip(fe, ge)):
            continue  # coprime leading monomials
        mf = _mono(ctx, [a - b for a, b in zip(lcm, fe)], 1 / fc)
        mg = _mono(ctx, [a - b for a, b in zip(lcm, ge)], 1 / gc)
        s = mf * f - mg * g
        scof = [mf * a - mg * b for a, b in zip(fcof, gcof)]
        r, rcof = reduce_tracked(s, scof, basis)
        if r.is_zero():
            continue
        basis.append((r, rcof, _lt(r)))
        n = len(basis) - 1
        pairs.extend((t, n) for t in range(n))
        if r.is_constant():
            break

    # minimize
    lts = [b[2][0] for b in basis]
    keep = []
    for idx, e in enumerate(lts):
        dominated = False
        for jdx, e2 in enumerate(lts):
            if jdx == idx:
                continue
            if _divides(e2, e) and (e2 != e or jdx < idx):
                dominated = True
                break
        if not dominated:
            keep.append(basis[idx])
    # inter-reduce and normalize
    reduced = []
    for idx, (f, fcof, _) in enumerate(keep):
        others = [b for jdx, b in enumerate(keep) if jdx != idx]
        r, rcof = reduce_tracked(f, fcof, others)
        exp, c = _lt(r)
        inv = 1 / c
        reduced.append((r * inv, [a * inv for a in rcof]))
    reduced.sort(key=lambda t: _sort_key(_lt(t[0])[0], order), reverse=True)
    out_basis = [Poly(ring, _convert(r, ring.ctx)) for r, _ in reduced]
    out_expr = [[Poly(ring, _convert(a, ring.ctx)) for a in rcof] for _, rcof in reduced]
    return out_basis, out_expr


def _sort_key(exp, order):
    if order == "lex":
        return tuple(exp)
    return (sum(exp), tuple(-e for e in reversed(exp)))


def groebner_basis(gens, order="grevlex"):
    return groebner_with_cofactors(gens, order)[0]


def normal_form(f, basis, order="grevlex"):
    """Remainder of ``f`` modulo a Groebner basis."""
    ring = f.ring
    ctx = _order_ctx(ring, order)
    tagged = []
    for g in basis:
        if g.is_zero():
            continue
        raw = _convert(g.raw, ctx)
        tagged.append((raw, None, _lt(raw)))
    r, _ = _reduce(_convert(f.raw, ctx), None, tagged, ctx)
    return Poly(ring, _convert(r, ring.ctx))


def reduce_with_cofactors(f, gens):
    """``(rem, cof)`` with ``f == rem + sum(cof[j] * gens[j])`` and ``rem`` reduced."""
    ring = f.ring
    k = len(gens)
    if all(g.is_zero() for g in gens):
        return f, [ring.zero] * k
    basis, expr = groebner_with_cofactors(gens)
    ctx = _order_ctx(ring, "grevlex")
    tagged = []
    for b, row in zip(basis, expr):
        raw = _convert(b.raw, ctx)
        tagged.append((raw, [_convert(c.raw, ctx) for c in row], _lt(raw)))
    zero = ctx.from_dict({})
    r, cof = _reduce(_convert(f.raw, ctx), [zero] * k, tagged, ctx)
    rem = Poly(ring, _convert(r, ring.ctx))
    cof = [Poly(ring, _convert(c, ring.ctx)) for c in cof]
    return rem, cof


def ideal_contains(gens, f):
    """Ideal membership: is ``f`` in the ideal generated by ``gens``?"""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return f.is_zero()
    return normal_form(f, groebner_basis(gens)).is_zero()


def unit_certificate(gens):
    """Cofactors expressing 1 through ``gens``; raises :class:`NotUnit` otherwise."""
    gens = list(gens)
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        raise NotUnit("the zero ideal is not the unit ideal")
    ring = nonzero[0].ring
    for idx, g in enumerate(gens):
        if g.is_constant() and not g.is_zero():
            cof = [ring.zero] * len(gens)
            cof[idx] = g.inverse_constant()
            return UnimodCertificate(gens, cof)
    basis, expr = groebner_with_cofactors(gens)
    if len(basis) == 1 and basis[0].is_one():
        cert = UnimodCertificate(gens, expr[0])
        if not cert.check():  # pragma: no cover
            raise ArithmeticError("certificate identity failed")
        return cert
    raise NotUnit(f"ideal generated by {[str(g) for g in gens]} is proper")


# ---------------------------------------------------------------------------
# maximal ideals and residue fields


@dataclass(eq=False)
class MaximalIdealRep:
    """Maximal ideal of ``k[base_vars]`` inside ``ring``.

    ``generators`` is a reduced Groebner basis; ``point`` is set when the
    ideal is the ideal of a k-rational point (residue field k).
    """

    ring: Ring
    base_vars: tuple
    generators: tuple
    dimension: int
    point: dict | None = None
    _field: "ResidueField | None" = field(default=None, repr=False)

    def reduce(self, f):
        """Normal form of ``f`` (which may also involve non-base variables)."""
        if self.point is not None:
            return f.subs(self.point) if self.point else f
        if len(self.generators) == 1 and len(self.base_vars) == 1:
            from .ring import univariate_divide
            return univariate_divide(f, self.generators[0], self.base_vars[0])[1]
        return normal_form(f, list(self.generators))

    def contains(self, f):
        return self.reduce(f).is_zero()

    @property
    def residue_field(self):
        if self._field is None:
            self._field = ResidueField(self)
        return self._field

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def origin_ideal(ring, base_vars):
    """The ideal of the origin of ``k^len(base_vars)`` (the zero ideal if empty)."""
    base_vars = tuple(ring.names[ring.index(v)] for v in base_vars)
    gens = tuple(ring.gen(v) for v in base_vars)
    return MaximalIdealRep(ring, base_vars, gens, 1, point={v: ring.zero for v in base_vars})


def _point_ideal(ring, base_vars, values):
    gens = tuple(ring.gen(v) - ring.const(values[v]) for v in base_vars)
    return MaximalIdealRep(ring, tuple(base_vars), gens, 1,
                           point={v: ring.const(values[v]) for v in base_vars})


def _to_univariate(f, var):
    ring = f.ring
    coeffs = []
    for c in f.coeffs_in(var):
        if not c.is_constant():
            raise ValueError(f"{f} is not univariate in {var}")
        coeffs.append(c._coeff_of((0,) * ring.nvars))
    if ring.field.p is None:
        return flint.fmpq_poly([flint.fmpq(c) for c in coeffs])
    return flint.nmod_poly([int(c) for c in coeffs], ring.field.p)


def _from_univariate(up, ring, var):
    coeffs = [ring.const(ring.field.to_python(c) if ring.field.p is None else int(c))
              for c in up.coeffs()]
    return Poly.from_coeffs(ring, var, coeffs)


def _irreducible_factors(f, var):
    """Monic irreducible factors of a univariate polynomial, by increasing degree."""
    up = _to_univariate(f, var)
    _, facs = up.factor()
    out = [_from_univariate(g, f.ring, var) for g, _ in facs]
    out = [g.scale_to_monic_in(var) for g in out]
    out.sort(key=lambda g: (g.degree(var), str(g)))
    return out


def _univariate_gcd(polys, var):
    g = polys[0].ring.zero
    for p in polys:
        g = g.gcd(p)
    return g


def _rational_roots(f, var):
    return [g for g in _irreducible_factors(f, var) if g.degree(var) == 1]


def find_maximal_ideal_containing(gens, ring, base_vars):
    """A maximal ideal of ``k[base_vars]`` containing every element of ``gens``.

    Returns a :class:`MaximalIdealRep`, or a :class:`UnimodCertificate` when
    ``gens`` generate the unit ideal.  The origin is used for an empty list.
    """
    base_vars = tuple(ring.names[ring.index(v)] for v in base_vars)
    gens = [g for g in gens if not g.is_zero()]
    for g in gens:
        extra = set(g.variables()) - set(base_vars)
        if extra:
            raise ValueError(f"{g} involves non-base variables {sorted(extra)}")
    if not gens:
        return origin_ideal(ring, base_vars)
    try:
        return unit_certificate(gens)
    except NotUnit:
        pass
    if len(base_vars) == 0:  # pragma: no cover - a nonzero constant is always a unit
        raise AssertionError("nonzero constants generate the unit ideal")
    if len(base_vars) == 1:
        var = base_vars[0]
        g = _univariate_gcd(gens, var)
        factors = _irreducible_factors(g, var)
        lin = [h for h in factors if h.degree(var) == 1]
        if lin:
            h = lin[0]
            root = -h.coeffs_in(var)[0]
            return _point_ideal(ring, base_vars, {var: ring.field.to_python(root.constant_value())})
        h = factors[0]
        return MaximalIdealRep(ring, base_vars, (h,), h.degree(var))
    point = _rational_common_zero(gens, ring, base_vars)
    if point is None:
        raise UnsupportedZeroSearch(
            f"no rational common zero of {[str(g) for g in gens]} in {len(base_vars)} variables",
            gens)
    return _point_ideal(ring, base_vars, point)


def _rational_common_zero(gens, ring, base_vars):
    """Search a k-rational common zero by lex elimination and back-substitution."""
    order_names = sorted(base_vars, key=ring.index)

    def search(polys, remaining, assigned):
        polys = [p for p in polys if not p.is_zero()]
        if any(p.is_constant() for p in polys):
            return None
        if not remaining:
            return dict(assigned)
        basis = groebner_basis(polys, order="lex") if polys else []
        if any(p.is_constant() for p in basis):
            return None
        last = remaining[-1]
        univ = [p for p in basis if set(p.variables()) <= {last}]
        if univ:
            candidates = [ -h.coeffs_in(last)[0].constant_value() for h in _rational_roots(univ[0], last)]
            candidates = [ring.field.to_python(c) for c in candidates]
        elif not basis:
            candidates = [0]
        else:
            candidates = [0, 1, -1, 2, -2] if ring.field.p is None else list(range(min(ring.field.p, 16)))
        for value in candidates:
            sub = {last: ring.const(value)}
            res = search([p.subs(sub) for p in basis], remaining[:-1], assigned + [(last, value)])
            if res is not None:
                return res
        return None

    # lex with the names order of the ring restricted to base_vars eliminates earlier ones
    return search(list(gens), order_names, [])


class ResidueField:
    """Arithmetic in ``k[base_vars] / M`` on normal-form representatives."""

    def __init__(self, ideal):
        self.ideal = ideal
        self.ring = ideal.ring
        self._basis = None

    def __call__(self, f):
        if isinstance(f, ResidueElem):
            return f
        return ResidueElem(self.ideal.reduce(self.ring(f)), self)

    @property
    def zero(self):
        return ResidueElem(self.ring.zero, self)

    @property
    def one(self):
        return ResidueElem(self.ring.one, self)

    @property
    def dimension(self):
        return self.ideal.dimension

    def standard_monomials(self):
        """Monomials not divisible by any leading monomial of the ideal."""
        if self._basis is None:
            ring = self.ring
            idx = [ring.index(v) for v in self.ideal.base_vars]
            lts = [g.leading_term()[0] for g in self.ideal.generators]
            out = []
            frontier = [tuple([0] * ring.nvars)]
            seen = set()
            while frontier:
                e = frontier.pop()
                if e in seen:
                    continue
                seen.add(e)
                if any(_divides(t, e) for t in lts):
                    continue
                out.append(e)
                if len(out) > 10000:
                    raise ValueError("residue ring is not finite dimensional")
                for k in idx:
                    e2 = list(e)
                    e2[k] += 1
                    frontier.append(tuple(e2))
            out.sort(key=lambda e: (sum(e), e))
            self._basis = out
        return self._basis

    def coordinates(self, f):
        basis = self.standard_monomials()
        return [f._coeff_of(e) for e in basis]

    def inverse(self, a):
        if a.rep.is_zero():
            raise ZeroDivisionError("inverse of zero in residue field")
        if a.rep.is_constant():
            return ResidueElem(a.rep.inverse_constant(), self)
        ring = self.ring
        basis = self.standard_monomials()
        n = len(basis)
        cols = []
        for e in basis:
            prod = self.ideal.reduce(a.rep * ring.from_terms({e: 1}))
            cols.append(self.coordinates(prod))
        entries = [cols[j][i] for i in range(n) for j in range(n)]
        rhs = self.coordinates(ring.one)
        if ring.field.p is None:
            mat = flint.fmpq_mat(n, n, entries)
            sol = mat.solve(flint.fmpq_mat(n, 1, rhs))
            vals = [sol[i, 0] for i in range(n)]
        else:
            p = ring.field.p
            mat = flint.nmod_mat(n, n, [int(c) for c in entries], p)
            sol = mat.solve(flint.nmod_mat(n, 1, [int(c) for c in rhs], p))
            vals = [int(sol[i, 0]) for i in range(n)]
        inv = ring.from_terms({e: (ring.field.to_python(v) if ring.field.p is None else v)
                               for e, v in zip(basis, vals)})
        out = ResidueElem(inv, self)
        if not (a * out).rep.is_one():  # pragma: no cover
            raise ArithmeticError("residue inverse check failed")
        return out


class ResidueElem:
    """Element of a residue field, stored as its unique normal form."""

    __slots__ = ("rep", "field")

    def __init__(self, rep, field):
        self.rep = rep
        self.field = field

    def _other(self, other):
        if isinstance(other, ResidueElem):
            if other.field.ideal is not self.field.ideal:
                raise ValueError("residues modulo different ideals")
            return other
        return self.field(other)

    def __add__(self, other):
        return ResidueElem(self.rep + self._other(other).rep, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueElem(self.rep - self._other(other).rep, self.field)

    def __neg__(self):
        return ResidueElem(-self.rep, self.field)

    def __mul__(self, other):
        return self.field(self.rep * self._other(other).rep)

    __rmul__ = __mul__

    def inverse(self):
        return self.field.inverse(self)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def is_zero(self):
        return self.rep.is_zero()

    def __eq__(self, other):
        if isinstance(other, (ResidueElem, Poly, int, Fraction)):
            return self.rep == self._other(other).rep
        return NotImplemented

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"ResidueElem({self.rep} mod {self.field.ideal})"


def lift(a):
    """Representative polynomial of a residue (its normal form)."""
    return a.rep


# ---------------------------------------------------------------------------
# Euclid over k_M[X]


@dataclass
class GcdResult:
    """Outcome of :func:`univar_gcd_in_residue`.

    ``ops`` are row operations ``(target, source, coefficient)`` meaning
    ``row[target] += coefficient * row[source]`` (0-based, over the input
    list), applied in order.  After them, slot 0 holds ``pivot`` and every other
    slot is zero; ``generator`` is ``pivot`` made monic.
    """

    generator: Poly
    pivot: Poly
    ops: list


def univar_gcd_in_residue(polys, ideal, var):
    """Euclidean elimination of univariate polynomials over ``k[base]/ideal``.

    ``polys`` are polynomials in ``var`` whose coefficients are read modulo
    ``ideal``.
    """
    fld = ideal.residue_field
    ring = ideal.ring
    x = ring.gen(var)
    vals = [ideal.reduce(p) for p in polys]
    if all(v.is_zero() for v in vals):
        raise ValueError("all inputs vanish in the residue field")
    ops = []

    def lc(p):
        return p.leading_coeff_in(var)

    while True:
        live = [i for i, v in enumerate(vals) if not v.is_zero()]
        if len(live) == 1:
            break
        a = min(live, key=lambda i: (vals[i].degree(var), i))
        pa = vals[a]
        da = pa.degree(var)
        inv = fld.inverse(fld(lc(pa))).rep
        for b in live:
            if b == a:
                continue
            pb = vals[b]
            quot = ring.zero
            while not pb.is_zero() and pb.degree(var) >= da:
                t = ideal.reduce(lc(pb) * inv) * x ** (pb.degree(var) - da)
                quot = quot + t
                pb = ideal.reduce(pb - t * pa)
            ops.append((b, a, -quot))
            vals[b] = pb
    (a,) = [i for i, v in enumerate(vals) if not v.is_zero()]
    if a != 0:
        ops.append((0, a, ring.one))
        vals[0] = vals[a]
        ops.append((a, 0, -ring.one))
        vals[a] = ring.zero
    pivot = vals[0]
    inv = fld.inverse(fld(lc(pivot))).rep
    generator = ideal.reduce(pivot * inv)
    return GcdResult(generator=generator, pivot=pivot, ops=ops)
