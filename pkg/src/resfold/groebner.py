"""Buchberger engine: ideal and module Groebner bases, membership certificates,
lifts through matrices, syzygies, and grade (codimension) computations.

Internally everything is a module element: a dict mapping (component,
exponent-tuple) to a scalar.  Ring polynomials are the one-component case.
Lifts and syzygies use the augmented-module trick: the submodule generated by
g_i + f_i inside R^m + R^k, ordered so the first block dominates.  Every
element of that submodule carries its own combination certificate in the
f-block, so re-expansion checks are immediate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NoLift, NotMember, ResfoldError
from .orders import GREVLEX, ModuleOrder, MonomialOrder
from .poly import Poly, PolyRing, monic, scalar_normalize

Vec = dict  # {(component, exponents): scalar}


# -- low-level vector helpers -----------------------------------------------


def _poly_to_vec(p: Poly, comp: int = 0) -> Vec:
    return {(comp, e): c for e, c in p.terms.items()}


def _vec_component(v: Vec, comp: int, ring: PolyRing) -> Poly:
    return Poly(ring, {e: c for (cmp, e), c in v.items() if cmp == comp})


def _columns_to_vecs(columns) -> list:
    """columns: list of tuples of Poly (the rows of each column vector)."""
    out = []
    for col in columns:
        v: Vec = {}
        for i, p in enumerate(col):
            for e, c in p.terms.items():
                v[(i, e)] = c
        out.append(v)
    return out


class _Elem:
    __slots__ = ("vec", "lt", "ltkey", "lc", "sugar")

    def __init__(self, vec: Vec, order: ModuleOrder, sugar: int | None = None):
        self.vec = vec
        self.lt = max(vec, key=order.key)
        self.ltkey = order.key(self.lt)
        self.lc = vec[self.lt]
        if sugar is None:
            sugar = max(sum(e) for (_, e) in vec)
        self.sugar = sugar


def _normal_form(f: Vec, basis_by_comp: dict, order: ModuleOrder, field, sugar=None):
    """Full normal form; returns (reduced vec, sugar)."""
    keyf = order.key
    work = dict(f)
    out: Vec = {}
    sug = sugar if sugar is not None else (max(sum(e) for (_, e) in f) if f else 0)
    while work:
        m = max(work, key=keyf)
        c = work.pop(m)
        comp, exp = m
        red = None
        for b in basis_by_comp.get(comp, ()):
            be = b.lt[1]
            ok = True
            for x, y in zip(exp, be):
                if x < y:
                    ok = False
                    break
            if ok:
                red = b
                break
        if red is None:
            out[m] = c
            continue
        shift = tuple(x - y for x, y in zip(exp, red.lt[1]))
        q = field.div(c, red.lc)
        sug = max(sug, red.sugar + sum(shift))
        for (cc, ee), cv in red.vec.items():
            if (cc, ee) == red.lt:
                continue
            key = (cc, tuple(a + b for a, b in zip(ee, shift)))
            s = field.sub(work.get(key, 0), field.mul(q, cv))
            if s == 0:
                work.pop(key, None)
            else:
                work[key] = s
    return out, sug


def _monic_vec(v: Vec, lt, field) -> Vec:
    lc = v[lt]
    if lc == field.one():
        return v
    inv = field.inv(lc)
    return {k: field.mul(c, inv) for k, c in v.items()}


def _lcm_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _divides_exp(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def buchberger(gens: list, order: ModuleOrder, field, ring_mode: bool = False) -> list:
    """Reduced, monic Groebner basis of the module generated by `gens`.

    `ring_mode` enables the coprimality criterion, which is only valid for
    ideals (single-component input).
    """
    G: list[_Elem] = []
    by_comp: dict = {}
    pairs: dict = {}  # (i, j) -> (sugar, lcm_deg, lcm_exp)

    def add_pairs(t: int):
        h = G[t]
        hc, he = h.lt
        cand = []
        for i in range(t):
            g = G[i]
            if g is None or g.lt[0] != hc:
                continue
            l = _lcm_exp(he, g.lt[1])
            coprime = ring_mode and all(
                x == 0 or y == 0 for x, y in zip(he, g.lt[1])
            )
            cand.append([i, l, coprime, True])
        # Gebauer-Moeller: drop (t,i) if another lcm strictly divides it
        for a in cand:
            if not a[3]:
                continue
            for b in cand:
                if a is b or not b[3]:
                    continue
                if b[1] != a[1] and _divides_exp(b[1], a[1]):
                    a[3] = False
                    break
        # among equal lcms keep one (prefer coprime so the whole class dies)
        seen: dict = {}
        for a in cand:
            if not a[3]:
                continue
            prev = seen.get(a[1])
            if prev is None:
                seen[a[1]] = a
            else:
                if a[2] and not prev[2]:
                    prev[3] = False
                    seen[a[1]] = a
                else:
                    a[3] = False
        # prune old pairs via the new leading term
        for (i, j) in list(pairs):
            gi, gj = G[i], G[j]
            l = pairs[(i, j)][2]
            if gi.lt[0] == hc and _divides_exp(he, l):
                li = _lcm_exp(gi.lt[1], he)
                lj = _lcm_exp(gj.lt[1], he)
                if li != l and lj != l:
                    del pairs[(i, j)]
        for i, l, coprime, alive in cand:
            if not alive or coprime:
                continue
            g = G[i]
            sug = max(
                g.sugar + sum(x - y for x, y in zip(l, g.lt[1])),
                h.sugar + sum(x - y for x, y in zip(l, he)),
            )
            pairs[(i, t)] = (sug, sum(l), l)

    for g in gens:
        if not g:
            continue
        nf, sug = _normal_form(g, by_comp, order, field)
        if not nf:
            continue
        e = _Elem(nf, order, sug)
        e.vec = _monic_vec(e.vec, e.lt, field)
        e.lc = field.one()
        G.append(e)
        by_comp.setdefault(e.lt[0], []).append(e)
        add_pairs(len(G) - 1)

    while pairs:
        (i, j) = min(pairs, key=lambda k: (pairs[k][0], pairs[k][1], k))
        sug, _, l = pairs.pop((i, j))
        gi, gj = G[i], G[j]
        si = tuple(x - y for x, y in zip(l, gi.lt[1]))
        sj = tuple(x - y for x, y in zip(l, gj.lt[1]))
        s: Vec = {}
        for (cc, ee), cv in gi.vec.items():
            key = (cc, tuple(a + b for a, b in zip(ee, si)))
            s[key] = cv
        for (cc, ee), cv in gj.vec.items():
            key = (cc, tuple(a + b for a, b in zip(ee, sj)))
            r = field.sub(s.get(key, 0), cv)
            if r == 0:
                s.pop(key, None)
            else:
                s[key] = r
        nf, nsug = _normal_form(s, by_comp, order, field, sug)
        if not nf:
            continue
        e = _Elem(nf, order, nsug)
        e.vec = _monic_vec(e.vec, e.lt, field)
        e.lc = field.one()
        G.append(e)
        by_comp.setdefault(e.lt[0], []).append(e)
        add_pairs(len(G) - 1)

    # reduced basis: minimal leading terms, then tail-reduce
    keep = []
    for i, g in enumerate(G):
        redundant = False
        for j, h in enumerate(G):
            if i == j or h is None:
                continue
            if h.lt[0] == g.lt[0] and _divides_exp(h.lt[1], g.lt[1]):
                if h.ltkey != g.ltkey or j < i:
                    redundant = True
                    break
        if redundant:
            G[i] = None
        else:
            keep.append(g)
    final = []
    for g in keep:
        others: dict = {}
        for h in keep:
            if h is not g:
                others.setdefault(h.lt[0], []).append(h)
        nf, sug = _normal_form(g.vec, others, order, field, g.sugar)
        if not nf:
            continue
        e = _Elem(nf, order, sug)
        e.vec = _monic_vec(e.vec, e.lt, field)
        e.lc = field.one()
        final.append(e)
    final.sort(key=lambda e: e.ltkey, reverse=True)
    return [e.vec for e in final]


# -- public ring-level API ------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    order: MonomialOrder
    transformation: tuple | None = None

    def contains_unit(self) -> bool:
        return any(g.is_unit() for g in self.generators)


def _ring_gb(gens: list, order: MonomialOrder) -> list:
    ring = gens[0].ring
    mod_order = ModuleOrder(1, order)
    vecs = [_poly_to_vec(g) for g in gens if not g.is_zero()]
    basis = buchberger(vecs, mod_order, ring.field, ring_mode=True)
    return [_vec_component(v, 0, ring) for v in basis]


def groebner_basis(gens, order: MonomialOrder | None = None, transformation: bool = False) -> GroebnerBasis:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis((), order or GREVLEX, None)
    ring = gens[0].ring
    order = order or ring.order
    basis = _ring_gb(gens, order)
    trans = None
    if transformation:
        rows = []
        for g in basis:
            rows.append(tuple(membership_with_certificate(g, gens)))
        trans = tuple(rows)
    return GroebnerBasis(tuple(basis), order, trans)


class ColumnSpan:
    """Augmented Groebner data for the column module of a poly matrix.

    Generators are columns g_j + f_j in R^m + R^k; the f-block records, for
    every basis element, its expression over the original columns.
    """

    def __init__(self, columns, ring: PolyRing, nrows: int):
        self.ring = ring
        self.m = nrows
        self.k = len(columns)
        self.columns = columns
        order = ModuleOrder(self.m + self.k, ring.order)
        self.order = order
        gens = []
        zero_exp = (0,) * ring.nvars
        for j, col in enumerate(columns):
            v: Vec = {}
            for i, p in enumerate(col):
                for e, c in p.terms.items():
                    v[(i, e)] = c
            v[(self.m + j, zero_exp)] = ring.field.one()
            gens.append(v)
        self.gb = buchberger(gens, order, ring.field)
        self.by_comp: dict = {}
        for v in self.gb:
            e = _Elem(v, order)
            self.by_comp.setdefault(e.lt[0], []).append(e)

    def reduce(self, target) -> tuple:
        """Normal form of a target column; returns (remainder_polys, coeff_polys).

        remainder is over the first m components; coeffs c satisfy
        target = sum c_j * column_j + remainder.
        """
        v: Vec = {}
        for i, p in enumerate(target):
            for e, c in p.terms.items():
                v[(i, e)] = c
        nf, _ = _normal_form(v, self.by_comp, self.order, self.ring.field)
        rem = [_vec_component(nf, i, self.ring) for i in range(self.m)]
        coeffs = [-_vec_component(nf, self.m + j, self.ring) for j in range(self.k)]
        return rem, coeffs

    def lift(self, target) -> list:
        rem, coeffs = self.reduce(target)
        if any(not r.is_zero() for r in rem):
            raise NoLift("target is not in the column span")
        return coeffs

    def contains(self, target) -> bool:
        rem, _ = self.reduce(target)
        return all(r.is_zero() for r in rem)

    def syzygies(self) -> list:
        """Columns (length-k tuples of Poly) generating the syzygy module."""
        out = []
        for v in self.gb:
            if any(comp < self.m for (comp, _) in v):
                continue
            out.append(tuple(_vec_component(v, self.m + j, self.ring) for j in range(self.k)))
        return out


@lru_cache(maxsize=64)
def _span_of_matrix(M) -> ColumnSpan:
    cols = [tuple(M.entries[i][j] for i in range(M.nrows)) for j in range(M.ncols)]
    return ColumnSpan(cols, M.ring, M.nrows)


def column_span(M) -> ColumnSpan:
    return _span_of_matrix(M)


def membership_with_certificate(f: Poly, gens) -> list:
    """Coefficients c with f = sum c_i gens_i, verified; raises NotMember."""
    gens = list(gens)
    ring = f.ring
    span = ColumnSpan([(g,) for g in gens], ring, 1)
    try:
        coeffs = span.lift((f,))
    except NoLift as exc:
        raise NotMember(f"{f} is not in the ideal") from exc
    acc = ring.zero()
    for c, g in zip(coeffs, gens):
        acc = acc + c * g
    if acc != f:
        raise ResfoldError("certificate re-expansion failed")
    return coeffs


def lift_through_matrix(v, M) -> list:
    """Solve M*x = v exactly; raises NoLift when v is outside the column span."""
    if hasattr(v, "entries"):
        if v.ncols != 1:
            raise ResfoldError("expected a column vector")
        v = tuple(v.entries[i][0] for i in range(v.nrows))
    v = tuple(v)
    if len(v) != M.nrows:
        raise ResfoldError("vector length does not match matrix rows")
    span = column_span(M)
    x = span.lift(v)
    # re-expansion check
    ring = M.ring
    for i in range(M.nrows):
        acc = ring.zero()
        for j in range(M.ncols):
            acc = acc + M.entries[i][j] * x[j]
        if acc != v[i]:
            raise ResfoldError("lift re-expansion failed")
    return x


def syzygy_generators(M):
    """Matrix S with M*S = 0 whose columns generate the kernel module."""
    from .matpoly import PolyMatrix

    span = column_span(M)
    syz = span.syzygies()
    ring = M.ring
    if not syz:
        return PolyMatrix.from_rows(ring, [[] for _ in range(M.ncols)], ncols=0)
    rows = [[s[j] for s in syz] for j in range(M.ncols)]
    S = PolyMatrix.from_rows(ring, rows)
    prod = M @ S
    if not prod.is_zero():
        raise ResfoldError("syzygy verification failed")
    return S


# -- grade / codimension ---------------------------------------------------------


def _minimal_monomials(monos: set) -> list:
    mins = []
    for m in sorted(monos):
        if not any(_divides_exp(o, m) for o in mins if o != m):
            mins.append(m)
    out = []
    for m in mins:
        if not any(o != m and _divides_exp(o, m) for o in mins):
            out.append(m)
    return out


def monomial_codim(monos) -> float:
    """Height of the monomial ideal generated by `monos` (exponent tuples):
    the minimum number of variables meeting every generator."""
    monos = {m for m in monos}
    if not monos:
        return 0
    if any(not any(m) for m in monos):
        return math.inf
    mins = _minimal_monomials(monos)
    supports = frozenset(frozenset(i for i, e in enumerate(m) if e) for m in mins)

    memo: dict = {}

    def hit(sups: frozenset) -> int:
        if not sups:
            return 0
        if sups in memo:
            return memo[sups]
        smallest = min(sups, key=lambda s: (len(s), sorted(s)))
        best = None
        for x in sorted(smallest):
            rest = frozenset(s for s in sups if x not in s)
            v = 1 + hit(rest)
            if best is None or v < best:
                best = v
        memo[sups] = best
        return best

    return hit(supports)


def codimension(gens) -> float:
    """Grade (= height) of the ideal generated by `gens` over the polynomial
    ring; the unit ideal reports +inf.  Exact: Groebner basis plus the
    monomial-ideal height of the initial ideal."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return 0
    if any(g.is_unit() for g in gens):
        return math.inf
    gb = _ring_gb(gens, gens[0].ring.order)
    if any(g.is_unit() for g in gb):
        return math.inf
    return monomial_codim({g.leading_monomial() for g in gb})


def _interreduce_once(gens: list) -> list:
    """One pass of mutual reduction; exposes smaller leading terms cheaply."""
    ring = gens[0].ring
    order = ModuleOrder(1, ring.order)
    field = ring.field
    elems = []
    out = []
    for g in sorted(gens, key=lambda p: ring.order.key(p.leading_monomial())):
        by_comp = {0: elems}
        nf, _ = _normal_form(_poly_to_vec(g), by_comp, order, field)
        if nf:
            e = _Elem(nf, order)
            e.vec = _monic_vec(e.vec, e.lt, field)
            e.lc = field.one()
            elems.append(e)
            out.append(_vec_component(e.vec, 0, ring))
    return out


def grade_at_least(gens, k: int, exact_fallback: bool = True):
    """Decide grade(ideal) >= k.

    Tier 1: height of the monomial ideal of the generators' leading terms (a
    valid lower bound since it generates a subideal of the initial ideal).
    Tier 2: the same after one interreduction pass.
    Tier 3: exact codimension.  Returns True/False (False only after the
    exact tier) or None when exact_fallback is disabled and tiers fail.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return k <= 0
    if any(g.is_unit() for g in gens):
        return True
    if monomial_codim({g.leading_monomial() for g in gens}) >= k:
        return True
    reduced = _interreduce_once(gens)
    if any(g.is_unit() for g in reduced):
        return True
    if reduced and monomial_codim({g.leading_monomial() for g in reduced}) >= k:
        return True
    if not exact_fallback:
        return None
    return codimension(reduced if reduced else gens) >= k


def is_unit_ideal(gens) -> bool:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    if any(g.is_unit() for g in gens):
        return True
    return codimension(gens) == math.inf


def ideal_equal(I, J) -> bool:
    """Equality of ideals via reduced Groebner bases."""
    gi = [str(g) for g in groebner_basis(list(I)).generators]
    gj = [str(g) for g in groebner_basis(list(J)).generators]
    return sorted(gi) == sorted(gj)


def radical_membership(f: Poly, I) -> bool:
    """Rabinowitsch trick: f lies in the radical iff 1 in I + (1 - t*f)."""
    if f.is_zero():
        return True
    ring = f.ring
    aux = "t_rad_"
    while aux in ring.variables:
        aux += "_"
    ext = ring.extend((aux,))
    gens = [ring.embed(g, ext) for g in I]
    t = ext.var(aux)
    gens.append(ext.one() - t * ring.embed(f, ext))
    return is_unit_ideal(gens)
