"""Sparse multivariate polynomials over an exact coefficient field.

Terms live in a dict mapping exponent tuples to nonzero scalars.  All values
are immutable after construction and every operation is pure, so sharing
polynomials across threads is safe.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NotASquare, NotDivisible, RingMismatch, ResfoldError
from .fields import CoefficientField
from .orders import GREVLEX, MonomialOrder

_VAR_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")


class PolyRing:
    """Polynomial ring: ordered variables, coefficient field, optional multigrading."""

    __slots__ = ("variables", "field", "multidegree", "order", "_index", "_hash")

    def __init__(
        self,
        field: CoefficientField,
        variables,
        multidegree: dict | None = None,
        order: MonomialOrder = GREVLEX,
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ResfoldError("variable names must be distinct")
        for v in variables:
            if not _VAR_RE.fullmatch(v):
                raise ResfoldError(f"bad variable name {v!r}")
        if multidegree is not None:
            multidegree = {v: tuple(d) for v, d in multidegree.items()}
            lengths = {len(d) for d in multidegree.values()}
            if len(lengths) > 1:
                raise ResfoldError("multidegree vectors must share one length")
        self.variables = variables
        self.field = field
        self.multidegree = multidegree
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}
        self._hash = hash((variables, field, order))

    # -- identity --------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
            and self.multidegree == other.multidegree
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.variables)})"

    @property
    def nvars(self) -> int:
        return len(self.variables)

    # -- constructors ------------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one()})

    def const(self, c) -> "Poly":
        c = self.field.coerce(c)
        if c == 0:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        i = self._index[name]
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): self.field.one()})

    def gens(self):
        return tuple(self.var(v) for v in self.variables)

    def from_terms(self, terms: dict) -> "Poly":
        clean = {}
        f = self.field
        for exp, c in terms.items():
            c = f.coerce(c)
            if c != 0:
                clean[tuple(exp)] = c
        return Poly(self, clean)

    def monomial(self, exp, coeff=1) -> "Poly":
        return self.from_terms({tuple(exp): coeff})

    def extend(self, extra_vars) -> "PolyRing":
        """Ring with extra variables appended (multigrading dropped)."""
        return PolyRing(self.field, self.variables + tuple(extra_vars), None, self.order)

    def embed(self, f: "Poly", target: "PolyRing") -> "Poly":
        """Map into `target`, matching variables by name."""
        pos = [target._index[v] for v in self.variables]
        terms = {}
        for exp, c in f.terms.items():
            new = [0] * target.nvars
            for p, e in zip(pos, exp):
                new[p] = e
            terms[tuple(new)] = c
        return Poly(target, terms)

    def var_multidegree(self, i: int):
        return self.multidegree[self.variables[i]] if self.multidegree else None

    # -- parsing ----------------------------------------------------------
    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()


class Poly:
    """One polynomial.  Do not mutate `terms`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if self.is_zero():
            return self.ring.field.zero()
        if not self.is_constant():
            raise ResfoldError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def is_unit(self) -> bool:
        return self.is_constant() and not self.is_zero()

    # -- ordering helpers ----------------------------------------------------
    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self):
        key = self.ring.order.key
        return max(self.terms, key=key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_present(self):
        present = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    present.add(i)
        return sorted(present)

    def multidegree(self):
        """Common multidegree of all terms, None for 0, error if inhomogeneous."""
        ring = self.ring
        if ring.multidegree is None:
            raise ResfoldError("ring carries no multigrading")
        if not self.terms:
            return None
        degs = set()
        for exp in self.terms:
            total = None
            for i, e in enumerate(exp):
                if e:
                    d = ring.var_multidegree(i)
                    total = (
                        tuple(e * x for x in d)
                        if total is None
                        else tuple(a + e * b for a, b in zip(total, d))
                    )
            if total is None:
                total = (0,) * len(next(iter(ring.multidegree.values())))
            degs.add(total)
            if len(degs) > 1:
                raise ResfoldError("polynomial is not multihomogeneous")
        return next(iter(degs))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatch("operands live in different rings")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        f = self.ring.field
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = f.add(terms.get(exp, 0), c)
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        f = self.ring.field
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = f.add(out.get(exp, 0), f.mul(ca, cb))
                if s == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.coerce(c)
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {e: f.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ResfoldError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self == self.ring.const(other)
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def derivative(self, i: int) -> "Poly":
        f = self.ring.field
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e:
                nc = f.mul(c, f.coerce(e))
                if nc != 0:
                    new = list(exp)
                    new[i] = e - 1
                    out[tuple(new)] = nc
        return Poly(self.ring, out)

    # -- printing -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        rational = ring.field.p is None
        parts = []
        for exp, c in self.sorted_terms():
            mon = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(ring.variables, exp)
                if e
            )
            if rational and c < 0:
                sign, c_abs = "-", -c
            else:
                sign, c_abs = "+", c
            if not mon:
                body = str(c_abs)
            elif c_abs == 1:
                body = mon
            else:
                body = f"{c_abs}*{mon}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self):
        return f"<{self}>"


class _Parser:
    """Recursive-descent parser for the polynomial text syntax."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.tokens = re.findall(r"[a-zA-Z_][a-zA-Z0-9_]*|\d+|[-+*/^()]", text)
        if "".join(self.tokens).replace(" ", "") != text.replace(" ", ""):
            raise ResfoldError(f"cannot tokenize polynomial text {text!r}")
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek() is not None:
            raise ResfoldError(f"trailing tokens at {self.peek()!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next() == "-":
                sign = -sign
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek() in ("+", "-"):
            op = self.next()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_unit():
                    raise ResfoldError("division only by constants")
                p = p.scale(self.ring.field.inv(q.constant_value()))
        return p

    def factor(self) -> Poly:
        p = self.base()
        while self.peek() == "^":
            self.next()
            tok = self.next()
            if tok is None or not tok.isdigit():
                raise ResfoldError("exponent must be a nonnegative integer")
            p = p ** int(tok)
        return p

    def base(self) -> Poly:
        tok = self.next()
        if tok is None:
            raise ResfoldError("unexpected end of input")
        if tok == "(":
            p = self.expr()
            if self.next() != ")":
                raise ResfoldError("missing closing parenthesis")
            return p
        if tok == "-":
            return -self.base()
        if tok.isdigit():
            return self.ring.const(int(tok))
        if tok in self.ring._index:
            return self.ring.var(tok)
        raise ResfoldError(f"unknown variable {tok!r}")


# -- ring-level operations ----------------------------------------------------


def ring_arithmetic(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ResfoldError(f"unknown op {op!r}")


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Return q with f = q*g, or raise NotDivisible."""
    if g.is_zero():
        raise ResfoldError("division by zero polynomial")
    f._check(g)
    if f.is_zero():
        return f.ring.zero()
    ring = f.ring
    fld = ring.field
    if g.is_constant():
        return f.scale(fld.inv(g.constant_value()))
    key = ring.order.key
    glm = g.leading_monomial()
    glc = g.terms[glm]
    rem = dict(f.terms)
    quo: dict = {}
    while rem:
        m = max(rem, key=key)
        diff = tuple(a - b for a, b in zip(m, glm))
        if any(d < 0 for d in diff):
            raise NotDivisible(f"{f} is not divisible by {g}")
        c = fld.div(rem[m], glc)
        quo[diff] = c
        for ge, gc in g.terms.items():
            exp = tuple(a + b for a, b in zip(diff, ge))
            s = fld.sub(rem.get(exp, 0), fld.mul(c, gc))
            if s == 0:
                rem.pop(exp, None)
            else:
                rem[exp] = s
    return Poly(ring, quo)


def divides(g: Poly, f: Poly) -> bool:
    try:
        exact_divide(f, g)
        return True
    except NotDivisible:
        return False


def monic(f: Poly) -> Poly:
    """Scale so the leading coefficient is 1 (zero stays zero)."""
    if f.is_zero():
        return f
    return f.scale(f.ring.field.inv(f.leading_coefficient()))


def scalar_normalize(f: Poly) -> Poly:
    """Canonical constant multiple: integer-primitive with sign-normalized lead
    over Q, monic over F_p.  Used when generating sets are deduplicated."""
    if f.is_zero():
        return f
    fld = f.ring.field
    if fld.p is not None:
        return monic(f)
    from math import gcd as igcd

    num = 0
    den = 1
    for c in f.terms.values():
        num = igcd(num, c.numerator)
        den = den * c.denominator // igcd(den, c.denominator)
    g = f.scale(Fraction(den, num))
    if g.leading_coefficient() < 0:
        g = -g
    return g


def sign_normalize(f: Poly) -> Poly:
    """Flip sign so the leading coefficient is positive (Q) or in 1..(p-1)/2."""
    if f.is_zero():
        return f
    if f.ring.field.is_positive_normal(f.leading_coefficient()):
        return f
    return -f


# -- gcd ------------------------------------------------------------------


def _coeffs_in(f: Poly, v: int) -> dict:
    """View f as univariate in variable v: degree -> Poly in the other vars."""
    out: dict = {}
    for exp, c in f.terms.items():
        d = exp[v]
        rest = list(exp)
        rest[v] = 0
        bucket = out.setdefault(d, {})
        bucket[tuple(rest)] = c
    return {d: Poly(f.ring, t) for d, t in out.items()}


def _from_coeffs(ring: PolyRing, v: int, coeffs: dict) -> Poly:
    terms = {}
    for d, p in coeffs.items():
        for exp, c in p.terms.items():
            new = list(exp)
            new[v] += d
            terms[tuple(new)] = c
    return Poly(ring, terms)


def _content_in(f: Poly, v: int) -> Poly:
    cs = list(_coeffs_in(f, v).values())
    g = cs[0]
    for c in cs[1:]:
        g = multivariate_gcd(g, c)
        if g.is_unit():
            break
    return g


def _pseudo_rem(f: Poly, g: Poly, v: int) -> Poly:
    """Pseudo-remainder of f by g in the main variable v."""
    df, dg = f.degree_in(v), g.degree_in(v)
    gc = _coeffs_in(g, v)
    lg = gc[dg]
    r = f
    while not r.is_zero() and r.degree_in(v) >= dg:
        dr = r.degree_in(v)
        rc = _coeffs_in(r, v)
        lr = rc[dr]
        shift = [0] * f.ring.nvars
        shift[v] = dr - dg
        xs = f.ring.monomial(tuple(shift))
        r = r * lg - g * (lr * xs)
    return r


def multivariate_gcd(f: Poly, g: Poly) -> Poly:
    """Monic-normalized gcd via content extraction + primitive remainder sequences."""
    f._check(g)
    if f.is_zero():
        return monic(g)
    if g.is_zero():
        return monic(f)
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    vf, vg = set(f.variables_present()), set(g.variables_present())
    common = vf | vg
    v = max(common)
    if v not in vf or f.degree_in(v) == 0:
        return monic(multivariate_gcd(_content_in(g, v), f))
    if v not in vg or g.degree_in(v) == 0:
        return monic(multivariate_gcd(_content_in(f, v), g))
    cf, cg = _content_in(f, v), _content_in(g, v)
    fp, gp = exact_divide(f, cf), exact_divide(g, cg)
    c = multivariate_gcd(cf, cg)
    if fp.degree_in(v) < gp.degree_in(v):
        fp, gp = gp, fp
    while not gp.is_zero():
        r = _pseudo_rem(fp, gp, v)
        if r.is_zero():
            fp = gp
            break
        fp, gp = gp, exact_divide(r, _content_in(r, v))
        if gp.degree_in(v) == 0:
            return monic(c)
    return monic(c * exact_divide(fp, _content_in(fp, v)))


# -- perfect square root -------------------------------------------------------


def _frobenius_root(f: Poly, p: int) -> Poly:
    """p-th root of a polynomial all of whose exponents are divisible by p."""
    terms = {tuple(e // p for e in exp): c for exp, c in f.terms.items()}
    return Poly(f.ring, terms)


def _frobenius_power(f: Poly, p: int) -> Poly:
    terms = {tuple(e * p for e in exp): c for exp, c in f.terms.items()}
    return Poly(f.ring, terms)


def _sqrt_shape(f: Poly) -> Poly:
    """Some g with g^2 = f up to a constant, or raise NotASquare."""
    if f.is_constant():
        return f.ring.one()
    present = f.variables_present()
    v = None
    for i in present:
        if not f.derivative(i).is_zero():
            v = i
            break
    if v is None:
        # prime field, every exponent divisible by p
        p = f.ring.field.p
        root = _sqrt_shape(_frobenius_root(f, p))
        return _frobenius_power(root, p)
    cont = _content_in(f, v)
    pp = exact_divide(f, cont)
    head = f.ring.one() if cont.is_constant() else _sqrt_shape(cont)
    g = multivariate_gcd(pp, pp.derivative(v))
    try:
        sqf = exact_divide(pp, g)
        rest = exact_divide(g, sqf)
    except NotDivisible as exc:
        raise NotASquare(f"{f} is not a perfect square") from exc
    tail = f.ring.one() if rest.is_constant() else _sqrt_shape(rest)
    return head * monic(sqf) * tail


def perfect_square_root(f: Poly) -> Poly:
    """Return g with g*g = f exactly, sign-normalized; raise NotASquare otherwise."""
    if f.is_zero():
        return f
    fld = f.ring.field
    if f.is_constant():
        return sign_normalize(f.ring.const(fld.sqrt(f.constant_value())))
    g = _sqrt_shape(f)
    try:
        c = exact_divide(f, g * g)
    except NotDivisible as exc:
        raise NotASquare(f"{f} is not a perfect square") from exc
    if not c.is_constant():
        raise NotASquare(f"{f} is not a perfect square")
    s = fld.sqrt(c.constant_value())
    out = sign_normalize(g.scale(s))
    if out * out != f:
        raise NotASquare(f"{f} is not a perfect square")
    return out


# -- specialization --------------------------------------------------------------


def specialize(f: Poly, assignment: dict):
    """Substitute field elements for variables.

    Returns the scalar image when every ring variable is assigned, otherwise
    the partially substituted polynomial in the same ring.
    """
    ring = f.ring
    fld = ring.field
    values = {}
    for v, x in assignment.items():
        if v not in ring._index:
            raise ResfoldError(f"unknown variable {v!r}")
        values[ring._index[v]] = fld.coerce(x)
    full = len(values) == ring.nvars
    if full:
        total = fld.zero()
        for exp, c in f.terms.items():
            t = c
            for i, e in enumerate(exp):
                if e:
                    t = fld.mul(t, values[i] ** e if fld.p is None else pow(values[i], e, fld.p))
            total = fld.add(total, t)
        return total
    out: dict = {}
    for exp, c in f.terms.items():
        t = c
        new = list(exp)
        for i, e in enumerate(exp):
            if e and i in values:
                t = fld.mul(t, values[i] ** e if fld.p is None else pow(values[i], e, fld.p))
                new[i] = 0
        if t != 0:
            key = tuple(new)
            s = fld.add(out.get(key, 0), t)
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
    return Poly(ring, out)
