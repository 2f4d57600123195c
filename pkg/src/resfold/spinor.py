"""Spinor structure over a split hyperbolic space H + H*.

Conventions (all frozen):
  * frame rows/columns: e_1..e_n then e'_1..e'_n; the Gram matrix in that
    basis is [[0, I], [I, 0]] and Q(v) = <v, v>/2;
  * the spinor module is the exterior algebra on H with e_i acting by left
    wedge and e'_i by contraction with sign (-1)^(position-1);
  * spinor vectors are coefficient maps on sorted index subsets of one
    parity; subsets are enumerated by (size, lexicographic) order;
  * Pluecker coordinates of a rank-n column module are the n x n minors on
    sorted row subsets of a fixed column selection, normalized by their
    common polynomial content and a leading-unit rescale.

Extraction of spinor coordinates works in the cell around a subset I0 where
the selector minor is nonzero: the module is the graph of a skew map in the
I0-twisted frame, whose Pfaffians produce every coordinate from the n(n-1)/2
distance-two minors plus one square root.  The result is certified by the
defining property: the Clifford action of every column kills the spinor.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import (NotASquare, NotDivisible, NotInCell, NotASummand,
                     RankDeficient, ResfoldError, WrongComponent)
from .fields import CoefficientField
from .matpoly import PolyMatrix, det, pfaffian, scalar_inverse, scalar_rank
from .poly import (Poly, PolyRing, exact_divide, monic, perfect_square_root,
                   scalar_normalize, sign_normalize, specialize, _sqrt_shape)


def standard_gram(field: CoefficientField, n: int) -> list:
    one, zero = field.one(), field.zero()
    return [[one if (i + n == j or j + n == i) else zero for j in range(2 * n)]
            for i in range(2 * n)]


@dataclass(frozen=True)
class HyperbolicFrame:
    """Constant change of basis identifying a rank-2n quadratic module with
    the standard hyperbolic space: columns of `embed` are e_1..e_n, e'_1..e'_n
    written in ambient coordinates.  `ambient_gram` defaults to standard."""

    ring: PolyRing
    n: int
    embed: tuple  # 2n x 2n field scalars
    ambient_gram: tuple | None = None

    def __post_init__(self):
        fld = self.ring.field
        G = self.gram_rows()
        E = self.embed
        m = 2 * self.n
        std = standard_gram(fld, self.n)
        for a in range(m):
            for b in range(m):
                acc = fld.zero()
                for i in range(m):
                    if E[i][a] == 0:
                        continue
                    for j in range(m):
                        acc = fld.add(acc, fld.mul(fld.mul(E[i][a], G[i][j]), E[j][b]))
                if acc != std[a][b]:
                    raise ResfoldError("frame is not hyperbolic for the ambient form")

    def gram_rows(self) -> list:
        if self.ambient_gram is not None:
            return [list(r) for r in self.ambient_gram]
        return standard_gram(self.ring.field, self.n)

    @property
    def embed_inv(self) -> tuple:
        inv = scalar_inverse(self.ring.field, [list(r) for r in self.embed])
        return tuple(tuple(r) for r in inv)

    def to_frame(self, M: PolyMatrix) -> PolyMatrix:
        """Rewrite ambient coordinates in the e/e' basis."""
        E = PolyMatrix.from_scalars(self.ring, [list(r) for r in self.embed_inv])
        return E @ M

    def from_frame(self, column) -> tuple:
        """Frame coordinates (length 2n) back to ambient coordinates."""
        E = PolyMatrix.from_scalars(self.ring, [list(r) for r in self.embed])
        return E.apply(column)

    def gram_matrix(self) -> PolyMatrix:
        return PolyMatrix.from_scalars(self.ring, self.gram_rows())


def standard_frame(ring: PolyRing, n: int, ambient_gram=None) -> HyperbolicFrame:
    fld = ring.field
    eye = tuple(tuple(fld.one() if i == j else fld.zero() for j in range(2 * n)) for i in range(2 * n))
    return HyperbolicFrame(ring, n, eye, ambient_gram)


def subsets_of_parity(n: int, parity: int) -> list:
    out = []
    for k in range(parity % 2, n + 1, 2):
        out.extend(itertools.combinations(range(n), k))
    return out


@dataclass(frozen=True)
class SpinorVector:
    """Element of the even or odd part of the exterior algebra on H."""

    ring: PolyRing
    n: int
    parity: int  # 0 even, 1 odd
    coeffs: tuple  # tuple of (subset-tuple, Poly), sorted by (size, lex)

    @staticmethod
    def make(ring, n, parity, mapping: dict) -> "SpinorVector":
        items = [(tuple(k), v) for k, v in mapping.items() if not v.is_zero()]
        for k, _ in items:
            if len(k) % 2 != parity % 2:
                raise ResfoldError("subset parity mismatch")
        items.sort(key=lambda kv: (len(kv[0]), kv[0]))
        return SpinorVector(ring, n, parity % 2, tuple(items))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coefficient(self, subset) -> Poly:
        subset = tuple(sorted(subset))
        for k, v in self.coeffs:
            if k == subset:
                return v
        return self.ring.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c) -> "SpinorVector":
        return SpinorVector.make(self.ring, self.n, self.parity,
                                 {k: v.scale(c) for k, v in self.coeffs})

    def add(self, other: "SpinorVector") -> "SpinorVector":
        if self.parity != other.parity:
            raise ResfoldError("parity mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs:
            s = out.get(k, self.ring.zero()) + v
            out[k] = s
        return SpinorVector.make(self.ring, self.n, self.parity, out)

    def singleton_row(self) -> list:
        """Coefficients on the singletons (zero where absent)."""
        return [self.coefficient((i,)) for i in range(self.n)]


def wedge_op(v: SpinorVector, i: int, coeff: Poly | None = None) -> SpinorVector:
    """Left wedge by e_i."""
    out = {}
    for k, c in v.coeffs:
        if i in k:
            continue
        sign = sum(1 for a in k if a < i)
        val = c if sign % 2 == 0 else -c
        if coeff is not None:
            val = val * coeff
        key = tuple(sorted(k + (i,)))
        out[key] = out.get(key, v.ring.zero()) + val
    return SpinorVector.make(v.ring, v.n, v.parity ^ 1, out)


def contract_op(v: SpinorVector, i: int, coeff: Poly | None = None) -> SpinorVector:
    """Contraction against e'_i."""
    out = {}
    for k, c in v.coeffs:
        if i not in k:
            continue
        sign = sum(1 for a in k if a < i)
        val = c if sign % 2 == 0 else -c
        if coeff is not None:
            val = val * coeff
        key = tuple(a for a in k if a != i)
        out[key] = out.get(key, v.ring.zero()) + val
    return SpinorVector.make(v.ring, v.n, v.parity ^ 1, out)


def clifford_action(v: SpinorVector, x) -> SpinorVector:
    """Action of x = (H-part, H*-part) in frame coordinates: wedge by the
    H-part, contract by the H*-part with alternating signs."""
    ring = v.ring
    x = list(x)
    if len(x) != 2 * v.n:
        raise ResfoldError("coordinate vector must have length 2n")
    acc = SpinorVector.make(ring, v.n, v.parity ^ 1, {})
    for i in range(v.n):
        c = x[i] if isinstance(x[i], Poly) else ring.const(x[i])
        if not c.is_zero():
            acc = acc.add(wedge_op(v, i, c))
        c2 = x[v.n + i] if isinstance(x[v.n + i], Poly) else ring.const(x[v.n + i])
        if not c2.is_zero():
            acc = acc.add(contract_op(v, i, c2))
    return acc


def clifford_word_sign(I0: tuple, K: tuple) -> int:
    """Sign of f_{k_1} ... f_{k_m} acting on the cell spinor e_{I0}, where
    f_k wedges for k outside I0 and contracts for k inside."""
    A = set(I0)
    sign = 1
    for k in reversed(sorted(K)):
        cnt = sum(1 for a in A if a < k)
        if cnt % 2:
            sign = -sign
        if k in A:
            A.remove(k)
        else:
            A.add(k)
    return sign


def isotropy_check(delta3: PolyMatrix, frame: HyperbolicFrame) -> bool:
    """Total isotropy of the column span: delta3^T G delta3 = 0."""
    G = frame.gram_matrix()
    return (delta3.transpose() @ (G @ delta3)).is_zero()


# -- Pluecker data ------------------------------------------------------------


class PlueckerData:
    """Lazily computed, content-normalized n x n minors of a 2n x n matrix,
    indexed by sorted row subsets (rows 0..n-1 are H, n..2n-1 are H*)."""

    def __init__(self, D: PolyMatrix, n: int):
        if D.ncols != n or D.nrows != 2 * n:
            raise ResfoldError("expected a 2n x n matrix")
        self.matrix = D
        self.n = n
        self._raw: dict = {}
        self._factor = None  # (content, constant)

    def raw(self, subset) -> Poly:
        subset = tuple(sorted(subset))
        if len(subset) != self.n:
            raise ResfoldError("subset must have n rows")
        if subset not in self._raw:
            self._raw[subset] = det(self.matrix.submatrix(subset, range(self.n)))
        return self._raw[subset]

    def _normalizer(self):
        if self._factor is not None:
            return self._factor
        from .poly import multivariate_gcd

        content = None
        first = None
        for subset in itertools.combinations(range(2 * self.n), self.n):
            m = self.raw(subset)
            if m.is_zero():
                continue
            if first is None:
                first = m
            content = m if content is None else multivariate_gcd(content, m)
            if content.is_unit():
                break
        if first is None:
            raise RankDeficient("all Pluecker coordinates vanish")
        lead = exact_divide(first, content) if not content.is_unit() else first
        const = self.matrix.ring.field.inv(lead.leading_coefficient())
        self._factor = (content, const)
        return self._factor

    def coord(self, subset) -> Poly:
        content, const = self._normalizer()
        m = self.raw(subset)
        if m.is_zero():
            return m
        out = m if content.is_unit() else exact_divide(m, content)
        return out.scale(const)

    def all_subsets(self):
        return itertools.combinations(range(2 * self.n), self.n)


def _random_assignment(ring: PolyRing, rng: random.Random) -> dict:
    return {v: ring.field.random_nonzero(rng, 997) for v in ring.variables}


def _numeric_matrix(M: PolyMatrix, assignment) -> list:
    ring = M.ring
    out = []
    for i in range(M.nrows):
        row = []
        for p in M.entries[i]:
            row.append(specialize(p, assignment) if ring.nvars else p.constant_value())
        out.append(row)
    return out


def _pivot_columns(field, rows) -> list:
    """Columns of the first maximal independent set, scanned left to right."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(x, inv) for x in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    return pivots


def plucker_of_image(delta3: PolyMatrix, frame: HyperbolicFrame, seed: int = 0) -> PlueckerData:
    """Pluecker coordinates of im(delta3): select a column subset with a
    nonzero maximal minor at a random point, take row minors, normalize."""
    n = frame.n
    D = frame.to_frame(delta3)
    field = D.ring.field
    for trial in range(3):
        rng = random.Random(("plucker", seed, trial).__repr__())
        rows = _numeric_matrix(D, _random_assignment(D.ring, rng))
        cols = _pivot_columns(field, rows)
        if len(cols) == n:
            return PlueckerData(D.submatrix(range(2 * n), cols), n)
    raise RankDeficient(f"column rank at random points is below n = {n}")


# -- pure spinor extraction -----------------------------------------------------


def _selector_rows(I0, n: int) -> list:
    """Rows of the f'-block in the I0-twisted frame: e-rows at I0, e'-rows at
    the complement; sorted ascending in the global row order."""
    rows = [i for i in I0] + [n + i for i in range(n) if i not in I0]
    return sorted(rows)


def _f_row(k: int, I0, n: int) -> int:
    """Global row of the twisted frame vector f_k (wedge direction)."""
    return n + k if k in I0 else k


def _fprime_row(j: int, I0, n: int) -> int:
    return j if j in I0 else n + j


def _find_cell(D: PolyMatrix, n: int, seed: int):
    """Odd subset I0 whose selector minor survives a random specialization.
    Raises WrongComponent when only even cells work, RankDeficient otherwise."""
    field = D.ring.field
    for trial in range(3):
        rng = random.Random(("cell", seed, trial).__repr__())
        rows = _numeric_matrix(D, _random_assignment(D.ring, rng))
        if scalar_rank(field, rows) != n:
            continue
        for parity in (1, 0):
            for I0 in subsets_of_parity(n, parity):
                sel = _selector_rows(set(I0), n)
                sub = [rows[r] for r in sel]
                if scalar_rank(field, sub) == n:
                    if parity == 1:
                        return set(I0)
                    raise WrongComponent(
                        "image lies in the same isotropic component as H*")
    raise RankDeficient("no invertible selector minor found")


def _root_up_to_constant(f: Poly):
    """(g, c) with f = c * g^2, c a scalar; g sign-normalized primitive."""
    g = _sqrt_shape(f)
    g = sign_normalize(scalar_normalize(g))
    c = exact_divide(f, g * g)
    if not c.is_constant():
        raise NotASquare("squarefree obstruction in selector minor")
    return g, c.constant_value()


def _minor_content(dets: list, Dpp: PolyMatrix, n: int, patience: int, skip: set):
    """Common content of the supplied minors, refined against further minors
    of Dpp streamed in subset order (stopping at a unit or after `patience`
    consecutive stable steps)."""
    from .poly import multivariate_gcd

    content = None
    for m in dets:
        if m.is_zero():
            continue
        content = m if content is None else multivariate_gcd(content, m)
        if content.is_unit():
            return content
    if content is None:
        raise RankDeficient("all selector minors vanish")
    stable = 0
    for S in itertools.combinations(range(2 * n), n):
        if stable >= patience or content.is_unit():
            break
        if S in skip:
            continue
        m = det(Dpp.submatrix(S, range(n)))
        if m.is_zero():
            continue
        new = multivariate_gcd(content, m)
        stable = stable + 1 if new == content else 0
        content = new
    return content


def pure_spinor_of(M: PolyMatrix, frame: HyperbolicFrame, seed: int = 0,
                   certify: bool = True) -> SpinorVector:
    """Spinor coordinates of the rank-n isotropic column span of M (ambient
    coordinates).  The result is the odd pure spinor killed by every column.

    Minors of the selected columns are divided by their common content first
    (the chosen columns may span a non-saturated submodule of the image); the
    content pool is widened until the square root and divisibility steps
    succeed and the annihilation certificate passes.
    """
    n = frame.n
    ring = M.ring
    D = frame.to_frame(M)
    if not isotropy_check(M, frame):
        raise ResfoldError("column span is not isotropic")
    field = ring.field
    cols = None
    for trial in range(3):
        rng = random.Random(("spinor-cols", seed, trial).__repr__())
        rows = _numeric_matrix(D, _random_assignment(D.ring, rng))
        piv = _pivot_columns(field, rows)
        if len(piv) == n:
            cols = piv
            break
    if cols is None:
        raise RankDeficient(f"column rank at random points is below n = {n}")
    Dpp = D.submatrix(range(2 * n), cols)
    I0 = _find_cell(Dpp, n, seed)
    sel = _selector_rows(I0, n)
    g = Dpp.submatrix(sel, range(n))
    P0 = det(g)
    pos = {r: t for t, r in enumerate(sel)}

    # raw row-replacement minors
    zero = ring.zero()
    nums = [[zero] * n for _ in range(n)]
    pooled = {tuple(sel)}
    for j in range(n):
        pj = pos[_fprime_row(j, I0, n)]
        for k in range(n):
            if k == j:
                continue
            rows_list = list(sel)
            rows_list[pj] = _f_row(k, I0, n)
            pooled.add(tuple(sorted(rows_list)))
            sub = PolyMatrix.from_rows(ring, [Dpp.entries[r] for r in rows_list])
            nums[k][j] = det(sub)

    pool = [P0] + [nums[k][j] for k in range(n) for j in range(n)]
    last_error = None
    for attempt, patience in enumerate((2 * n, 8 * n, None)):
        if patience is None:
            patience = 1 << 62  # exhaust the stream
        content = _minor_content(pool, Dpp, n, patience, pooled)
        try:
            return _extract_from_cell(M, D, Dpp, frame, I0, sel, pos, P0, nums,
                                      content, certify)
        except (NotASquare, NotDivisible, _CertificateFailed) as exc:
            last_error = exc
            continue
    raise NotASquare(f"spinor coordinates are not defined over the ring: {last_error}")


class _CertificateFailed(ResfoldError):
    pass


def _extract_from_cell(M, D, Dpp, frame, I0, sel, pos, P0, nums, content, certify):
    n = frame.n
    ring = M.ring
    field = ring.field

    def normalized(p):
        if p.is_zero() or content.is_unit():
            return p
        return exact_divide(p, content)

    lam0, c0 = _root_up_to_constant(normalized(P0))
    cinv = field.inv(c0)
    zero = ring.zero()
    psi_rows = [[zero] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if k == j or nums[k][j].is_zero():
                continue
            psi_rows[k][j] = exact_divide(normalized(nums[k][j]), lam0).scale(cinv)
    Psi = PolyMatrix.from_rows(ring, psi_rows)
    for k in range(n):
        for j in range(n):
            if not (Psi.entries[k][j] + Psi.entries[j][k]).is_zero():
                raise _CertificateFailed("graph matrix is not alternating")

    coeffs = {}
    I0t = tuple(sorted(I0))
    for I in subsets_of_parity(n, 1):
        K = tuple(sorted(set(I) ^ set(I0)))
        m = len(K) // 2
        if m == 0:
            val = lam0
        else:
            pf = pfaffian(Psi, K)
            if pf.is_zero():
                continue
            val = pf if m == 1 else exact_divide(pf, lam0 ** (m - 1))
            sigma = clifford_word_sign(I0t, K)
            if sigma < 0:
                val = -val
        if not val.is_zero():
            coeffs[I] = val
    u = SpinorVector.make(ring, n, 1, coeffs)
    if certify:
        for j in range(M.ncols):
            img = clifford_action(u, D.column(j))
            if not img.is_zero():
                raise _CertificateFailed("spinor annihilation certificate failed")
    return u


def spinor_coordinates(delta3: PolyMatrix, frame: HyperbolicFrame, seed: int = 0) -> SpinorVector:
    """Spinor coordinates of im(delta3); requires the image isotropic and in
    the component opposite to H* (WrongComponent otherwise)."""
    return pure_spinor_of(delta3, frame, seed=seed)


# -- the spinor-squared pairing into Pluecker coordinates ------------------------


@lru_cache(maxsize=None)
def _pairing_model(n: int):
    """Generic odd-cell model over F_32003: spinor coefficients and the graph
    matrix as polynomials in the n(n-1)/2 entries of a generic skew matrix.
    Used to calibrate the quadratic pairing coefficients."""
    field = CoefficientField.prime_field(32003)
    names = [f"p_{k}_{l}" for k in range(n) for l in range(k + 1, n)]
    ring = PolyRing(field, names)
    zero = ring.zero()
    psi = [[zero] * n for _ in range(n)]
    for k in range(n):
        for l in range(k + 1, n):
            v = ring.var(f"p_{k}_{l}")
            psi[k][l] = v
            psi[l][k] = -v
    Psi = PolyMatrix.from_rows(ring, psi)
    I0 = (0,)
    lam = {}
    for I in subsets_of_parity(n, 1):
        K = tuple(sorted(set(I) ^ set(I0)))
        if not K:
            lam[I] = ring.one()
            continue
        pf = pfaffian(Psi, K)
        if pf.is_zero():
            continue
        sigma = clifford_word_sign(I0, K)
        lam[I] = pf if sigma > 0 else -pf
    # graph matrix of the model in global rows
    rows = [[zero] * n for _ in range(2 * n)]
    for j in range(n):
        rows[_fprime_row(j, set(I0), n)][j] = ring.one()
        for k in range(n):
            rows[_f_row(k, set(I0), n)][j] = rows[_f_row(k, set(I0), n)][j] + psi[k][j]
    D = PolyMatrix.from_rows(ring, rows)
    return ring, lam, D


@lru_cache(maxsize=None)
def pairing_table(n: int, subset: tuple):
    """Coefficient table of the quadratic map sending a pair of odd spinors to
    the Pluecker coordinate on `subset`: list of (I, J, c) with the identity
    p_subset = sum c * lam_I * lam_J on the whole component.

    The table is solved once on the generic odd-cell model; signs are frozen
    by the wedge conventions of this module.
    """
    ring, lam, D = _pairing_model(n)
    field = ring.field
    p_s = det(D.submatrix(tuple(sorted(subset)), range(n)))
    E = frozenset(i for i in subset if i < n)
    F = frozenset(i - n for i in subset if i >= n)
    Fc = frozenset(range(n)) - F
    core = E & Fc
    free = sorted((E | Fc) - core)
    pairs = []
    seen = set()
    for r in range(len(free) + 1):
        for T in itertools.combinations(free, r):
            A = tuple(sorted(core | set(T)))
            Bset = tuple(sorted(core | (set(free) - set(T))))
            if len(A) % 2 != 1 or len(Bset) % 2 != 1:
                continue
            key = (A, Bset) if A <= Bset else (Bset, A)
            if key in seen:
                continue
            seen.add(key)
            pairs.append(key)
    if not pairs:
        return ()
    products = []
    for (A, Bset) in pairs:
        pa, pb = lam.get(A), lam.get(Bset)
        products.append((pa * pb) if pa is not None and pb is not None else ring.zero())
    monomials = sorted({m for q in products for m in q.terms} | set(p_s.terms))
    if not monomials:
        return ()
    midx = {m: i for i, m in enumerate(monomials)}
    rows = [[field.zero()] * len(pairs) for _ in monomials]
    rhs = [field.zero()] * len(monomials)
    for j, q in enumerate(products):
        for m, c in q.terms.items():
            rows[midx[m]][j] = c
    for m, c in p_s.terms.items():
        rhs[midx[m]] = c
    sol = _solve_linear(field, rows, rhs)
    if sol is None:
        raise ResfoldError("pairing calibration failed")
    table = []
    for (A, Bset), c in zip(pairs, sol):
        if c != 0:
            lift = c if c <= field.p // 2 else c - field.p
            if abs(lift) > 2:
                raise ResfoldError("pairing coefficient out of expected range")
            table.append((A, Bset, lift))
    return tuple(table)


def _solve_linear(field, rows, rhs):
    """One solution of rows * x = rhs over the field, or None."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(x, inv) for x in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nrows):
        if mat[r][ncols] != 0:
            return None
    x = [field.zero()] * ncols
    for r, col in enumerate(pivots):
        x[col] = mat[r][ncols]
    return x


def pairing_apply(lam: SpinorVector, subset) -> Poly:
    """Value of the quadratic pairing on the given row subset."""
    table = pairing_table(lam.n, tuple(sorted(subset)))
    ring = lam.ring
    acc = ring.zero()
    d = lam.as_dict()
    for (A, B, c) in table:
        pa, pb = d.get(A), d.get(B)
        if pa is None or pb is None:
            continue
        acc = acc + (pa * pb).scale(c)
    return acc


def distance_two_subset(I, J, n: int):
    """The row subset S(I, J) for |I xor J| <= 2: H-rows on the intersection
    plus the smaller exchanged index, H*-rows on the complement of the union
    plus the same index."""
    I, J = set(I), set(J)
    sym = I ^ J
    if len(sym) not in (0, 2):
        raise ResfoldError("subset correspondence needs |I xor J| <= 2")
    e_rows = set(I & J)
    f_rows = set(range(n)) - (I | J)
    if sym:
        a = min(sym)
        e_rows.add(a)
        f_rows.add(a)
    return tuple(sorted([r for r in e_rows] + [n + r for r in f_rows]))


# -- the w lift -----------------------------------------------------------------


def build_w(B, frame: HyperbolicFrame, lam: SpinorVector) -> PolyMatrix:
    """Lift through delta_3 of the dual of x -> x . lam, columns indexed by
    even subsets in (size, lex) order; the empty-subset column comes first.

    The dual identification (H + H*)* = H + H* swaps the blocks with no sign:
    the column for subset K has H-part the e_K-coefficients of e'_j . lam and
    H*-part those of e_i . lam.
    """
    from .groebner import column_span

    n = frame.n
    ring = lam.ring
    delta3 = B.d(3)
    span = column_span(delta3)
    wedges = [wedge_op(lam, i) for i in range(n)]
    contractions = [contract_op(lam, i) for i in range(n)]
    cols = []
    for K in subsets_of_parity(n, 0):
        target_frame = [contractions[j].coefficient(K) for j in range(n)] \
            + [wedges[i].coefficient(K) for i in range(n)]
        target = frame.from_frame(target_frame)
        cols.append(span.lift(target))
    rows = [[c[i] for c in cols] for i in range(delta3.ncols)]
    W = PolyMatrix.from_rows(ring, rows)
    # re-expansion of the defining identity
    for idx, K in enumerate(subsets_of_parity(n, 0)):
        target_frame = [contractions[j].coefficient(K) for j in range(n)] \
            + [wedges[i].coefficient(K) for i in range(n)]
        target = frame.from_frame(target_frame)
        img = delta3.apply(W.column(idx))
        if any(a != b for a, b in zip(img, target)):
            raise ResfoldError("w lift re-expansion failed")
    return W


# -- summand classification -------------------------------------------------------


def _summand_checks(M: PolyMatrix, frame: HyperbolicFrame, seed: int):
    n = frame.n
    if not isotropy_check(M, frame):
        raise NotASummand("columns do not span an isotropic submodule")
    D = frame.to_frame(M)
    field = M.ring.field
    rng = random.Random(("summand", seed).__repr__())
    rows = _numeric_matrix(D, _random_assignment(D.ring, rng))
    if scalar_rank(field, rows) != n:
        raise NotASummand(f"rank at a random point is not {n}")
    return D


def component_test(M: PolyMatrix, frame: HyperbolicFrame, seed: int = 0) -> str:
    """Whether the isotropic summand sits in the component of H* or the
    opposite one, detected by the parity of the surviving spinor cells."""
    D = _summand_checks(M, frame, seed)
    try:
        _find_cell(D if D.ncols == frame.n else _shrink_columns(D, frame.n, seed),
                   frame.n, seed)
        return "opposite"
    except WrongComponent:
        return "same-as-H*"


def _shrink_columns(D: PolyMatrix, n: int, seed: int) -> PolyMatrix:
    field = D.ring.field
    for trial in range(3):
        rng = random.Random(("shrink", seed, trial).__repr__())
        rows = _numeric_matrix(D, _random_assignment(D.ring, rng))
        piv = _pivot_columns(field, rows)
        if len(piv) == n:
            return D.submatrix(range(D.nrows), piv)
    raise RankDeficient("cannot select independent columns")


def singleton_unit_test(M: PolyMatrix, frame: HyperbolicFrame, seed: int = 0) -> bool:
    """Equivalent unit-ideal tests of the singleton-unit criterion: the
    (n-1)-minors of the projection onto H* span the unit ideal, iff the
    singleton spinor coordinates do."""
    from .groebner import is_unit_ideal
    from .matpoly import minors_ideal

    D = _summand_checks(M, frame, seed)
    n = frame.n
    P = D.submatrix(range(n, 2 * n), range(D.ncols))
    proj_test = is_unit_ideal(minors_ideal(P, n - 1))
    try:
        lam = pure_spinor_of(M, frame, seed=seed)
        lam_test = is_unit_ideal([p for p in lam.singleton_row() if not p.is_zero()])
    except WrongComponent:
        # H*-component summands: the projection is full rank there
        lam_test = proj_test
    if proj_test != lam_test:
        raise ResfoldError("projection and spinor unit tests disagree")
    return proj_test


def big_cell_graph(M: PolyMatrix, frame: HyperbolicFrame, seed: int = 0) -> PolyMatrix:
    """Recover the alternating map phi: H* -> H whose graph is the given
    summand; NotInCell when the projection onto H* is not invertible."""
    D = _summand_checks(M, frame, seed)
    n = frame.n
    if D.ncols != n:
        D = _shrink_columns(D, n, seed)
    top = D.submatrix(range(n), range(n))
    bottom = D.submatrix(range(n, 2 * n), range(n))
    dt = det(bottom)
    if not dt.is_unit():
        raise NotInCell("projection onto H* is singular")
    from .matpoly import adjugate

    inv = adjugate(bottom).scale(M.ring.field.inv(dt.constant_value()))
    phi = top @ inv
    for i in range(n):
        if not phi.entries[i][i].is_zero():
            raise NotInCell("graph matrix has a nonzero diagonal")
        for j in range(n):
            if not (phi.entries[i][j] + phi.entries[j][i]).is_zero():
                raise NotInCell("graph matrix is not alternating")
    # re-span: [phi; I] equals D times the inverse of the bottom block
    graph = phi.vstack(PolyMatrix.identity(M.ring, n))
    if not (graph - (D @ inv)).is_zero():
        raise NotInCell("re-spanning check failed")
    return phi
