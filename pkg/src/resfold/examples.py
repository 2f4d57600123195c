"""Generators for all worked inputs: Koszul and split complexes, syzygy-built
resolutions of desk-scale ideals, and the Gulliksen-Negard complex with its
hyperbolic frames.

Gulliksen-Negard conventions (frozen):
  * ring Q[x_1_1 .. x_n_n], variable x_i_j graded by the i-th row character
    plus the j-th column character in Z^{2n};
  * B_1 and B_3 carry matrix-unit bases listed column-major, i.e. label (i,j)
    appears at position (j-1)*n + (i-1); the label (i,j) of B_3 names the
    functional tr(e_ji . -) so that d_4 = d_1^T holds on the nose;
  * B_2 uses the 2n^2-2 trace-pair basis, upper isotropic row first, then the
    lower row, pairs and diagonals each in lexicographic order.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .complexes import FreeComplex, SelfDualStructure, complex_from_diffs
from .errors import ResfoldError
from .fields import QQ, CoefficientField
from .groebner import column_span, syzygy_generators
from .matpoly import PolyMatrix, adjugate, constant_solver
from .poly import Poly, PolyRing
from .spinor import HyperbolicFrame, standard_gram


def koszul(ring: PolyRing, elements) -> FreeComplex:
    """Koszul complex on a sequence of ring elements."""
    elements = list(elements)
    n = len(elements)
    diffs = []
    for k in range(1, n + 1):
        rows_idx = list(itertools.combinations(range(n), k - 1))
        cols_idx = list(itertools.combinations(range(n), k))
        pos = {S: i for i, S in enumerate(rows_idx)}
        rows = [[ring.zero()] * len(cols_idx) for _ in rows_idx]
        for c, S in enumerate(cols_idx):
            for t, s in enumerate(S):
                rest = tuple(x for x in S if x != s)
                val = elements[s] if t % 2 == 0 else -elements[s]
                rows[pos[rest]][c] = rows[pos[rest]][c] + val
        diffs.append(PolyMatrix.from_rows(ring, rows))
    return complex_from_diffs(ring, diffs)


def split_A(p: int, q: int, ring: PolyRing, b: PolyMatrix | None = None):
    """Split complex 0 -> A_3 -> A_3 + M -> R + M -> R with M of rank p+1.

    Returns the complex alone; pair with `dga.split_multiplication` for its
    closed-form products (optionally corrected by b).
    """
    if p < 1 or q < 2:
        raise ResfoldError("need p >= 1 and q >= 2")
    one, zero = ring.one(), ring.zero()
    n3, nM = q - 1, p + 1
    d3 = PolyMatrix.from_rows(ring, [[one if i == j else zero for j in range(n3)] for i in range(n3)]
                              + [[zero] * n3 for _ in range(nM)])
    d2 = PolyMatrix.from_rows(ring, [[zero] * (n3 + nM) for _ in range(1)]
                              + [[one if j == n3 + i else zero for j in range(n3 + nM)] for i in range(nM)])
    d1 = PolyMatrix.from_rows(ring, [[one] + [zero] * nM])
    return complex_from_diffs(ring, [d1, d2, d3])


def split_B(p: int, q: int, ring: PolyRing, phi: PolyMatrix | None = None):
    """Split self-dual complex with im(d_3) spanned by e_1, e'_i + phi(e'_i).

    phi is an alternating n x n matrix (n = p+2); only its columns 2..n act.
    Returns (complex, self-dual structure, standard hyperbolic frame).
    """
    from .spinor import standard_frame

    if p < 1 or q < 3:
        raise ResfoldError("need p >= 1 and q >= 3")
    n = p + 2
    one, zero = ring.one(), ring.zero()
    if phi is None:
        phi = PolyMatrix.zeros(ring, n, n)
    if (phi.nrows, phi.ncols) != (n, n):
        raise ResfoldError(f"phi must be {n}x{n}")
    for i in range(n):
        if not phi.entries[i][i].is_zero():
            raise ResfoldError("phi must be alternating")
        for j in range(n):
            if not (phi.entries[i][j] + phi.entries[j][i]).is_zero():
                raise ResfoldError("phi must be alternating")
    nB0 = q - 2
    cols = []
    for _ in range(nB0):
        cols.append([zero] * (2 * n))
    col = [zero] * (2 * n)
    col[0] = one
    cols.append(col)
    for i in range(1, n):
        col = [phi.entries[j][i] for j in range(n)] + [zero] * n
        col[n + i] = one
        cols.append(col)
    delta3 = PolyMatrix.from_rows(ring, [[c[r] for c in cols] for r in range(2 * n)])
    G = PolyMatrix.from_scalars(ring, standard_gram(ring.field, n))
    delta2 = delta3.transpose() @ G
    delta4 = PolyMatrix.from_rows(ring, [[one if i == j else zero for j in range(nB0)] for i in range(nB0)]
                                  + [[zero] * nB0 for _ in range(n)])
    delta1 = delta4.transpose()
    B = complex_from_diffs(ring, [delta1, delta2, delta3, delta4])
    return B, SelfDualStructure(G), standard_frame(ring, n)


def _minimalize_columns(M: PolyMatrix) -> PolyMatrix:
    """Drop generators lying in the span of the others (minimal generating set)."""
    from .groebner import ColumnSpan

    cols = M.columns()
    keep = list(range(len(cols)))
    changed = True
    while changed:
        changed = False
        for idx in list(keep):
            others = [cols[j] for j in keep if j != idx]
            if not others:
                continue
            span = ColumnSpan(others, M.ring, M.nrows)
            if span.contains(cols[idx]):
                keep.remove(idx)
                changed = True
                break
    rows = [[cols[j][i] for j in keep] for i in range(M.nrows)]
    return PolyMatrix.from_rows(M.ring, rows)


def resolution_by_syzygies(d1: PolyMatrix, length: int) -> FreeComplex:
    """Iterate minimalized syzygy computations to the requested length."""
    diffs = [d1]
    for _ in range(length - 1):
        S = _minimalize_columns(syzygy_generators(diffs[-1]))
        diffs.append(S)
    return complex_from_diffs(d1.ring, diffs)


def resolve_square_of_max_ideal(field: CoefficientField = QQ) -> FreeComplex:
    """Resolution of (x,y,z)^2 over k[x,y,z], built from the six quadrics by
    iterated syzygies; format (1, 6, 8, 3)."""
    ring = PolyRing(field, ("x", "y", "z"))
    x, y, z = ring.gens()
    gens = [x * x, x * y, x * z, y * y, y * z, z * z]
    d1 = PolyMatrix.from_rows(ring, [gens])
    F = resolution_by_syzygies(d1, 3)
    if F.ranks != (1, 6, 8, 3):
        raise ResfoldError(f"unexpected format {F.ranks}")
    return F


def generic_2x4_minors(field: CoefficientField = QQ) -> FreeComplex:
    """Resolution of the 2x2 minors of a generic 2x4 matrix (grade 3, six
    generators, generically Gorenstein); format (1, 6, 8, 3)."""
    names = [f"a_{i}_{j}" for i in (1, 2) for j in (1, 2, 3, 4)]
    ring = PolyRing(field, names)
    a = {(i, j): ring.var(f"a_{i}_{j}") for i in (1, 2) for j in (1, 2, 3, 4)}
    gens = []
    for j1, j2 in itertools.combinations((1, 2, 3, 4), 2):
        gens.append(a[(1, j1)] * a[(2, j2)] - a[(1, j2)] * a[(2, j1)])
    d1 = PolyMatrix.from_rows(ring, [gens])
    F = resolution_by_syzygies(d1, 3)
    if F.ranks != (1, 6, 8, 3):
        raise ResfoldError(f"unexpected format {F.ranks}")
    return F


# -- Gulliksen-Negard ---------------------------------------------------------


def gn_ring(n: int, field: CoefficientField = QQ) -> PolyRing:
    names = [f"x_{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    multideg = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = [0] * (2 * n)
            d[i - 1] = 1
            d[n + j - 1] = 1
            multideg[f"x_{i}_{j}"] = tuple(d)
    return PolyRing(field, names, multideg)


def _unit_pair(n: int, kind, i, j, field):
    """Constant pair (P, Q) of n x n scalar matrices for a B_2 basis element."""
    P = [[field.zero()] * n for _ in range(n)]
    Q = [[field.zero()] * n for _ in range(n)]
    one, half = field.one(), field.div(field.one(), field.coerce(2))
    if kind == "A":
        P[i - 1][j - 1] = one
    elif kind == "B":
        Q[i - 1][j - 1] = one
    elif kind == "Bneg":
        Q[i - 1][j - 1] = field.neg(one)
    elif kind == "diag":
        P[i - 1][i - 1] = one
        Q[i - 1][i - 1] = one
    elif kind == "diaghalf":
        P[i - 1][i - 1] = half
        P[n - 1][n - 1] = field.neg(half)
        Q[n - 1][n - 1] = half
        Q[i - 1][i - 1] = field.neg(half)
    return P, Q


def gn_b2_basis(n: int, field: CoefficientField):
    """The 2n^2-2 trace-pair basis: upper row then lower row of the table."""
    basis = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        basis.append(_unit_pair(n, "A", i, j, field))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        basis.append(_unit_pair(n, "B", j, i, field))
    for i in range(1, n):
        basis.append(_unit_pair(n, "diag", i, i, field))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        basis.append(_unit_pair(n, "A", j, i, field))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        basis.append(_unit_pair(n, "Bneg", i, j, field))
    for i in range(1, n):
        basis.append(_unit_pair(n, "diaghalf", i, i, field))
    return basis


def _b1_labels(n: int):
    """Column-major matrix-unit labels (i, j)."""
    return [(i, j) for j in range(1, n + 1) for i in range(1, n + 1)]


def _matrix_coords(M: PolyMatrix, labels) -> list:
    """Coordinates of a polynomial n x n matrix over the matrix-unit basis."""
    return [M.entries[i - 1][j - 1] for (i, j) in labels]


def gn_complex(n: int, field: CoefficientField = QQ):
    """The Gulliksen-Negard self-dual resolution of R/I_{n-1}(X) for a generic
    n x n matrix X, with form, multigrading, and the standard table frame.

    Returns (complex, self-dual structure, frame with H = upper table row).
    """
    from .spinor import HyperbolicFrame

    if n < 2:
        raise ResfoldError("need n >= 2")
    ring = gn_ring(n, field)
    fld = field
    X = PolyMatrix.from_rows(ring, [[ring.var(f"x_{i}_{j}") for j in range(1, n + 1)]
                                    for i in range(1, n + 1)])
    labels = _b1_labels(n)
    basis = gn_b2_basis(n, fld)
    nb = len(basis)

    def pair_to_polymat(P):
        return PolyMatrix.from_rows(ring, [[ring.const(P[i][j]) for j in range(n)] for i in range(n)])

    # delta_2 : B_2 -> B_1,  (A,B) -> AX - XB
    cols2 = []
    for (P, Q) in basis:
        Pm, Qm = pair_to_polymat(P), pair_to_polymat(Q)
        img = (Pm @ X) - (X @ Qm)
        cols2.append(_matrix_coords(img, labels))
    delta2 = PolyMatrix.from_rows(ring, [[c[r] for c in cols2] for r in range(n * n)])

    # delta_1 : B_1 -> B_0,  A -> tr(A adj(X));  entry at label (i,j) is adj(X)_{ji}
    adjX = adjugate(X)
    delta1 = PolyMatrix.from_rows(ring, [[adjX.entries[j - 1][i - 1] for (i, j) in labels]])

    # Gram matrix of <(A,B),(C,D)> = tr(AC - BD); must be standard hyperbolic
    def tr_pair(b1, b2):
        P1, Q1 = b1
        P2, Q2 = b2
        acc = fld.zero()
        for i in range(n):
            for k in range(n):
                acc = fld.add(acc, fld.mul(P1[i][k], P2[k][i]))
                acc = fld.sub(acc, fld.mul(Q1[i][k], Q2[k][i]))
        return acc

    gram = [[tr_pair(basis[i], basis[j]) for j in range(nb)] for i in range(nb)]
    expected = standard_gram(fld, nb // 2)
    if gram != expected:
        raise ResfoldError("trace-pair basis is not hyperbolic")
    G = PolyMatrix.from_scalars(ring, gram)

    delta3 = G @ delta2.transpose()
    delta4 = delta1.transpose()

    # multidegree labels
    ones = (1,) * (2 * n)
    twos = (2,) * (2 * n)

    def eps(i, block):
        v = [0] * (2 * n)
        v[(0 if block == 0 else n) + i - 1] = 1
        return tuple(v)

    def vadd(a, b, sign=1):
        return tuple(x + sign * y for x, y in zip(a, b))

    deg_b0 = ((0,) * (2 * n),)
    deg_b1 = tuple(vadd(vadd(ones, eps(i, 0), -1), eps(j, 1), -1) for (i, j) in labels)
    deg_b3 = tuple(vadd(vadd(ones, eps(i, 0)), eps(j, 1)) for (i, j) in labels)
    deg_b4 = (twos,)
    deg_b2 = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        deg_b2.append(vadd(vadd(ones, eps(i, 0), -1), eps(j, 0)))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        deg_b2.append(vadd(vadd(ones, eps(i, 1), -1), eps(j, 1)))
    for i in range(1, n):
        deg_b2.append(ones)
    for i, j in itertools.combinations(range(1, n + 1), 2):
        deg_b2.append(vadd(vadd(ones, eps(j, 0), -1), eps(i, 0)))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        deg_b2.append(vadd(vadd(ones, eps(j, 1), -1), eps(i, 1)))
    for i in range(1, n):
        deg_b2.append(ones)
    degrees = (deg_b0, deg_b1, tuple(deg_b2), deg_b3, deg_b4)

    B = FreeComplex(ring, (1, n * n, nb, n * n, 1), (delta1, delta2, delta3, delta4), degrees)
    B.validate()
    frame = HyperbolicFrame(ring, nb // 2,
                            tuple(tuple(fld.one() if i == j else fld.zero() for j in range(nb))
                                  for i in range(nb)))
    return B, SelfDualStructure(G, twist_degree=twos), frame


def gn_delta3_by_formula(n: int, B: FreeComplex) -> PolyMatrix:
    """Independent construction of delta_3 from (XC, CX): column (i,j) holds
    the B_2 coordinates of (X e_ji, e_ji X); used as a cross-check oracle."""
    ring = B.ring
    fld = ring.field
    X = PolyMatrix.from_rows(ring, [[ring.var(f"x_{i}_{j}") for j in range(1, n + 1)]
                                    for i in range(1, n + 1)])
    basis = gn_b2_basis(n, fld)
    columns = []
    for (P, Q) in basis:
        flat = [fld.coerce(P[i][j]) for i in range(n) for j in range(n)]
        flat += [fld.coerce(Q[i][j]) for i in range(n) for j in range(n)]
        columns.append(flat)
    one_pair = [fld.one() if (i == j) else fld.zero() for i in range(n) for j in range(n)] * 2
    columns.append(one_pair)
    solve = constant_solver(fld, columns)
    cols = []
    for (i, j) in _b1_labels(n):
        E = PolyMatrix.zeros(ring, n, n)
        rows = [list(r) for r in E.entries]
        rows[j - 1][i - 1] = ring.one()
        E = PolyMatrix(ring, tuple(tuple(r) for r in rows))
        P, Q = X @ E, E @ X
        flat = [P.entries[a][b] for a in range(n) for b in range(n)]
        flat += [Q.entries[a][b] for a in range(n) for b in range(n)]
        coords = solve(flat)
        cols.append(coords[:-1])  # drop the Span(I,I) coordinate
    return PolyMatrix.from_rows(ring, [[c[r] for c in cols] for r in range(len(basis))])


def gn_paper_H(B: FreeComplex, S: SelfDualStructure) -> "HyperbolicFrame":
    """The published rank-8 isotropic H for n = 3, completed to a hyperbolic
    frame by the paired table vectors (a column permutation of the table)."""
    from .spinor import HyperbolicFrame

    if B.ranks != (1, 9, 16, 9, 1):
        raise ResfoldError("the published frame is the n = 3 witness")
    fld = B.ring.field
    e_cols = [8, 10, 11, 13, 1, 4, 7, 14]
    f_cols = [0, 2, 3, 5, 9, 12, 15, 6]
    embed = [[fld.zero()] * 16 for _ in range(16)]
    for t, c in enumerate(e_cols):
        embed[c][t] = fld.one()
    for t, c in enumerate(f_cols):
        embed[c][8 + t] = fld.one()
    return HyperbolicFrame(B.ring, 8, tuple(tuple(r) for r in embed))


def random_alternating(ring: PolyRing, n: int, rng: random.Random, degree: int = 1,
                       terms: int = 2) -> PolyMatrix:
    """Random alternating n x n matrix with small polynomial entries."""
    rows = [[ring.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = random_poly(ring, rng, degree, terms)
            rows[i][j] = p
            rows[j][i] = -p
    return PolyMatrix.from_rows(ring, rows)


def random_poly(ring: PolyRing, rng: random.Random, degree: int = 1, terms: int = 2) -> Poly:
    out = ring.zero()
    for _ in range(terms):
        c = ring.field.random_scalar(rng, 2)
        exp = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            if ring.nvars:
                exp[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(tuple(exp), c) if c != 0 else out
    return out
