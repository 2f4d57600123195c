"""Multiplication structure on a length-3 resolution with rank-one head.

The two product maps are encoded as matrices:
  m11 : wedge^2 F_1 -> F_2, columns indexed by pairs (i, j) with i < j,
  m12 : F_1 (x) F_2 -> F_3, columns indexed lexicographically by (k, l).
Both arise as lifts through d_2 and d_3; lifts are taken normal-form minimal
against the column modules, so the output is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import FreeComplex
from .errors import LiftFailed, NoLift, ResfoldError
from .groebner import column_span
from .matpoly import PolyMatrix


def wedge_pairs(n: int) -> list:
    return list(itertools.combinations(range(n), 2))


def pair_index(n: int) -> dict:
    return {p: k for k, p in enumerate(wedge_pairs(n))}


def wedge_coords(vector, k: int, n: int, ring):
    """Coordinates of (sum_a v_a e_a) ^ e_k in the sorted wedge basis."""
    out = [ring.zero()] * (n * (n - 1) // 2)
    idx = pair_index(n)
    for a, v in enumerate(vector):
        if v.is_zero() or a == k:
            continue
        if a < k:
            out[idx[(a, k)]] = out[idx[(a, k)]] + v
        else:
            out[idx[(k, a)]] = out[idx[(k, a)]] - v
    return out


@dataclass(frozen=True)
class MultiplicationStructure:
    m11: PolyMatrix  # wedge^2 A_1 -> A_2
    m12: PolyMatrix  # A_1 (x) A_2 -> A_3


@dataclass(frozen=True)
class BMap:
    """Correction map b : wedge^2 A_1 -> A_3 parametrizing all multiplications."""

    b: PolyMatrix


def _format_pq(A: FreeComplex) -> tuple:
    if A.length != 3 or A.ranks[0] != 1:
        raise ResfoldError("need a length-3 complex with rank-one head")
    p = A.ranks[1] - 2
    q = A.ranks[3] + 1
    if A.ranks[2] != p + q or p < 1:
        raise ResfoldError(f"ranks {A.ranks} are not of shape (1, p+2, p+q, q-1)")
    return p, q


def _m11_targets(A: FreeComplex) -> list:
    """Column (i,j) is d1(e_i) e_j - d1(e_j) e_i inside A_1."""
    ring = A.ring
    n1 = A.ranks[1]
    d1 = A.d(1)
    cols = []
    for (i, j) in wedge_pairs(n1):
        col = [ring.zero()] * n1
        col[j] = col[j] + d1.entries[0][i]
        col[i] = col[i] - d1.entries[0][j]
        cols.append(tuple(col))
    return cols


def _m12_targets(A: FreeComplex, m11: PolyMatrix) -> list:
    """Column (k,l) is d1(e_k) f_l + m11(d2(f_l) ^ e_k) inside A_2."""
    ring = A.ring
    n1, n2 = A.ranks[1], A.ranks[2]
    d1, d2 = A.d(1), A.d(2)
    cols = []
    for k in range(n1):
        for l in range(n2):
            col = [ring.zero()] * n2
            col[l] = d1.entries[0][k]
            w = wedge_coords(d2.column(l), k, n1, ring)
            corr = m11.apply(w)
            col = [a + b for a, b in zip(col, corr)]
            cols.append(tuple(col))
    return cols


def build_multiplication(A: FreeComplex) -> MultiplicationStructure:
    """Construct the product maps by lifting; raises LiftFailed when the
    complex is not exact enough for a lift to exist."""
    _format_pq(A)
    ring = A.ring
    span2 = column_span(A.d(2))
    m11_cols = []
    for t in _m11_targets(A):
        try:
            m11_cols.append(span2.lift(t))
        except NoLift as exc:
            raise LiftFailed("no lift through d_2; complex not acyclic in grade 2") from exc
    m11 = PolyMatrix.from_rows(ring, [[c[i] for c in m11_cols] for i in range(A.ranks[2])])
    span3 = column_span(A.d(3))
    m12_cols = []
    for t in _m12_targets(A, m11):
        try:
            m12_cols.append(span3.lift(t))
        except NoLift as exc:
            raise LiftFailed("no lift through d_3; complex not acyclic in grade 2") from exc
    m12 = PolyMatrix.from_rows(ring, [[c[i] for c in m12_cols] for i in range(A.ranks[3])])
    m = MultiplicationStructure(m11, m12)
    rep = verify_multiplication(A, m)
    if not rep.ok:
        raise LiftFailed(f"constructed multiplication fails verification: {rep.failures}")
    return m


@dataclass
class MultiplicationReport:
    failures: list  # ("m11"|"m12", column-label, entry-row)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_multiplication(A: FreeComplex, m: MultiplicationStructure) -> MultiplicationReport:
    """Entrywise re-expansion of the two lift identities."""
    failures = []
    n1 = A.ranks[1]
    d2prod = A.d(2) @ m.m11
    targets11 = _m11_targets(A)
    for col, (i, j) in enumerate(wedge_pairs(n1)):
        target = targets11[col]
        for r in range(A.ranks[1]):
            if d2prod.entries[r][col] != target[r]:
                failures.append(("m11", (i, j), r))
                break
    d3prod = A.d(3) @ m.m12
    targets = _m12_targets(A, m.m11)
    for col in range(len(targets)):
        k, l = divmod(col, A.ranks[2])
        for r in range(A.ranks[2]):
            if d3prod.entries[r][col] != targets[col][r]:
                failures.append(("m12", (k, l), r))
                break
    return MultiplicationReport(failures)


def apply_b_correction(A: FreeComplex, m: MultiplicationStructure, b: PolyMatrix) -> MultiplicationStructure:
    """The modified multiplication: m11 gains d_3 b, and each product e.f
    gains b(d_2(f) ^ e)."""
    ring = A.ring
    n1, n2, n3 = A.ranks[1], A.ranks[2], A.ranks[3]
    if (b.nrows, b.ncols) != (n3, n1 * (n1 - 1) // 2):
        raise ResfoldError("b has the wrong shape")
    m11 = m.m11 + (A.d(3) @ b)
    cols = []
    for k in range(n1):
        for l in range(n2):
            w = wedge_coords(A.d(2).column(l), k, n1, ring)
            corr = b.apply(w)
            base = m.m12.column(k * n2 + l)
            cols.append(tuple(a + c for a, c in zip(base, corr)))
    m12 = PolyMatrix.from_rows(ring, [[c[i] for c in cols] for i in range(n3)])
    return MultiplicationStructure(m11, m12)


def multiplication_difference_b(A: FreeComplex, m1: MultiplicationStructure,
                                m2: MultiplicationStructure) -> PolyMatrix:
    """Solve m2.m11 - m1.m11 = d_3 b and verify the m12 difference follows the
    same correction pattern; returns b."""
    ring = A.ring
    span3 = column_span(A.d(3))
    diff = m2.m11 - m1.m11
    cols = []
    for j in range(diff.ncols):
        cols.append(span3.lift(diff.column(j)))
    b = PolyMatrix.from_rows(ring, [[c[i] for c in cols] for i in range(A.ranks[3])])
    if not (m2.m11 - (m1.m11 + (A.d(3) @ b))).is_zero():
        raise ResfoldError("b does not reproduce the m11 difference")
    corrected = apply_b_correction(A, m1, b)
    if not (m2.m12 - corrected.m12).is_zero():
        raise ResfoldError("m12 difference does not match the correction pattern")
    return b


def split_multiplication(p: int, q: int, b: PolyMatrix | None = None, ring=None) -> MultiplicationStructure:
    """Closed-form multiplication on the split complex of shape
    (1, p+2, p+q, q-1): the equivariant one, then the b-correction.

    Basis conventions: A_1 = [r, m_1..m_{p+1}], A_2 = [a_1..a_{q-1}, m_1..m_{p+1}],
    A_3 = [a_1..a_{q-1}].  The canonical products are r.m_i = m_i and
    r.a_k = a_k, everything else zero.
    """
    from .examples import split_A

    if ring is None:
        if b is None:
            raise ResfoldError("need a ring when b is not given")
        ring = b.ring
    A = split_A(p, q, ring)
    n1, n2, n3 = p + 2, p + q, q - 1
    zero = ring.zero()
    one = ring.one()
    pairs = wedge_pairs(n1)
    m11_rows = [[zero] * len(pairs) for _ in range(n2)]
    for col, (i, j) in enumerate(pairs):
        if i == 0:
            # r wedge m_j  ->  m_j in the M-block of A_2
            m11_rows[(q - 1) + (j - 1)][col] = one
    m11 = PolyMatrix.from_rows(ring, m11_rows)
    m12_rows = [[zero] * (n1 * n2) for _ in range(n3)]
    for l in range(q - 1):
        m12_rows[l][0 * n2 + l] = one  # r (x) a_l -> a_l
    m12 = PolyMatrix.from_rows(ring, m12_rows)
    m = MultiplicationStructure(m11, m12)
    if b is not None:
        m = apply_b_correction(A, m, b)
    return m
