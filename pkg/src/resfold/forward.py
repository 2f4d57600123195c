"""The forward construction: fold a length-3 resolution with a multiplication
structure and a splitting A_3 = C + L into a self-dual length-4 complex.

Stored shape of the output (bases frozen):
  B_0 = C* (x) L, B_1 = A_2* (x) L, B_2 = (A_1* (x) L) + A_1 with the
  evident hyperbolic form, B_3 = B_1*, B_4 = B_0*;
  d_4 = the C-columns of d_3 under the basis change, d_3 = [eta((-).f); d_2(f)],
  d_2 = d_3^T G, d_1 = d_4^T.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .complexes import (FreeComplex, SelfDualStructure, acyclic_in_grade,
                        be_acyclicity, check_complex)
from .dga import MultiplicationStructure, verify_multiplication
from .errors import FormatMismatch, ResfoldError
from .groebner import codimension, grade_at_least
from .matpoly import PolyMatrix, det, minors_ideal
from .spinor import standard_gram


@dataclass(frozen=True)
class SplittingChoice:
    """Constant invertible basis change on A_3; C is spanned by the first
    q-2 new basis columns, L by the last, and eta is the projection onto L
    (the last row of the inverse)."""

    basis_change: PolyMatrix

    def __post_init__(self):
        U = self.basis_change
        if U.nrows != U.ncols:
            raise ResfoldError("basis change must be square")
        for row in U.entries:
            for p in row:
                if not p.is_constant():
                    raise ResfoldError("basis change must be constant")
        if det(U).is_zero():
            raise ResfoldError("basis change is singular")

    def eta_row(self):
        """Projection A_3 -> L as a row of field scalars."""
        from .matpoly import scalar_inverse

        U = self.basis_change
        field = U.ring.field
        rows = [[p.constant_value() for p in r] for r in U.entries]
        inv = scalar_inverse(field, rows)
        return inv[-1]


def _check_format(A: FreeComplex) -> tuple:
    if A.length != 3 or A.ranks[0] != 1:
        raise FormatMismatch("need a length-3 complex with rank-one head")
    p = A.ranks[1] - 2
    q = A.ranks[3] + 1
    if p < 1 or q < 3 or A.ranks[2] != p + q:
        raise FormatMismatch(f"ranks {A.ranks} do not fit (1, p+2, p+q, q-1) with p>=1, q>=3")
    return p, q


def build_B(A: FreeComplex, m: MultiplicationStructure, s: SplittingChoice):
    """Assemble the self-dual length-4 complex from (A, multiplication,
    splitting); raises if the multiplication does not verify."""
    p, q = _check_format(A)
    ring = A.ring
    if s.basis_change.nrows != q - 1:
        raise FormatMismatch("splitting must change basis on A_3")
    if not verify_multiplication(A, m).ok:
        raise ResfoldError("multiplication structure fails verification")
    n1, n2 = p + 2, p + q
    d3U = A.d(3) @ s.basis_change
    delta4 = d3U.submatrix(range(n2), range(q - 2))
    eta = s.eta_row()
    # X[k][l] = eta(e_k . f_l) from the m12 columns
    rows = []
    for k in range(n1):
        row = []
        for l in range(n2):
            col = m.m12.column(k * n2 + l)
            acc = ring.zero()
            for t, c in enumerate(eta):
                if c != 0 and not col[t].is_zero():
                    acc = acc + col[t].scale(c)
            row.append(acc)
        rows.append(tuple(row))
    X = PolyMatrix(ring, tuple(rows))
    delta3 = X.vstack(A.d(2))
    G = PolyMatrix.from_scalars(ring, standard_gram(ring.field, n1))
    delta2 = delta3.transpose() @ G
    delta1 = delta4.transpose()
    B = FreeComplex(ring, (q - 2, n2, 2 * n1, n2, q - 2),
                    (delta1, delta2, delta3, delta4))
    B.validate()
    return B, SelfDualStructure(G)


def grade_J(B: FreeComplex) -> float:
    """Exact grade of J_C = I_{q-2}(d_4)."""
    q2 = B.ranks[4]
    return codimension(minors_ideal(B.d(4), q2))


def _gens_J(A: FreeComplex, s: SplittingChoice) -> list:
    q = A.ranks[3] + 1
    d3U = A.d(3) @ s.basis_change
    delta4 = d3U.submatrix(range(A.ranks[2]), range(q - 2))
    return minors_ideal(delta4, q - 2)


@dataclass
class ABVerdict:
    grade_j: object  # exact value or ("atleast", k)
    hypothesis_met: bool
    complex_ok: bool
    selfdual_ok: bool
    acyclicity: object  # AcyclicityReport or None
    grade2_report: object

    @property
    def ok(self) -> bool:
        if not (self.complex_ok and self.selfdual_ok):
            return False
        if self.hypothesis_met:
            return self.acyclicity is not None and self.acyclicity.acyclic
        return self.grade2_report.acyclic

    def __str__(self):
        lines = [f"grade J_C: {self.grade_j}",
                 f"hypothesis grade >= 4: {'met' if self.hypothesis_met else 'NOT met'}",
                 f"complex identities: {'ok' if self.complex_ok else 'FAIL'}",
                 f"self-duality: {'ok' if self.selfdual_ok else 'FAIL'}"]
        if self.acyclicity is not None:
            lines.append(str(self.acyclicity))
        else:
            lines.append("acyclicity not asserted (hypothesis unmet); "
                         f"split exact in grade 2: {'ok' if self.grade2_report.acyclic else 'FAIL'}")
        return "\n".join(lines)


def theorem_AB(A: FreeComplex, m: MultiplicationStructure, s: SplittingChoice,
               exact: bool = False) -> ABVerdict:
    """Build B and test the fold theorem: with grade J_C >= 4 the output must
    be acyclic; otherwise it is still a self-dual complex, split in grade 2."""
    from .complexes import check_selfdual

    B, S = build_B(A, m, s)
    gens = _gens_J(A, s)
    met = grade_at_least(gens, 4)
    gj = ("atleast", 4) if met else codimension(gens)
    rep = check_complex(B)
    sd = check_selfdual(B, S)
    acyc = None
    grade2 = acyclic_in_grade(B, 2, exact=exact)
    if met:
        acyc = be_acyclicity(B, exact=exact)
        if not acyc.acyclic:
            raise ResfoldError("fold theorem violated: grade hypothesis met "
                               "but the output is not certified acyclic")
    return ABVerdict(gj, bool(met), rep.ok, sd, acyc, grade2)


@dataclass
class SearchReport:
    trials: int
    found: bool
    grades: list

    def __str__(self):
        out = f"search: {self.trials} trials, {'found' if self.found else 'NOT FOUND'}"
        return out


def search_C(A: FreeComplex, m: MultiplicationStructure, budget: int = 25,
             seed: int = 0):
    """Randomized search for a constant splitting with grade J_C >= 4.

    Entries are drawn uniformly from -3..3 over Q (anywhere over F_p),
    resampling singular matrices; first success by trial index wins.
    Returns (SplittingChoice or None, SearchReport).
    """
    p, q = _check_format(A)
    ring = A.ring
    field = ring.field
    grades = []
    for trial in range(budget):
        rng = random.Random(("search_C", seed, trial).__repr__())
        while True:
            rows = [[field.random_scalar(rng, 3) for _ in range(q - 1)] for _ in range(q - 1)]
            U = PolyMatrix.from_scalars(ring, rows)
            if not det(U).is_zero():
                break
        s = SplittingChoice(U)
        gens = _gens_J(A, s)
        if grade_at_least(gens, 4):
            grades.append((trial, ">=4"))
            return s, SearchReport(trial + 1, True, grades)
        grades.append((trial, codimension(gens)))
    return None, SearchReport(budget, False, grades)
