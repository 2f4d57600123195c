"""The backward construction: unfold a self-dual length-4 complex along a
hyperbolic frame into a length-3 resolution, via spinor coordinates and the
w lift.

Stored shape of the output (bases frozen):
  A_0 = R, A_1 = H* (basis e'_1..e'_n via the frame), A_2 = B_1* (dual
  basis), A_3 = B_0* + R;
  d_1 = singleton spinor coordinates, d_2 = (d_2(B) restricted to H)^T,
  d_3 = [d_4(B) | w restricted to the empty-subset column].
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .complexes import FreeComplex, be_acyclicity, check_complex
from .errors import ResfoldError, WrongComponent
from .groebner import codimension, grade_at_least
from .matpoly import PolyMatrix, minors_ideal
from .spinor import (HyperbolicFrame, SpinorVector, build_w, clifford_action,
                     contract_op, pure_spinor_of, spinor_coordinates,
                     standard_gram, subsets_of_parity, wedge_op)


def build_A(B: FreeComplex, frame: HyperbolicFrame, lam: SpinorVector,
            w: PolyMatrix) -> FreeComplex:
    """Assemble the length-3 complex from (d_4, w|_R, d_2|_H, lam|_singletons)."""
    if B.length != 4:
        raise ResfoldError("need a length-4 complex")
    if lam.parity != 1:
        raise WrongComponent("spinor coordinates must be odd "
                             "(image opposite to the H* component)")
    n = frame.n
    ring = B.ring
    p, q = n - 2, B.ranks[0] + 2
    if B.ranks != (q - 2, p + q, 2 * n, p + q, q - 2):
        raise ResfoldError(f"ranks {B.ranks} do not fit the self-dual format")
    d1 = PolyMatrix.from_rows(ring, [lam.singleton_row()])
    # d_2 = dual of delta_2 restricted to H; rows indexed by the frame's H
    E_H = PolyMatrix.from_scalars(ring, [[row[t] for t in range(n)] for row in frame.embed])
    d2 = (B.d(2) @ E_H).transpose()
    w0 = PolyMatrix.from_rows(ring, [[w.entries[i][0]] for i in range(w.nrows)])
    d3 = B.d(4).hstack(w0)
    A = FreeComplex(ring, (1, n, p + q, q - 1), (d1, d2, d3))
    A.validate()
    return A


def unfold(B: FreeComplex, frame: HyperbolicFrame, seed: int = 0):
    """Convenience pipeline: spinor coordinates, w lift, then build_A.
    Returns (A, lam, w)."""
    lam = spinor_coordinates(B.d(3), frame, seed=seed)
    w = build_w(B, frame, lam)
    return build_A(B, frame, lam, w), lam, w


@dataclass
class GradeIVerdict:
    grade: object  # exact value, or ("atleast", 3)
    route: str
    acyclicity: object

    @property
    def ok(self) -> bool:
        if isinstance(self.grade, tuple):
            met = True
        else:
            met = self.grade >= 3
        return met and self.acyclicity is not None and self.acyclicity.acyclic

    def __str__(self):
        lines = [f"grade I: {self.grade} (via {self.route})"]
        if self.acyclicity is not None:
            lines.append(str(self.acyclicity))
        return "\n".join(lines)


def certify_grade_I(A: FreeComplex, route: str = "auto", exact: bool = False) -> GradeIVerdict:
    """Certify grade I >= 3 and assert acyclicity of the unfolded complex.

    Routes: "d1" computes the grade of the entry ideal of d_1 directly;
    "d2" certifies through the maximal minors of the middle differential,
    which generate an ideal with the same radical and are cheaper; "auto"
    tries the d_2 certificate first.
    """
    gens1 = [g for g in A.d(1).row(0) if not g.is_zero()]
    if any(g.is_unit() for g in gens1):
        return GradeIVerdict(math.inf, "d1 unit", be_acyclicity(A, exact=exact))
    n = A.ranks[1]
    if route in ("auto", "d2"):
        gens2 = minors_ideal(A.d(2), n - 1)
        if grade_at_least(gens2, 3):
            acyc = be_acyclicity(A, exact=exact)
            verdict = GradeIVerdict(("atleast", 3), "d2 minors, same radical", acyc)
            if not acyc.acyclic:
                raise ResfoldError("unfold theorem violated: grade certified "
                                   "but the output is not acyclic")
            return verdict
        if route == "d2":
            return GradeIVerdict(codimension(gens2), "d2 minors, same radical", None)
    g = codimension(gens1)
    acyc = be_acyclicity(A, exact=exact) if g >= 3 else None
    if g >= 3 and not acyc.acyclic:
        raise ResfoldError("unfold theorem violated: grade certified "
                           "but the output is not acyclic")
    return GradeIVerdict(g, "d1 entries", acyc)


# -- frame search -------------------------------------------------------------


def _move_swap(embed: list, lam: SpinorVector, i: int):
    """Exchange e_i with e'_i (flips the spinor parity); the spinor transforms
    by the odd Clifford element e_i - e'_i."""
    n = lam.n
    for r in range(2 * n):
        embed[r][i], embed[r][n + i] = embed[r][n + i], embed[r][i]
    return wedge_op(lam, i).add(contract_op(lam, i).scale(-1))


def _move_sl(embed: list, lam: SpinorVector, i: int, j: int, t):
    """e_i += t e_j (and e'_j -= t e'_i); spinor gains -t e_j ^ i(e_i .)."""
    n = lam.n
    field = lam.ring.field
    for r in range(2 * n):
        embed[r][i] = field.add(embed[r][i], field.mul(t, embed[r][j]))
        embed[r][n + j] = field.sub(embed[r][n + j], field.mul(t, embed[r][n + i]))
    tpol = lam.ring.const(t)
    return lam.add(wedge_op(contract_op(lam, i, tpol), j).scale(-1))


def _move_rot_up(embed: list, lam: SpinorVector, i: int, j: int, t):
    """e'_j += t e_i, e'_i -= t e_j; spinor gains t e_i ^ e_j ^ (.)."""
    n = lam.n
    field = lam.ring.field
    for r in range(2 * n):
        embed[r][n + j] = field.add(embed[r][n + j], field.mul(t, embed[r][i]))
        embed[r][n + i] = field.sub(embed[r][n + i], field.mul(t, embed[r][j]))
    tpol = lam.ring.const(t)
    return lam.add(wedge_op(wedge_op(lam, j, tpol), i))


def _move_rot_down(embed: list, lam: SpinorVector, i: int, j: int, t):
    """e_j += t e'_i, e_i -= t e'_j; spinor gains t i_j(i_i(.))."""
    n = lam.n
    field = lam.ring.field
    for r in range(2 * n):
        embed[r][j] = field.add(embed[r][j], field.mul(t, embed[r][n + i]))
        embed[r][i] = field.sub(embed[r][i], field.mul(t, embed[r][n + j]))
    tpol = lam.ring.const(t)
    return lam.add(contract_op(contract_op(lam, i, tpol), j))


@dataclass
class HSearchReport:
    trials: int
    found: bool

    def __str__(self):
        return f"frame search: {self.trials} moves, {'found' if self.found else 'NOT FOUND'}"


def _candidate_grade3(B: FreeComplex, embed: list, n: int, cap: int = 160) -> bool:
    """Cheap certificate that the candidate frame yields grade >= 3.

    Uses the middle differential of the would-be unfolded complex (a constant
    multiple of d_2(B), so no spinor work): its maximal minors generate an
    ideal with the same radical as the spinor singleton ideal, and the
    monomial height of their leading terms is a valid lower bound.
    """
    from .groebner import monomial_codim
    from .matpoly import minors_stream
    from .poly import scalar_normalize

    ring = B.ring
    E_H = PolyMatrix.from_scalars(ring, [[row[t] for t in range(n)] for row in embed])
    d2c = (B.d(2) @ E_H).transpose()
    lts = set()
    count = 0
    for _, m in minors_stream(d2c, n - 1):
        if m.is_zero():
            continue
        m = scalar_normalize(m)
        if m.is_unit():
            return True
        lts.add(m.leading_monomial())
        count += 1
        if count % 16 == 0 and monomial_codim(lts) >= 3:
            return True
        if count >= cap:
            break
    return bool(lts) and monomial_codim(lts) >= 3


def search_H(B: FreeComplex, budget: int = 100, seed: int = 0,
             start: HyperbolicFrame | None = None, restart_every: int = 12):
    """Randomized realization of the frame-improvement procedure: random
    special-linear moves, hyperbolic rotations with parameter 1 or random,
    and component-fixing swaps, accepting when the singleton coordinate ideal
    reaches grade 3.  Returns (HyperbolicFrame or None, HSearchReport).

    Moves act combinatorially on the spinor coefficients; an accepted frame is
    re-verified by a fresh spinor extraction.
    """
    ring = B.ring
    n = B.ranks[2] // 2
    if start is None:
        start = HyperbolicFrame(ring, n, tuple(
            tuple(ring.field.one() if i == j else ring.field.zero() for j in range(2 * n))
            for i in range(2 * n)))
    rng = random.Random(("search_H", seed).__repr__())

    def initial():
        embed = [list(r) for r in start.embed]
        try:
            lam = pure_spinor_of(B.d(3), start, seed=seed)
        except WrongComponent:
            lam = None
        if lam is None:
            frame_embed = [row[:] for row in embed]
            swap_frame = HyperbolicFrame(ring, n, tuple(
                tuple(r) for r in _swapped(frame_embed, n)))
            lam = pure_spinor_of(B.d(3), swap_frame, seed=seed)
            embed = [list(r) for r in swap_frame.embed]
        return embed, lam

    def _swapped(embed_rows, n):
        out = [row[:] for row in embed_rows]
        for r in range(2 * n):
            out[r][n - 1], out[r][2 * n - 1] = out[r][2 * n - 1], out[r][n - 1]
        return out

    one = ring.field.one()

    def macro_move(embed, lam):
        """One randomized move: mostly Weyl-type compositions of the root
        moves (which keep the frame sparse, where the grade certificates have
        traction), seasoned with unipotent root moves."""
        r = rng.random()
        i, j = rng.sample(range(n), 2)
        if r < 0.55:
            lam = _move_swap(embed, lam, i)
            lam = _move_swap(embed, lam, j)
        elif r < 0.80:
            lam = _move_sl(embed, lam, i, j, one)
            lam = _move_sl(embed, lam, j, i, ring.field.neg(one))
            lam = _move_sl(embed, lam, i, j, one)
        else:
            t = one if rng.random() < 0.5 else ring.field.random_scalar(rng, 3)
            if t == 0:
                t = one
            kind = rng.choice(("sl", "up", "down"))
            if kind == "sl":
                lam = _move_sl(embed, lam, i, j, t)
            elif kind == "up":
                lam = _move_rot_up(embed, lam, i, j, t)
            else:
                lam = _move_rot_down(embed, lam, i, j, t)
        return lam

    def promising(embed, lam):
        gens = [p for p in lam.singleton_row() if not p.is_zero()]
        if not gens:
            return False
        if grade_at_least(gens, 3, exact_fallback=False):
            return True
        nnz = sum(1 for row in embed for x in row if x != 0)
        if nnz <= 3 * n:
            return _candidate_grade3(B, embed, n, cap=64)
        return False

    embed, lam = initial()
    trials = 0
    while trials < budget:
        trials += 1
        # certificate-only grade tests keep each trial cheap; an accepted
        # frame is re-verified through a fresh spinor extraction
        if promising(embed, lam):
            frame = HyperbolicFrame(ring, n, tuple(tuple(r) for r in embed),
                                    start.ambient_gram)
            check = pure_spinor_of(B.d(3), frame, seed=seed)
            row = [p for p in check.singleton_row() if not p.is_zero()]
            if row and (grade_at_least(row, 3, exact_fallback=False)
                        or _candidate_grade3(B, embed, n, cap=256)):
                return frame, HSearchReport(trials, True)
        if trials % restart_every == 0:
            embed, lam = initial()
            continue
        lam = macro_move(embed, lam)
    return None, HSearchReport(budget, False)
