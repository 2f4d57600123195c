import random

import pytest

from conftest import random_poly
from resfold.dga import (apply_b_correction, build_multiplication,
                         multiplication_difference_b, split_multiplication,
                         verify_multiplication, wedge_pairs)
from resfold.errors import LiftFailed
from resfold.examples import koszul, split_A
from resfold.fields import QQ
from resfold.matpoly import PolyMatrix
from resfold.poly import PolyRing


def random_b(ring, rng, p, q, degree=1):
    pairs = (p + 2) * (p + 1) // 2
    return PolyMatrix.from_rows(
        ring, [[random_poly(ring, rng, degree, 2) for _ in range(pairs)] for _ in range(q - 1)])


def test_koszul_multiplication_is_wedge():
    R = PolyRing(QQ, ("x", "y", "z"))
    K = koszul(R, R.gens())
    m = build_multiplication(K)
    assert (m.m11 - PolyMatrix.identity(R, 3)).is_zero()
    # m12 columns: e_k (x) f_l with f_l the Koszul degree-2 basis; the only
    # nonzero products are the triple wedges e_x.e_yz = e_y.e_xz(-1) = e_z.e_xy
    nz = {}
    for col in range(9):
        k, l = divmod(col, 3)
        v = m.m12.column(col)[0]
        if not v.is_zero():
            nz[(k, l)] = str(v)
    assert nz == {(0, 2): "1", (1, 1): "-1", (2, 0): "1"}


def test_split_multiplication_canonical_and_corrected(any_field):
    ring = PolyRing(any_field, ("x", "y"))
    rng = random.Random(2)
    for (p, q) in ((1, 3), (2, 4), (3, 5)):
        A = split_A(p, q, ring)
        m = split_multiplication(p, q, ring=ring)
        assert verify_multiplication(A, m).ok
        b = random_b(ring, rng, p, q)
        m2 = split_multiplication(p, q, b=b, ring=ring)
        assert verify_multiplication(A, m2).ok
        # two corrections differ exactly by the applied pattern
        b2 = random_b(ring, rng, p, q)
        m3 = split_multiplication(p, q, b=b2, ring=ring)
        got = multiplication_difference_b(A, m2, m3)
        diff = b2 - b
        assert (got - diff).is_zero()


def test_build_multiplication_on_split_differs_by_b():
    ring = PolyRing(QQ, ("x", "y"))
    A = split_A(2, 4, ring)
    built = build_multiplication(A)
    canon = split_multiplication(2, 4, ring=ring)
    b = multiplication_difference_b(A, canon, built)
    corrected = apply_b_correction(A, canon, b)
    assert (corrected.m11 - built.m11).is_zero()
    assert (corrected.m12 - built.m12).is_zero()


def test_verify_locates_bad_pair():
    R = PolyRing(QQ, ("x", "y", "z"))
    K = koszul(R, R.gens())
    m = build_multiplication(K)
    rows = [list(r) for r in m.m11.entries]
    rows[0][1] = rows[0][1] + R.one()
    from resfold.dga import MultiplicationStructure

    bad = MultiplicationStructure(PolyMatrix(R, tuple(tuple(r) for r in rows)), m.m12)
    rep = verify_multiplication(K, bad)
    assert not rep.ok
    kind, pair, row = rep.failures[0]
    assert kind == "m11" and pair == (0, 2)


def test_lift_failed_on_non_resolution():
    R = PolyRing(QQ, ("x", "y"))
    x, y = R.gens()
    z = R.zero()
    # d2 with too-small image: the wedge targets cannot lift
    d1 = PolyMatrix.from_rows(R, [["x", "y", "0"]])
    d2 = PolyMatrix.from_rows(R, [["y^2", "0", "0", "0"],
                                  ["0", "y^2", "0", "0"],
                                  ["0", "0", "1", "0"]])
    d3 = PolyMatrix.zeros(R, 4, 2)
    from resfold.complexes import FreeComplex

    F = FreeComplex(R, (1, 3, 4, 2), (d1, d2, d3), None)
    with pytest.raises(LiftFailed):
        build_multiplication(F)


def test_multiplication_transport_under_basis_change():
    # conjugating A_1 by a constant invertible matrix transports a valid
    # structure to a valid structure
    ring = PolyRing(QQ, ("x", "y"))
    A = split_A(1, 3, ring)
    m = split_multiplication(1, 3, ring=ring)
    field = ring.field
    g_rows = [[1, 1, 0], [0, 1, 2], [0, 0, 1]]
    g = PolyMatrix.from_scalars(ring, [[field.coerce(v) for v in r] for r in g_rows])
    from resfold.matpoly import scalar_inverse

    ginv = PolyMatrix.from_scalars(ring, scalar_inverse(
        field, [[field.coerce(v) for v in r] for r in g_rows]))
    from resfold.complexes import FreeComplex
    from resfold.dga import MultiplicationStructure, pair_index

    d1 = A.d(1) @ g
    d2 = ginv @ A.d(2)
    F = FreeComplex(ring, A.ranks, (d1, d2, A.d(3)))
    # transport m11: columns over wedge pairs of the new basis
    n1 = 3
    pairs = wedge_pairs(n1)
    idx = pair_index(n1)
    cols = []
    for (i, j) in pairs:
        acc = [ring.zero()] * A.ranks[2]
        for a in range(n1):
            for b in range(n1):
                ca = g.entries[a][i]
                cb = g.entries[b][j]
                if ca.is_zero() or cb.is_zero() or a == b:
                    continue
                coeff = ca * cb
                if a < b:
                    w = idx[(a, b)]
                    sgn = 1
                else:
                    w = idx[(b, a)]
                    sgn = -1
                base = m.m11.column(w)
                acc = [u + (v * coeff if sgn > 0 else -(v * coeff))
                       for u, v in zip(acc, base)]
        cols.append(acc)
    m11g = PolyMatrix.from_rows(ring, [[c[r] for c in cols] for r in range(A.ranks[2])])
    # transport m12 over A_1 (x) A_2
    n2 = A.ranks[2]
    cols12 = []
    for k in range(n1):
        for l in range(n2):
            acc = [ring.zero()] * A.ranks[3]
            for a in range(n1):
                ca = g.entries[a][k]
                if ca.is_zero():
                    continue
                base = m.m12.column(a * n2 + l)
                acc = [u + v * ca for u, v in zip(acc, base)]
            cols12.append(acc)
    m12g = PolyMatrix.from_rows(ring, [[c[r] for c in cols12] for r in range(A.ranks[3])])
    mg = MultiplicationStructure(m11g, m12g)
    assert verify_multiplication(F, mg).ok
