import random

import pytest

from resfold.complexes import (be_acyclicity, check_complex, check_selfdual,
                               is_split_exact, resolved_ideal)
from resfold.errors import ResfoldError
from resfold.examples import (gn_b2_basis, gn_complex, gn_delta3_by_formula,
                              gn_paper_H, generic_2x4_minors, koszul,
                              resolve_square_of_max_ideal, split_A, split_B)
from resfold.fields import QQ, CoefficientField
from resfold.groebner import ideal_equal
from resfold.matpoly import PolyMatrix, minors_ideal
from resfold.poly import PolyRing, specialize


def test_gn_formats():
    B2, S2, f2 = gn_complex(2)
    assert B2.ranks == (1, 4, 6, 4, 1)
    B3, S3, f3 = gn_complex(3)
    assert B3.ranks == (1, 9, 16, 9, 1)


def test_gn_n2_resolves_all_entries():
    B, S, f = gn_complex(2)
    ring = B.ring
    assert ideal_equal(resolved_ideal(B), list(ring.gens()))
    assert be_acyclicity(B).acyclic


def test_gn_checks_pass():
    for n in (2, 3):
        B, S, f = gn_complex(n)
        assert check_complex(B).ok
        assert check_selfdual(B, S)
    B3, S3, f3 = gn_complex(3)
    assert be_acyclicity(B3).acyclic


def test_gn_delta4_entry():
    B, S, f = gn_complex(3)
    assert str(B.d(4).entries[0][0]) == "-x_2_3*x_3_2+x_2_2*x_3_3"


def test_gn_delta3_formula_agreement():
    B, S, f = gn_complex(3)
    assert (gn_delta3_by_formula(3, B) - B.d(3)).is_zero()


def test_gn_differentials_homogeneous():
    for n in (2, 3):
        B, S, f = gn_complex(n)
        ring = B.ring
        for i in range(1, 5):
            d = B.d(i)
            rows_deg = B.degrees[i - 1]
            cols_deg = B.degrees[i]
            for r in range(d.nrows):
                for c in range(d.ncols):
                    p = d.entries[r][c]
                    if p.is_zero():
                        continue
                    expected = tuple(a - b for a, b in zip(cols_deg[c], rows_deg[r]))
                    assert p.multidegree() == expected


def test_gn_form_is_hyperbolic():
    from resfold.spinor import standard_gram

    B, S, f = gn_complex(3)
    gram = [[p.constant_value() for p in row] for row in S.form.entries]
    assert gram == standard_gram(B.ring.field, 8)


def test_gn_over_prime_field():
    B, S, f = gn_complex(2, CoefficientField.prime_field(101))
    assert check_complex(B).ok and check_selfdual(B, S)


def test_gn_paper_frame_valid():
    B, S, f = gn_complex(3)
    H = gn_paper_H(B, S)  # the constructor asserts the hyperbolic Gram
    from resfold.spinor import isotropy_check

    assert isotropy_check(B.d(3), H)


def test_gn_identity_specialization_graph():
    # the image of delta_3 specialized at X = identity equals the graph
    # {(A, A)}, the span of (upper row) + (skew-image) in the table basis
    B, S, f = gn_complex(3)
    ring = B.ring
    assign = {f"x_{i}_{j}": (1 if i == j else 0) for i in (1, 2, 3) for j in (1, 2, 3)}
    D = B.d(3).specialize_matrix(assign)
    # columns must be trace-equal pairs (A, A): in coordinates, the pair part
    # of each basis combination reassembles with equal components
    basis = gn_b2_basis(3, ring.field)
    for c in range(D.ncols):
        P = [[ring.field.zero()] * 3 for _ in range(3)]
        Q = [[ring.field.zero()] * 3 for _ in range(3)]
        for k, (Pb, Qb) in enumerate(basis):
            coef = D.entries[k][c].constant_value()
            if coef == 0:
                continue
            for a in range(3):
                for b in range(3):
                    P[a][b] += coef * Pb[a][b]
                    Q[a][b] += coef * Qb[a][b]
        assert P == Q


def test_resolve_square_of_max_ideal():
    A = resolve_square_of_max_ideal()
    assert A.ranks == (1, 6, 8, 3)
    rep = be_acyclicity(A)
    assert rep.acyclic
    ring = A.ring
    x, y, z = ring.gens()
    gens = [x * x, x * y, x * z, y * y, y * z, z * z]
    assert ideal_equal(resolved_ideal(A), gens)


def test_generic_2x4_minors():
    A = generic_2x4_minors()
    assert A.ranks == (1, 6, 8, 3)
    assert be_acyclicity(A).acyclic


def test_split_generators():
    ring = PolyRing(QQ, ("x", "y"))
    A = split_A(1, 3, ring)
    assert A.ranks == (1, 3, 4, 2)
    assert is_split_exact(A)
    B, S, fr = split_B(1, 3, ring)
    assert check_complex(B).ok and check_selfdual(B, S)
    # image of delta_3 = span{e_1, e_2', e_3'}
    d3 = B.d(3)
    live_rows = {i for i in range(6)
                 if any(not d3.entries[i][j].is_zero() for j in range(d3.ncols))}
    assert live_rows == {0, 4, 5}


def test_split_B_requires_alternating():
    ring = PolyRing(QQ, ("x", "y"))
    x, y = ring.gens()
    bad = PolyMatrix.from_rows(ring, [[x if i == j else ring.zero() for j in range(3)]
                                      for i in range(3)])
    with pytest.raises(ResfoldError):
        split_B(1, 3, ring, bad)


def test_koszul_resolves_sequence():
    ring = PolyRing(QQ, ("x", "y"))
    x, y = ring.gens()
    K = koszul(ring, [x, y])
    assert K.ranks == (1, 2, 1)
    assert be_acyclicity(K).acyclic
