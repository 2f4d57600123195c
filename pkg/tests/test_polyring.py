import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F101, nonzero_poly, random_poly
from resfold.errors import NotASquare, NotDivisible, RingMismatch
from resfold.fields import QQ, CoefficientField
from resfold.poly import (Poly, PolyRing, exact_divide, monic,
                          multivariate_gcd, perfect_square_root,
                          ring_arithmetic, specialize)


def ring_q(*names):
    return PolyRing(QQ, names or ("x", "y", "z"))


def test_product_expansion():
    R = ring_q("x", "y")
    x, y = R.gens()
    assert (x + y) * (x - y) == R.parse("x^2-y^2")


def test_additive_identity():
    R = ring_q()
    f = R.parse("3*x^2*y-z+1")
    assert ring_arithmetic(f, R.zero(), "add") == f


def test_mod3_product():
    # brute-force oracle: convolve coefficient dicts mod 3
    F3 = CoefficientField.prime_field(3)
    R = PolyRing(F3, ("x",))
    x, = R.gens()
    got = (x + 1) * (x + 2)
    oracle = {}
    for (e1, c1) in {(1,): 1, (0,): 1}.items():
        for (e2, c2) in {(1,): 1, (0,): 2}.items():
            k = (e1[0] + e2[0],)
            oracle[k] = (oracle.get(k, 0) + c1 * c2) % 3
    oracle = {k: v for k, v in oracle.items() if v}
    assert got.terms == oracle
    assert str(got) == "x^2+2"


def test_ring_mismatch():
    R1, R2 = ring_q("x"), ring_q("y")
    with pytest.raises(RingMismatch):
        R1.gens()[0] + R2.gens()[0]


def test_ring_axioms_randomized(any_field):
    ring = PolyRing(any_field, ("x", "y", "z"))
    rng = random.Random(11)
    for _ in range(200):
        a, b, c = (random_poly(ring, rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a


def test_exact_divide_examples():
    R = ring_q("x", "y")
    x, y = R.gens()
    assert exact_divide(x * x - y * y, x - y) == x + y
    f = R.parse("7*x^3-y+2")
    assert exact_divide(f, R.one()) == f
    with pytest.raises(NotDivisible):
        exact_divide(x * x + y * y, x)


def test_exact_divide_roundtrip(any_field):
    ring = PolyRing(any_field, ("x", "y"))
    rng = random.Random(5)
    for _ in range(60):
        f = nonzero_poly(ring, rng)
        g = nonzero_poly(ring, rng)
        assert exact_divide(f * g, g) == f


def test_gcd_examples():
    R = ring_q("x", "y")
    x, y = R.gens()
    assert multivariate_gcd(x * x * y, x * y * y) == x * y
    f = R.parse("2*x^2-y")
    assert multivariate_gcd(f, f) == monic(f)
    g = multivariate_gcd((x + y) ** 2 * (x - y), (x + y) * (x - y) ** 2)
    # oracle: the gcd must divide both inputs and be divisible by (x+y)(x-y)
    assert exact_divide((x + y) ** 2 * (x - y), g) is not None
    assert exact_divide((x + y) * (x - y) ** 2, g) is not None
    assert g == (x + y) * (x - y)
    assert multivariate_gcd(f, R.zero()) == monic(f)


def test_gcd_divides_both(any_field):
    ring = PolyRing(any_field, ("x", "y"))
    rng = random.Random(9)
    for _ in range(40):
        f, g = nonzero_poly(ring, rng), nonzero_poly(ring, rng)
        d = multivariate_gcd(f, g)
        exact_divide(f, d)
        exact_divide(g, d)


def test_square_root_examples():
    R = ring_q("x", "y")
    x, y = R.gens()
    assert perfect_square_root(x * x + 2 * x * y + y * y) == x + y
    assert perfect_square_root(R.const(4) * x * x) == 2 * x
    with pytest.raises(NotASquare):
        perfect_square_root(x * x + y * y)


def test_square_root_roundtrip(any_field):
    ring = PolyRing(any_field, ("x", "y", "z"))
    rng = random.Random(13)
    for _ in range(40):
        f = nonzero_poly(ring, rng)
        r = perfect_square_root(f * f)
        assert r * r == f * f
        assert r.ring.field.is_positive_normal(r.leading_coefficient())


def test_square_root_nonsquarefree():
    R = ring_q("x", "y")
    x, y = R.gens()
    f = (x + y) ** 4 * (x - 2 * y) ** 2
    r = perfect_square_root(f)
    assert r * r == f


def test_square_root_frobenius_case():
    F3 = CoefficientField.prime_field(3)
    R = PolyRing(F3, ("x",))
    x, = R.gens()
    assert perfect_square_root(x ** 6) == x ** 3


def test_specialize():
    R = ring_q("x", "y")
    x, y = R.gens()
    assert specialize(x * x + y, {"x": 2, "y": 1}) == Fraction(5)
    part = specialize(x * x + y, {"x": 2})
    assert part == y + 4


def test_specialize_multigraded_scaling():
    # homogeneous f at a scaled point scales by the multidegree character
    R = PolyRing(QQ, ("x", "y"), {"x": (1, 0), "y": (0, 1)})
    x, y = R.gens()
    f = x * x * y
    a, b = Fraction(3), Fraction(5)
    base = specialize(f, {"x": 2, "y": 7})
    scaled = specialize(f, {"x": 2 * a, "y": 7 * b})
    d = f.multidegree()
    assert scaled == base * a ** d[0] * b ** d[1]


def test_canonical_printing_and_parsing(any_field):
    ring = PolyRing(any_field, ("x_1_1", "y"))
    rng = random.Random(3)
    for _ in range(50):
        f = random_poly(ring, rng)
        assert ring.parse(str(f)) == f
    assert str(ring.zero()) == "0"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(0, 4), st.integers(0, 4)),
                max_size=6))
def test_parse_print_roundtrip_hypothesis(spec):
    R = ring_q("x", "y")
    f = R.from_terms({(e1, e2): c for c, e1, e2 in spec})
    assert R.parse(str(f)) == f


def test_prime_field_requires_odd_prime():
    with pytest.raises(Exception):
        CoefficientField.prime_field(2)
    with pytest.raises(Exception):
        CoefficientField.prime_field(15)
