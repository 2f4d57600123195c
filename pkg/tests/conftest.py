import random

import pytest

from resfold.fields import QQ, CoefficientField
from resfold.poly import PolyRing

F101 = CoefficientField.prime_field(101)


@pytest.fixture(params=["q", "fp101"])
def any_field(request):
    return QQ if request.param == "q" else F101


@pytest.fixture
def rng():
    return random.Random(20240501)


def random_poly(ring: PolyRing, rng: random.Random, degree=2, terms=3):
    out = ring.zero()
    for _ in range(terms):
        c = ring.field.random_scalar(rng, 4)
        exp = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            if ring.nvars:
                exp[rng.randrange(ring.nvars)] += 1
        if c != 0:
            out = out + ring.monomial(tuple(exp), c)
    return out


def nonzero_poly(ring, rng, degree=2, terms=3):
    while True:
        p = random_poly(ring, rng, degree, terms)
        if not p.is_zero():
            return p
