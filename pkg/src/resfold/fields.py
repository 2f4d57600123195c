"""Exact coefficient fields: the rationals and odd prime fields.

Rational scalars are `fractions.Fraction`; prime-field scalars are plain ints
reduced to the canonical range 0..p-1.  Every operation is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import NotASquare, ResfoldError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class CoefficientField:
    """The rationals, or F_p for an odd prime p (1/2 must exist)."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "QQ":
            self.p = None
        elif kind == "FP":
            if p is None or p == 2 or not _is_prime(p):
                raise ResfoldError(f"prime field needs an odd prime, got {p}")
            self.p = p
        else:
            raise ResfoldError(f"unknown field kind {kind!r}")
        self.kind = kind

    @staticmethod
    def rationals() -> "CoefficientField":
        return CoefficientField("QQ")

    @staticmethod
    def prime_field(p: int) -> "CoefficientField":
        return CoefficientField("FP", p)

    # -- basics --------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, CoefficientField)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "QQ" if self.kind == "QQ" else f"FP({self.p})"

    def tag(self) -> str:
        """Identifier used in the interchange file format."""
        return "q" if self.kind == "QQ" else f"fp:{self.p}"

    @staticmethod
    def from_tag(tag: str) -> "CoefficientField":
        if tag == "q":
            return CoefficientField.rationals()
        if tag.startswith("fp:"):
            return CoefficientField.prime_field(int(tag[3:]))
        raise ResfoldError(f"unknown field tag {tag!r}")

    # -- scalar arithmetic ---------------------------------------------
    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def coerce(self, x):
        """Turn an int/Fraction into a scalar of this field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a / b if self.p is None else a * pow(b, -1, self.p) % self.p

    def is_zero(self, a) -> bool:
        return a == 0

    # -- square roots ---------------------------------------------------
    def sqrt(self, a):
        """Exact square root of a scalar, or raise NotASquare."""
        if self.p is None:
            if a < 0:
                raise NotASquare(f"{a} is negative")
            num, den = a.numerator, a.denominator
            rn, rd = isqrt(num), isqrt(den)
            if rn * rn != num or rd * rd != den:
                raise NotASquare(f"{a} is not a rational square")
            return Fraction(rn, rd)
        return self._sqrt_mod(a)

    def _sqrt_mod(self, a):
        p = self.p
        a %= p
        if a == 0:
            return 0
        if pow(a, (p - 1) // 2, p) != 1:
            raise NotASquare(f"{a} is not a square mod {p}")
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t * t % p, 1
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    def is_positive_normal(self, a) -> bool:
        """Sign-normalization predicate: positive over Q, in 1..(p-1)/2 over F_p."""
        if self.p is None:
            return a > 0
        return 1 <= a <= (self.p - 1) // 2

    # -- formatting ------------------------------------------------------
    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.div(self.coerce(int(num)), self.coerce(int(den)))
        return self.coerce(int(text))

    # -- randomness ------------------------------------------------------
    def random_nonzero(self, rng, bound: int = 1000):
        if self.p is None:
            v = rng.randint(1, bound)
            return Fraction(v if rng.random() < 0.5 else -v)
        return rng.randrange(1, self.p)

    def random_scalar(self, rng, bound: int = 3):
        """Small scalar (possibly zero): used by randomized searches."""
        if self.p is None:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(self.p)


QQ = CoefficientField.rationals()
