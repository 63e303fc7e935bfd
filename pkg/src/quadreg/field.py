"""Coefficient fields: the rationals and prime fields of odd characteristic.

Rational elements are ``gmpy2.mpq`` values (always in lowest terms with a
positive denominator).  Prime-field elements are plain ``int`` values in
``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

DEFAULT_PRIME = 32003


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field, identified by its characteristic (0 means QQ)."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p == 0:
            return
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if p < 0 or not gmpy2.is_prime(p):
            raise FieldError(f"characteristic must be 0 or an odd prime, got {p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls(p)

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    @property
    def is_exact_char0(self) -> bool:
        return self.characteristic == 0

    @property
    def label(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def zero(self):
        return mpq(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.characteristic == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction, mpq or ``"a/b"`` string into the field."""
        p = self.characteristic
        if isinstance(x, str):
            x = Fraction(x.strip())
        if p == 0:
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        if isinstance(x, int):
            return x % p
        q = mpq(x) if not isinstance(x, Fraction) else mpq(x.numerator, x.denominator)
        num, den = int(q.numerator), int(q.denominator)
        if den % p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
        return num * pow(den, -1, p) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / a
        return pow(a, -1, self.characteristic)

    def neg(self, a):
        return -a if self.characteristic == 0 else (-a) % self.characteristic

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else a * b % self.characteristic

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_square(self, a) -> bool:
        """Whether ``a`` is a square in the field (QQ: square of a rational)."""
        if not a:
            return True
        if self.characteristic == 0:
            if a < 0:
                return False
            return gmpy2.is_square(a.numerator) and gmpy2.is_square(a.denominator)
        return pow(a, (self.characteristic - 1) // 2, self.characteristic) == 1

    def sqrt(self, a):
        """A square root of ``a``; raises ValueError when none exists."""
        if not self.is_square(a):
            raise ValueError(f"{a} is not a square in {self.label}")
        if not a:
            return self.zero
        if self.characteristic == 0:
            return mpq(gmpy2.isqrt(a.numerator), gmpy2.isqrt(a.denominator))
        return _tonelli_shanks(a, self.characteristic)

    def to_str(self, a) -> str:
        """Printable form; prime-field elements use the symmetric range."""
        if self.characteristic == 0:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        p = self.characteristic
        return str(a if a <= p // 2 else a - p)

    def to_fraction(self, a) -> Fraction:
        if self.characteristic == 0:
            return Fraction(int(a.numerator), int(a.denominator))
        return Fraction(a)


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


QQ = FieldSpec(0)
