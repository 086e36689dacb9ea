"""Exact ground fields: the rationals and prime fields GF(p).

Scalars are plain payloads (``Fraction`` for Q, ``int`` in [0, p) for GF(p));
all arithmetic goes through the field object so matrix code stays generic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError

try:
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - gmpy2 is a soft speedup
    _ratio = Fraction


class RationalField:
    """Exact rationals; backed by gmpy2.mpq when available (API-compatible)."""

    name = "Q"
    char = 0

    def zero(self):
        return _ratio(0)

    def one(self):
        return _ratio(1)

    def from_int(self, n: int):
        return _ratio(n)

    def from_fraction(self, fr):
        return _ratio(fr.numerator, fr.denominator)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a) -> bool:
        return not a

    def eq(self, a, b) -> bool:
        return a == b

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, tok: str):
        try:
            return self.from_fraction(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {tok!r}")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF {p}"
        self.char = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, fr: Fraction):
        den = fr.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator {fr.denominator} vanishes mod {self.p}")
        return fr.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def eq(self, a, b) -> bool:
        return (a - b) % self.p == 0

    def fmt(self, a) -> str:
        return str(a % self.p)

    def parse(self, tok: str):
        try:
            return self.from_fraction(Fraction(tok))
        except ValueError:
            raise ParseError(f"bad scalar {tok!r}")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def parse_field(spec: str):
    """Parse a field spec: 'Q' or 'GF p'."""
    parts = spec.split()
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] == "GF":
        try:
            return PrimeField(int(parts[1]))
        except ValueError as e:
            raise ParseError(str(e))
    raise ParseError(f"unknown field spec {spec!r}")
