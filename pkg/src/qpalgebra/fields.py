"""Exact coefficient fields: the rationals and prime fields F_p.

All coefficient arithmetic in the engine is exact.  Scalars are either
``fractions.Fraction`` values (default) or ``FpElement`` values for a prime
field.  Both support ``+ - * /``, equality and truthiness, so the algebra
layer is field-agnostic.
"""

from __future__ import annotations

import random
from fractions import Fraction

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FpElement:
    """An element of F_p with operator arithmetic.

    Values are kept reduced in ``[0, p)``.  Mixing elements of different
    characteristic raises.
    """

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _check(self, other: "FpElement") -> None:
        if self.p != other.p:
            raise ValueError(f"mixed characteristics {self.p} and {other.p}")

    def _coerce(self, other):
        if isinstance(other, FpElement):
            self._check(other)
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.value * pow(o.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field of exact rationals, backed by ``fractions.Fraction``."""

    name = "Q"

    def one(self) -> Fraction:
        return Fraction(1)

    def zero(self) -> Fraction:
        return Fraction(0)

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def random_nonzero(self, rng: random.Random) -> Fraction:
        # Small numerators/denominators keep downstream gcd work cheap.
        num = rng.choice([n for n in range(-9, 10) if n != 0])
        den = rng.randint(1, 9)
        return Fraction(num, den)

    def format(self, value: Fraction) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


class PrimeField:
    """The prime field F_p; ``p`` defaults to 32003."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    def coerce(self, value) -> FpElement:
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise ValueError(f"element of F_{value.p} used in F_{self.p}")
            return value
        if isinstance(value, int):
            return FpElement(value, self.p)
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/", 1)
                return FpElement(int(num), self.p) / FpElement(int(den), self.p)
            return FpElement(int(value), self.p)
        if isinstance(value, Fraction):
            return FpElement(value.numerator, self.p) / FpElement(value.denominator, self.p)
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def random_nonzero(self, rng: random.Random) -> FpElement:
        return FpElement(rng.randint(1, self.p - 1), self.p)

    def format(self, value: FpElement) -> str:
        return str(value.value)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


RATIONALS = RationalField()


def field_from_spec(spec: dict):
    """Build a field from its JSON description ``{"type": "Q"}`` or ``{"type": "Fp", "p": p}``."""
    kind = spec.get("type")
    if kind == "Q":
        return RATIONALS
    if kind == "Fp":
        return PrimeField(int(spec.get("p", DEFAULT_PRIME)))
    raise ValueError(f"unknown field spec {spec!r}")


def field_to_spec(field) -> dict:
    if isinstance(field, RationalField):
        return {"type": "Q"}
    if isinstance(field, PrimeField):
        return {"type": "Fp", "p": field.p}
    raise TypeError(f"not a field: {field!r}")
