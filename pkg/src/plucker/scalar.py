"""Exact scalars: rationals (the default) and prime fields.

Rationals are plain :class:`fractions.Fraction` / ``int`` values; Python
ints are accepted anywhere a rational is expected because they never
round.  Prime-field values are :class:`ModP` residues.  Only one field is
in play per computation; mixing residues with different moduli raises
:class:`FieldMismatchError`.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random
from typing import Union


class FieldMismatchError(TypeError):
    pass


class ModP:
    """Residue modulo a prime, stored as the canonical value in [0, p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        if isinstance(value, Fraction):
            if value.denominator % modulus == 0:
                raise ZeroDivisionError("denominator not invertible mod %d" % modulus)
            value = value.numerator * pow(value.denominator, -1, modulus)
        object.__setattr__(self, "value", int(value) % modulus)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("ModP values are immutable")

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.modulus != self.modulus:
                raise FieldMismatchError(
                    "F_%d and F_%d elements mixed" % (self.modulus, other.modulus))
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return ModP(other, self.modulus).value
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.value, self.modulus)

    def __pos__(self):
        return self

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.modulus)
        return ModP(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.modulus) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ModP(pow(self.value, k, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == ModP(other, self.modulus).value
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return "ModP(%d, %d)" % (self.value, self.modulus)

    def __str__(self):
        return str(self.value)


Scalar = Union[int, Fraction, ModP]


class RationalField:
    """The field of rational numbers."""

    modulus = None
    name = "q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return parse_rational(x)
        if isinstance(x, ModP):
            raise FieldMismatchError("prime-field element used as a rational")
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        return parse_rational(text)

    def random(self, rng: Random, bound: int) -> int:
        return rng.randint(-bound, bound)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p for a prime p (primality checked by deterministic Miller-Rabin)."""

    name = "fp"

    def __init__(self, modulus: int):
        if modulus < 2 or not _probably_prime(modulus):
            raise ValueError("%d is not prime" % modulus)
        self.modulus = modulus

    def __call__(self, x) -> ModP:
        if isinstance(x, str):
            return ModP(parse_rational(x), self.modulus)
        if isinstance(x, ModP):
            if x.modulus != self.modulus:
                raise FieldMismatchError("wrong modulus")
            return x
        return ModP(x, self.modulus)

    def parse(self, text: str) -> ModP:
        return self(text)

    def random(self, rng: Random, bound: int) -> ModP:
        return ModP(rng.randint(-bound, bound), self.modulus)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF", self.modulus))

    def __repr__(self):
        return "GF(%d)" % self.modulus


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def _probably_prime(n: int) -> bool:
    if n < 4:
        return n in (2, 3)
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
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


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty scalar")
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ZeroDivisionError("zero denominator in %r" % text)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def parse_field(spec: str):
    """``"q"`` for the rationals, ``"fp:<prime>"`` for a prime field."""
    spec = spec.strip().lower()
    if spec in ("q", "qq", "rationals"):
        return QQ
    if spec.startswith("fp:"):
        return GF(int(spec[3:]))
    raise ValueError("unknown field %r (expected q or fp:<prime>)" % spec)


def field_of(x):
    if isinstance(x, ModP):
        return GF(x.modulus)
    return QQ


def div(a, b):
    """Exact quotient; int/int yields a Fraction instead of a float."""
    if b == 0:
        raise ZeroDivisionError("division by zero")
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return a / b


def inverse(a):
    return div(1, a)


def is_zero(a) -> bool:
    return a == 0


def normalize(a):
    """Collapse integral Fractions to ints (keeps hot loops on fast ints)."""
    if isinstance(a, Fraction) and a.denominator == 1:
        return a.numerator
    return a


def format_scalar(a) -> str:
    if isinstance(a, ModP):
        return str(a.value)
    a = Fraction(a)
    if a.denominator == 1:
        return str(a.numerator)
    return "%d/%d" % (a.numerator, a.denominator)
