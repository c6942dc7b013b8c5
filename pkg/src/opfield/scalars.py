"""Exact scalar arithmetic: rationals and word-sized prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixed characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Fp(self.v + other.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Fp(self.v - other.v, self.p)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Fp(other.v - self.v, self.p)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return Fp(self.v * other.v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(self.v * pow(other.v, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return Fp(1, self.p) / self ** (-e)
        return Fp(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __bool__(self):
        return self.v != 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class SpecError(ValueError):
    """Malformed mathematical spec (bad characteristic, grades, names...)."""


@dataclass(frozen=True)
class FieldSpec:
    """A computable base field: Q or F_p, with ordered transcendental generators."""

    char: int = 0
    gens: tuple[str, ...] = ()

    def __post_init__(self):
        if self.char != 0 and not is_prime(self.char):
            raise SpecError(f"characteristic {self.char} is not 0 or a prime")
        if len(set(self.gens)) != len(self.gens):
            raise SpecError("duplicate generator names")
        for g in self.gens:
            if not g or not g[0].isalpha():
                raise SpecError(f"bad generator name {g!r}")

    def scalar(self, x):
        """Coerce an int, string like '3/2', Fraction or Fp into this field."""
        if isinstance(x, Fp):
            if self.char != x.p:
                raise SpecError("scalar from wrong characteristic")
            return x
        if isinstance(x, Fraction):
            if self.char == 0:
                return x
            den = x.denominator % self.char
            if den == 0:
                raise SpecError(f"{x} has no image in F_{self.char}")
            return Fp(x.numerator, self.char) / Fp(den, self.char)
        if isinstance(x, int):
            return Fraction(x) if self.char == 0 else Fp(x, self.char)
        if isinstance(x, str):
            return self.scalar(Fraction(x))
        raise SpecError(f"cannot coerce {x!r} to a scalar")

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else Fp(0, self.char)

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else Fp(1, self.char)


def scalar_str(c) -> str:
    """Canonical text for a scalar coefficient."""
    if isinstance(c, Fp):
        return str(c.v)
    if isinstance(c, Fraction):
        return str(c)
    return str(c)
