"""Exact arithmetic in Z[1/2]."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, "DyadicRational"]


class DyadicRational:
    """A number ``numerator / 2**exponent``, kept normalized.

    Normalized means the numerator is odd, or the value is zero with
    exponent 0. Instances are immutable and hashable.
    """

    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        else:
            while exponent and numerator % 2 == 0:
                numerator //= 2
                exponent -= 1
        object.__setattr__(self, "_num", numerator)
        object.__setattr__(self, "_exp", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    @classmethod
    def coerce(cls, x) -> "DyadicRational":
        if isinstance(x, DyadicRational):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, Fraction):
            den = x.denominator
            m = den.bit_length() - 1
            if den != 1 << m:
                raise ValueError(f"{x} is not a dyadic rational")
            return cls(x.numerator, m)
        raise TypeError(f"cannot convert {type(x).__name__} to DyadicRational")

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        """Parse ``p``, ``p/2^m`` or ``p/q`` with q a power of two."""
        text = text.strip()
        if "/" not in text:
            return cls(int(text))
        num, den = text.split("/", 1)
        den = den.strip()
        if den.startswith("2^"):
            return cls(int(num), int(den[2:]))
        return cls.coerce(Fraction(int(num), int(den)))

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    def is_integer(self) -> bool:
        return self._exp == 0

    def __bool__(self):
        return self._num != 0

    def __eq__(self, other):
        if isinstance(other, (int, DyadicRational)):
            o = DyadicRational.coerce(other)
            return self._num == o._num and self._exp == o._exp
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self._exp == 0:
            return hash(self._num)
        return hash(self.to_fraction())

    def __lt__(self, other):
        return self.to_fraction() < DyadicRational.coerce(other).to_fraction()

    def __add__(self, other):
        try:
            o = DyadicRational.coerce(other)
        except TypeError:
            return NotImplemented
        m = max(self._exp, o._exp)
        return DyadicRational(
            (self._num << (m - self._exp)) + (o._num << (m - o._exp)), m
        )

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self._num, self._exp)

    def __sub__(self, other):
        try:
            return self + (-DyadicRational.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return DyadicRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = DyadicRational.coerce(other)
        except TypeError:
            return NotImplemented
        return DyadicRational(self._num * o._num, self._exp + o._exp)

    __rmul__ = __mul__

    def halve(self, times: int = 1) -> "DyadicRational":
        return DyadicRational(self._num, self._exp + times)

    def __repr__(self):
        return f"DyadicRational({self._num}, {self._exp})"

    def __str__(self):
        if self._exp == 0:
            return str(self._num)
        return f"{self._num}/2^{self._exp}"

    def wire(self) -> str:
        """Always the ``p/2^m`` form used by the vector output format."""
        return f"{self._num}/2^{self._exp}"


ZERO = DyadicRational(0)
ONE = DyadicRational(1)
