"""The ring Z² = Z × Z with the twisted product.

``(m, n) * (m', n') = (mm' + nn', mn' + m'n)``.  Super lengths, orders and
multiplicities all take values here: the first component counts even
composition factors, the second odd ones.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Z2Value:
    even: int = 0
    odd: int = 0

    def __post_init__(self):
        # bool is an int subclass; reject floats and friends early
        if not isinstance(self.even, int) or not isinstance(self.odd, int):
            raise TypeError(f"Z2Value components must be integers, got {self.even!r}, {self.odd!r}")

    def __add__(self, other: Z2Value) -> Z2Value:
        if not isinstance(other, Z2Value):
            return NotImplemented
        return Z2Value(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other: Z2Value) -> Z2Value:
        if not isinstance(other, Z2Value):
            return NotImplemented
        return Z2Value(self.even - other.even, self.odd - other.odd)

    def __neg__(self) -> Z2Value:
        return Z2Value(-self.even, -self.odd)

    def __mul__(self, other):
        if isinstance(other, Z2Value):
            return z2_mul(self, other)
        if isinstance(other, int):
            return z2_scale(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.even or self.odd)

    def sdim(self) -> int:
        """Image under the ring homomorphism ``(m, n) -> m - n``."""
        return self.even - self.odd

    def swap(self) -> Z2Value:
        """Parity shift: exchanges the even and odd counts."""
        return Z2Value(self.odd, self.even)

    def total(self) -> int:
        return self.even + self.odd

    def to_json(self) -> list[int]:
        return [self.even, self.odd]

    @classmethod
    def from_json(cls, data) -> Z2Value:
        even, odd = data
        return cls(int(even), int(odd))

    def __repr__(self) -> str:
        return f"({self.even},{self.odd})"


ZERO = Z2Value(0, 0)
ONE = Z2Value(1, 0)
ODD_ONE = Z2Value(0, 1)


def z2_mul(a: Z2Value, b: Z2Value) -> Z2Value:
    return Z2Value(a.even * b.even + a.odd * b.odd, a.even * b.odd + a.odd * b.even)


def z2_scale(k: int, a: Z2Value) -> Z2Value:
    return Z2Value(k * a.even, k * a.odd)


def z2_sum(values) -> Z2Value:
    total = ZERO
    for v in values:
        total = total + v
    return total
