"""Coalitions of sensor indices, stored as fixed-width bit masks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Coalition:
    """A subset of the sensor indices 0..n-1.

    ``bits`` is the membership mask (bit j set iff sensor j is a member) and
    ``n`` is the universe size.  Instances are immutable; ``add`` returns a
    new coalition.
    """

    bits: int
    n: int

    def __post_init__(self) -> None:
        # accept numpy integers without letting them poison bit arithmetic
        object.__setattr__(self, "bits", int(self.bits))
        object.__setattr__(self, "n", int(self.n))
        if self.n < 0:
            raise ValueError(f"universe size must be non-negative, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(
                f"bit mask {self.bits:#x} does not fit a universe of size {self.n}"
            )

    @classmethod
    def empty(cls, n: int) -> "Coalition":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Coalition":
        return cls((1 << n) - 1, n)

    @classmethod
    def of(cls, indices: Iterable[int], n: int) -> "Coalition":
        bits = 0
        for i in indices:
            i = int(i)
            if not 0 <= i < n:
                raise ValueError(f"sensor index {i} outside universe of size {n}")
            bits |= 1 << i
        return cls(bits, n)

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.n and bool((self.bits >> i) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __bool__(self) -> bool:
        return self.bits != 0

    def add(self, i: int) -> "Coalition":
        if not 0 <= i < self.n:
            raise ValueError(f"sensor index {i} outside universe of size {self.n}")
        return Coalition(self.bits | (1 << i), self.n)

    def indices(self) -> tuple[int, ...]:
        return tuple(self)
