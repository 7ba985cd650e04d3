"""Finite sets of non-negative integers as packed bit vectors.

Bit k of the vector is the indicator of membership of k, stored LSB-first
within each byte (the same layout as the EFSET1 file payload).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError


@dataclass(frozen=True, eq=False)
class IntegerSet:
    """A subset of {0, ..., n_max} as a packed bit vector."""

    n_max: int
    bits: np.ndarray  # uint8, ceil((n_max+1)/8) bytes, LSB-first within byte

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise ParameterError("n_max must be non-negative")
        nbytes = (self.n_max + 8) // 8
        if self.bits.dtype != np.uint8 or self.bits.shape != (nbytes,):
            raise ParameterError("bit vector shape does not match n_max")
        # Canonical form: bits beyond n_max are zero.
        tail = (self.n_max + 1) % 8
        if tail and (self.bits[-1] >> tail):
            raise ParameterError("set bits beyond n_max")
        self.bits.flags.writeable = False

    @classmethod
    def empty(cls, n_max: int) -> "IntegerSet":
        return cls(n_max, np.zeros((n_max + 8) // 8, dtype=np.uint8))

    @classmethod
    def full(cls, n_max: int) -> "IntegerSet":
        mask = np.zeros(n_max + 1, dtype=np.uint8)
        mask[:] = 1
        return cls.from_bool(mask)

    @classmethod
    def from_bool(cls, mask: np.ndarray) -> "IntegerSet":
        """Build from a dense 0/1 indicator over {0, ..., len(mask)-1}."""
        mask = np.asarray(mask).astype(np.uint8)
        if mask.ndim != 1 or mask.size == 0:
            raise ParameterError("indicator must be a non-empty 1-d array")
        return cls(mask.size - 1, np.packbits(mask, bitorder="little"))

    @classmethod
    def from_elements(cls, elements, n_max: int | None = None) -> "IntegerSet":
        elems = np.asarray(sorted(set(int(e) for e in elements)), dtype=np.int64)
        if elems.size and elems[0] < 0:
            raise ParameterError("elements must be non-negative")
        if n_max is None:
            if elems.size == 0:
                raise ParameterError("n_max required for an empty element list")
            n_max = int(elems[-1])
        elif elems.size and elems[-1] > n_max:
            raise ParameterError("element exceeds n_max")
        mask = np.zeros(n_max + 1, dtype=np.uint8)
        mask[elems] = 1
        return cls.from_bool(mask)

    def as_bool(self) -> np.ndarray:
        return np.unpackbits(self.bits, count=self.n_max + 1, bitorder="little").astype(bool)

    def elements(self) -> np.ndarray:
        """Members in strictly increasing order."""
        return np.flatnonzero(self.as_bool()).astype(np.int64)

    def cardinality(self) -> int:
        return int(np.bitwise_count(self.bits).sum())

    def contains(self, k: int) -> bool:
        if k < 0 or k > self.n_max:
            return False
        return bool((self.bits[k >> 3] >> (k & 7)) & 1)

    def as_bigint(self) -> int:
        """The bit vector as an arbitrary-precision integer (bit k = membership of k)."""
        return int.from_bytes(self.bits.tobytes(), "little")

    def truncate(self, n_max: int) -> "IntegerSet":
        """Restriction to {0, ..., n_max}."""
        if n_max > self.n_max:
            raise ParameterError("truncate cannot extend the range")
        return IntegerSet.from_bool(self.as_bool()[: n_max + 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerSet):
            return NotImplemented
        return self.n_max == other.n_max and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n_max, self.bits.tobytes()))

    def __len__(self) -> int:
        return self.cardinality()

    def __repr__(self) -> str:
        return f"IntegerSet(n_max={self.n_max}, size={self.cardinality()})"
