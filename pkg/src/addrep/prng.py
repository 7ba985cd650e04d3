"""Deterministic 64-bit pseudo-random generator used by all samplers.

The generator contract is part of the package's reproducibility promise:
a seed must produce the same output stream on every platform and in every
implementation, so the algorithms are pinned here rather than delegated to
a library generator.

  * splitmix64 expands a 64-bit seed into generator state.  Its stream is
    closed-form: output i of a stream seeded with ``s`` is
    ``mix64(s + (i+1) * GOLDEN)``, which makes sub-stream derivation
    embarrassingly parallel.
  * xoshiro256** is the uniform source.  Its four state words are the first
    four outputs of a splitmix64 stream seeded with the user seed.
  * Integers in ``[0, m)`` are drawn by rejection sampling on the high bits
    of the 64-bit output (no modulo bias).
  * Unit-interval reals are 53-bit mantissa draws: ``(u64 >> 11) * 2**-53``.

Sub-stream ``i`` of a seed is ``subseed(seed, i)``, the ``(i+1)``-th output
of the seed's splitmix64 stream.  Samplers assign one sub-stream per block
(or per fixed-length index chunk) so that parallel generation reproduces the
sequential output bit for bit.

Scalar classes (`SplitMix64`, `Xoshiro256StarStar`) are the reference
implementation; `XoshiroVector` advances many independent streams at once
with numpy uint64 arithmetic and is verified against the scalar classes in
the test suite.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_U64 = np.uint64
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 output mixing function (finalizer) of a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MUL1) & MASK64
    x = ((x ^ (x >> 27)) * _MUL2) & MASK64
    return x ^ (x >> 31)


def subseed(seed: int, index: int) -> int:
    """Seed of sub-stream `index`: the (index+1)-th splitmix64 output of `seed`."""
    if index < 0:
        raise ValueError("sub-stream index must be non-negative")
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """Reference splitmix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """Reference xoshiro256** stream, state seeded via splitmix64."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int) -> None:
        sm = SplitMix64(seed)
        self.s0 = sm.next_u64()
        self.s1 = sm.next_u64()
        self.s2 = sm.next_u64()
        self.s3 = sm.next_u64()

    def next_u64(self) -> int:
        result = (_rotl((self.s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (self.s1 << 17) & MASK64
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl(self.s3, 45)
        return result

    def next_below(self, m: int) -> int:
        """Uniform integer in [0, m) by high-bit rejection; m=1 consumes one draw."""
        if m <= 0:
            raise ValueError("m must be positive")
        if m == 1:
            self.next_u64()
            return 0
        k = (m - 1).bit_length()
        shift = 64 - k
        while True:
            r = self.next_u64() >> shift
            if r < m:
                return r

    def next_unit(self) -> float:
        """Uniform real in [0, 1) with 53 significant bits."""
        return (self.next_u64() >> 11) * 2.0**-53


# Vectorized path: arrays of independent streams, one per sub-seed.

def _mix64_vec(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> _U64(30))) * _U64(_MUL1)
    x = (x ^ (x >> _U64(27))) * _U64(_MUL2)
    return x ^ (x >> _U64(31))


def subseed_vec(seed: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized `subseed` for an array of sub-stream indices."""
    base = (indices.astype(np.uint64) + _U64(1)) * _U64(GOLDEN)
    return _mix64_vec(base + _U64(seed & MASK64))


def _rotl_vec(x: np.ndarray, k: int) -> np.ndarray:
    return (x << _U64(k)) | (x >> _U64(64 - k))


class XoshiroVector:
    """Many independent xoshiro256** streams advanced in lock-step.

    Stream j is bit-identical to ``Xoshiro256StarStar(seeds[j])``.
    """

    __slots__ = ("s0", "s1", "s2", "s3", "n")

    def __init__(self, seeds: np.ndarray) -> None:
        seeds = np.asarray(seeds, dtype=np.uint64)
        self.s0 = _mix64_vec(seeds + _U64(GOLDEN))
        self.s1 = _mix64_vec(seeds + _U64((2 * GOLDEN) & MASK64))
        self.s2 = _mix64_vec(seeds + _U64((3 * GOLDEN) & MASK64))
        self.s3 = _mix64_vec(seeds + _U64((4 * GOLDEN) & MASK64))
        self.n = len(seeds)

    def next_u64(self) -> np.ndarray:
        result = _rotl_vec(self.s1 * _U64(5), 7) * _U64(9)
        t = self.s1 << _U64(17)
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl_vec(self.s3, 45)
        return result

    def next_below(self, m: int) -> np.ndarray:
        """One uniform draw in [0, m) per stream; per-stream rejection."""
        if m <= 0:
            raise ValueError("m must be positive")
        if m == 1:
            self.next_u64()
            return np.zeros(self.n, dtype=np.uint64)
        shift = _U64(64 - (m - 1).bit_length())
        out = self.next_u64() >> shift
        pending = out >= _U64(m)
        while pending.any():
            # Rejected streams redraw; accepted streams must not consume
            # further randomness, so redraws run on a sliced sub-generator
            # whose state is written back.
            idx = np.flatnonzero(pending)
            sub = XoshiroVector.__new__(XoshiroVector)
            sub.s0, sub.s1 = self.s0[idx], self.s1[idx]
            sub.s2, sub.s3 = self.s2[idx], self.s3[idx]
            sub.n = len(idx)
            redraw = sub.next_u64() >> shift
            self.s0[idx], self.s1[idx] = sub.s0, sub.s1
            self.s2[idx], self.s3[idx] = sub.s2, sub.s3
            out[idx] = redraw
            pending[idx] = redraw >= _U64(m)
        return out

    def next_unit(self) -> np.ndarray:
        return (self.next_u64() >> _U64(11)).astype(np.float64) * 2.0**-53
