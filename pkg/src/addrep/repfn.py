"""Exact representation-function profiles R(n) and their cumulative sums.

R(n) counts *ordered* pairs (a, a') with a + a' = n, matching the double-sum
definition over the indicator sequence.  (Some of the literature counts
unordered pairs; everything in this package is ordered.)

Three interchangeable engines produce bit-identical profiles:

  * ``naive``   -- double loop over the elements, O(|A|^2); the oracle.
  * ``bitset``  -- reversed-window sweep over the packed bit vector:
                   R(n) = popcount(bits & reverse(bits[0..n])), with the
                   reversed window advanced one bit per step.  O(n^2 / 64);
                   the work-horse up to a few 10^5.
  * ``fft``     -- squares the 0/1 coefficient sequence with a real
                   transform and rounds back to integers.  An exactness
                   guard rejects the result if any coefficient lands 0.25
                   or farther from an integer; callers fall back to the
                   bitset engine in that case rather than ever returning a
                   wrong count.

Truncation contract: R(n) for n <= n_max depends only on elements <= n, so
the profile of a truncated set agrees with the untruncated construction on
the whole computed range.  Experiment code relies on this.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import CapacityError, ExactnessError, ParameterError
from .intset import IntegerSet

FFT_MAX_N = 1 << 26  # above this the rounding guard can no longer be trusted
FFT_GUARD = 0.25

# Largest n_max for which uint64 prefix sums are statically overflow-free:
# S(N) <= (N+1) * max R <= (N+1)(N_max+1) must stay below 2^64.
CUMULATIVE_SAFE_N = 2_000_000_000


@dataclass(frozen=True, eq=False)
class RepProfile:
    n_max: int
    R: np.ndarray  # uint64, R[n] for 0 <= n <= n_max

    def __post_init__(self) -> None:
        if self.R.dtype != np.uint64 or self.R.shape != (self.n_max + 1,):
            raise ParameterError("profile array shape/dtype mismatch")
        self.R.flags.writeable = False


@dataclass(frozen=True, eq=False)
class CumulativeProfile:
    n_max: int
    S: np.ndarray  # uint64, S[N] = sum_{n<=N} R[n]

    def __post_init__(self) -> None:
        if self.S.dtype != np.uint64 or self.S.shape != (self.n_max + 1,):
            raise ParameterError("profile array shape/dtype mismatch")
        self.S.flags.writeable = False


def _guarded_rint(y: np.ndarray) -> np.ndarray:
    """Round to nearest integer; ExactnessError if any value is >= 0.25 off."""
    r = np.rint(y)
    dev = float(np.max(np.abs(y - r))) if y.size else 0.0
    if dev >= FFT_GUARD:
        raise ExactnessError(
            f"transform result deviates {dev:.3g} from an integer (guard {FFT_GUARD})"
        )
    return r


def exact_self_convolution(values: np.ndarray, out_len: int) -> np.ndarray:
    """Exact (values * values)[0 .. out_len-1] for small non-negative integers.

    Uses a real fft with the 0.25 rounding guard; raises ExactnessError when
    exactness cannot be certified.
    """
    x = np.asarray(values, dtype=np.float64)
    size = 1 << max(1, (2 * len(x) - 1)).bit_length()
    spec = np.fft.rfft(x, n=size)
    conv = np.fft.irfft(spec * spec, n=size)[:out_len]
    return _guarded_rint(conv)


def repfn_naive(A: IntegerSet) -> RepProfile:
    """Ordered-pair counts by the double loop over elements."""
    n_max = A.n_max
    R = np.zeros(n_max + 1, dtype=np.int64)
    elems = A.elements()
    for a in elems.tolist():
        # partners a' with a + a' <= n_max; sums a + a' are distinct for fixed a
        k = int(np.searchsorted(elems, n_max - a, side="right"))
        R[a + elems[:k]] += 1
    return RepProfile(n_max, R.astype(np.uint64))


def repfn_bitset(A: IntegerSet) -> RepProfile:
    """Reversed-window popcount sweep (quadratic in n_max; exact)."""
    n_max = A.n_max
    X = A.as_bigint()
    bits = A.as_bool().tolist()
    R = np.empty(n_max + 1, dtype=np.uint64)
    rev = 0
    for n in range(n_max + 1):
        # rev holds reverse(bits[0..n]): bit j of rev = membership of n - j
        rev = (rev << 1) | bits[n]
        R[n] = (X & rev).bit_count()
    return RepProfile(n_max, R)


def repfn_fft(A: IntegerSet) -> RepProfile:
    """Transform engine; ExactnessError if the rounding guard trips."""
    if A.n_max > FFT_MAX_N:
        raise ParameterError(f"fft engine requires n_max <= {FFT_MAX_N}")
    conv = exact_self_convolution(A.as_bool().astype(np.float64), A.n_max + 1)
    return RepProfile(A.n_max, conv.astype(np.uint64))


def repfn_fast(A: IntegerSet, engine: str = "auto") -> RepProfile:
    """Fast profile computation; output identical to `repfn_naive`.

    engine "auto" picks the transform for any feasible size.  If the fft
    exactness guard trips, the call falls back to the bitset engine instead
    of returning wrong counts.
    """
    if engine not in ("auto", "bitset", "fft"):
        raise ParameterError(f"unknown engine {engine!r}")
    if engine == "bitset":
        return repfn_bitset(A)
    if engine == "auto" and A.n_max > FFT_MAX_N:
        raise CapacityError(
            f"no fast engine for n_max > {FFT_MAX_N} "
            f"(requested {A.n_max}); the bitset engine is quadratic"
        )
    try:
        return repfn_fft(A)
    except ExactnessError as exc:
        warnings.warn(f"fft exactness guard tripped ({exc}); falling back to bitset")
        return repfn_bitset(A)


def cumulative_rep(profile: RepProfile) -> CumulativeProfile:
    """Exact uint64 prefix sums; hard error rather than silent wraparound."""
    n_max = profile.n_max
    if n_max > CUMULATIVE_SAFE_N:
        raise CapacityError(f"cumulative sums are overflow-safe only up to {CUMULATIVE_SAFE_N}")
    max_r = int(profile.R.max()) if profile.R.size else 0
    if (n_max + 1) * max_r >= 1 << 64:
        raise CapacityError("cumulative sum would overflow 64 bits")
    return CumulativeProfile(n_max, np.cumsum(profile.R, dtype=np.uint64))
