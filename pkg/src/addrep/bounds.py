"""Error series against convolution targets, plus the two tail calculators.

The pointwise error is e_n = R(n) - T(n) and the cumulative error is
E_N = sum_{n<=N} e_n.  Normalizations divide by the critical scales
sqrt(T(n) * log n) (pointwise) and sqrt(N) * sqrt(log N) (cumulative);
natural logarithm throughout.  Normalized entries are undefined (stored as
NaN, never 0 or +-inf) for n < 2 and wherever T(n) <= 0, so downstream
statistics can skip them deterministically.

Tail calculators:

  * `hoeffding_tail(y)`  = exp(-2 y^2), the bound on a sum of independent
    bounded variables deviating y times the combined range.
  * `chernoff_tail(eps, ex)` = 2 exp(-min(eps^2/4, eps/2) * ex), the bound
    for a sum of boolean variables deviating eps times its mean ex.  The
    leading factor 2 is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .repfn import RepProfile
from .weights import WeightSequence, convolution_target


@dataclass(frozen=True, eq=False)
class ErrorSeries:
    n_max: int
    e: np.ndarray         # R(n) - T(n)
    E: np.ndarray         # prefix sums of e
    norm_pt: np.ndarray   # e / sqrt(T log n); NaN where undefined
    norm_cum: np.ndarray  # E / (sqrt(N) sqrt(log N)); NaN where undefined


def error_series(profile: RepProfile, w: WeightSequence) -> ErrorSeries:
    n_max = profile.n_max
    T = convolution_target(w, n_max)
    e = profile.R.astype(np.float64) - T
    E = np.cumsum(e)
    n = np.arange(n_max + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        logn = np.log(n, where=n > 0, out=np.full(n_max + 1, np.nan))
        norm_pt = np.where((n >= 2) & (T > 0), e / np.sqrt(T * logn), np.nan)
        norm_cum = np.where(n >= 2, E / np.sqrt(n * logn), np.nan)
    return ErrorSeries(n_max, e, E, norm_pt, norm_cum)


def hoeffding_tail(y: float) -> float:
    if y < 0:
        raise ParameterError("y must be non-negative")
    return math.exp(-2.0 * y * y)


def chernoff_tail(eps: float, ex: float) -> float:
    if eps < 0 or ex < 0:
        raise ParameterError("eps and ex must be non-negative")
    return 2.0 * math.exp(-min(eps * eps / 4.0, eps / 2.0) * ex)


@dataclass(frozen=True, eq=False)
class ViolationReport:
    which: str
    threshold: float
    n_start: int
    indices: np.ndarray  # every n >= n_start with |norm(n)| >= threshold

    @property
    def count(self) -> int:
        return len(self.indices)

    @property
    def max_index(self) -> int | None:
        return int(self.indices[-1]) if len(self.indices) else None


def violation_scan(
    series: ErrorSeries, threshold: float, which: str = "pointwise", n_start: int = 2
) -> ViolationReport:
    """All indices from n_start on where the normalized error reaches the threshold.

    An empty report means the bound holds on the whole scanned range.
    Undefined (NaN) entries never count as violations.
    """
    if n_start < 2:
        raise ParameterError("n_start must be >= 2 (normalizations start there)")
    if threshold <= 0:
        raise ParameterError("threshold must be positive")
    if which == "pointwise":
        arr = series.norm_pt
    elif which == "cumulative":
        arr = series.norm_cum
    else:
        raise ParameterError(f"unknown scan kind {which!r}")
    if n_start > series.n_max:
        idx = np.empty(0, dtype=np.int64)
    else:
        window = arr[n_start:]
        with np.errstate(invalid="ignore"):
            hits = np.abs(window) >= threshold
        idx = (np.flatnonzero(hits) + n_start).astype(np.int64)
    return ViolationReport(which=which, threshold=threshold, n_start=n_start, indices=idx)
