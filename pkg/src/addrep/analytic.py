"""Finite-truncation diagnostics for the generating-function quantities.

`radial_eval` evaluates the power sums that drive the radial comparison of a
set against a weight sequence at a radius r in (0, 1): the set's generating
function A(r), the weight sum f(r), and the r^2-power sums of b_n and b_n^2.
All accumulation is exact (math.fsum) in increasing exponent order; a
truncation tail bound r^(n_max+1) / (1 - r) flags inadequate ranges.

`coefficient_identity_check` verifies, coefficient by coefficient up to N,
that the squared generating function of the set differs from the squared
weight series exactly by the first difference of the cumulative error:
coefficient n of the left side is R(n) - T(n), of the right side
E_n - E_{n-1}.  For finite truncations this holds to rounding error.

`condition4_ratio` reports (sum b_k^2)(sum e_k^2) / (sum b_k)^3 at a horizon,
the quantity separating admissible from inadmissible error sequences in the
non-existence results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import ErrorSeries, error_series
from .exceptions import ParameterError
from .intset import IntegerSet
from .repfn import repfn_fast
from .weights import WeightSequence, weights_array


@dataclass(frozen=True)
class RadialDiagnostics:
    r: float
    a_r: float          # sum over set elements of r^a (truncated)
    f_r: float          # sum b_n r^n
    b_lin: float        # sum b_n r^(2n)
    b_sq: float         # sum b_n^2 r^(2n)
    tail_bound: float   # r^(n_max+1) / (1 - r)
    ratio: float        # a_r / f_r
    reliable: bool      # tail_bound <= caller tolerance


def radial_eval(A: IntegerSet, w: WeightSequence, r: float, tol: float) -> RadialDiagnostics:
    if not 0.0 < r < 1.0:
        raise ParameterError("r must lie strictly inside (0, 1)")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    n_max = A.n_max
    n = np.arange(n_max + 1, dtype=np.float64)
    b = weights_array(w, n_max)
    rn = np.power(r, n)
    r2n = np.power(r * r, n)
    a_r = math.fsum(np.power(r, A.elements().astype(np.float64)))
    f_r = math.fsum(b * rn)
    b_lin = math.fsum(b * r2n)
    b_sq = math.fsum(b * b * r2n)
    tail = r ** (n_max + 1) / (1.0 - r)
    ratio = a_r / f_r if f_r > 0 else math.nan
    return RadialDiagnostics(
        r=r, a_r=a_r, f_r=f_r, b_lin=b_lin, b_sq=b_sq,
        tail_bound=tail, ratio=ratio, reliable=tail <= tol,
    )


@dataclass(frozen=True)
class IdentityCheck:
    n_max: int
    residual: float   # max over n of |(R(n) - T(n)) - (E_n - E_{n-1})|
    scale: float      # 1 + max |E_n|
    passed: bool      # residual <= 1e-9 * scale


def coefficient_identity_check(A: IntegerSet, w: WeightSequence, N: int) -> IdentityCheck:
    """Check the squared-series identity coefficientwise up to N."""
    if N > A.n_max:
        raise ParameterError("N exceeds the set range")
    series = error_series(repfn_fast(A.truncate(N)), w)
    lhs = series.e
    rhs = np.diff(series.E, prepend=0.0)
    residual = float(np.max(np.abs(lhs - rhs)))
    scale = 1.0 + float(np.max(np.abs(series.E)))
    return IdentityCheck(n_max=N, residual=residual, scale=scale,
                         passed=residual <= 1e-9 * scale)


def condition4_ratio(w: WeightSequence, series: ErrorSeries, N: int) -> float:
    """(sum_{k<=N} b_k^2)(sum_{k<=N} e_k^2) / (sum_{k<=N} b_k)^3; NaN if undefined."""
    if N > series.n_max:
        raise ParameterError("N exceeds the error series range")
    b = weights_array(w, N)
    sum_b = math.fsum(b)
    if sum_b <= 0:
        return math.nan
    return math.fsum(b * b) * math.fsum(series.e[: N + 1] ** 2) / sum_b**3


def condition4_trajectory(w: WeightSequence, series: ErrorSeries, horizons) -> np.ndarray:
    """`condition4_ratio` evaluated at several horizons (vectorized cumsums)."""
    horizons = np.asarray(horizons, dtype=np.int64)
    if horizons.size and horizons.max() > series.n_max:
        raise ParameterError("horizon exceeds the error series range")
    b = weights_array(w, int(horizons.max()) if horizons.size else 0)
    cb = np.cumsum(b)
    cb2 = np.cumsum(b * b)
    ce2 = np.cumsum(series.e ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = cb2[horizons] * ce2[horizons] / cb[horizons] ** 3
    return np.where(cb[horizons] > 0, out, np.nan)
