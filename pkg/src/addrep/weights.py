"""Weight sequences b_n and their convolution targets.

Three families are supported:

  * ``constant``: b_n = sqrt(c) for all n, with an optional independent
    override for b_0.  Self-convolution grows linearly, cumulative target
    quadratically.
  * ``cbinom``: b_n = sqrt(c) * binom(2n, n) / 4^n, computed by the stable
    multiplicative recurrence b_0 = sqrt(c), b_n = b_{n-1} * (2n-1) / (2n).
    Its self-convolution is identically c, so the cumulative target is
    c * (N + 1).
  * ``table``: an explicit finite list of weights in [0, 1]; targets are
    computed by direct summation (transform-based above 2^12 terms).

All weights must lie in [0, 1].  Weight specs parse from strings:
``constant:c=0.5``, ``constant:c=0.5,b0=0.25``, ``cbinom:c=0.7``,
``table:@path`` (one real per line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError

DIRECT_CONV_LIMIT = 1 << 12  # table targets above this use an fft


@dataclass(frozen=True)
class WeightSequence:
    kind: str  # "constant" | "cbinom" | "table"
    c: float = 0.0
    b0: float | None = None  # constant kind only
    table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "cbinom", "table"):
            raise ParameterError(f"unknown weight kind {self.kind!r}")
        if self.kind == "table":
            if self.table is None or len(self.table) == 0:
                raise ParameterError("table kind requires a non-empty table")
            tab = np.asarray(self.table, dtype=np.float64)
            if np.any(tab < 0.0) or np.any(tab > 1.0) or not np.all(np.isfinite(tab)):
                raise ParameterError("table weights must lie in [0, 1]")
            object.__setattr__(self, "table", tab)
            tab.flags.writeable = False
        else:
            if not (0.0 <= self.c <= 1.0) or not math.isfinite(self.c):
                raise ParameterError("c must satisfy 0 <= sqrt(c) <= 1")
            if self.b0 is not None:
                if self.kind != "constant":
                    raise ParameterError("b0 override only applies to constant weights")
                if not (0.0 <= self.b0 <= 1.0):
                    raise ParameterError("b0 must lie in [0, 1]")

    @property
    def n_cap(self) -> int | None:
        """Largest defined index (None = unbounded)."""
        return None if self.table is None else len(self.table) - 1

    def spec_string(self) -> str:
        if self.kind == "constant":
            if self.b0 is not None:
                return f"constant:c={self.c:g},b0={self.b0:g}"
            return f"constant:c={self.c:g}"
        if self.kind == "cbinom":
            return f"cbinom:c={self.c:g}"
        return f"table:<{len(self.table)} entries>"


def constant(c: float, b0: float | None = None) -> WeightSequence:
    return WeightSequence("constant", c=c, b0=b0)


def central_binomial(c: float) -> WeightSequence:
    return WeightSequence("cbinom", c=c)


def from_table(values) -> WeightSequence:
    return WeightSequence("table", table=np.asarray(values, dtype=np.float64))


def parse_weights(spec: str) -> WeightSequence:
    """Parse a weight spec string (see module docstring for the grammar)."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind == "table":
        if not rest.startswith("@"):
            raise ParameterError("table spec must be table:@path")
        try:
            values = [float(line) for line in open(rest[1:]) if line.strip()]
        except OSError as exc:
            raise ParameterError(f"cannot read weight table: {exc}") from exc
        except ValueError as exc:
            raise ParameterError(f"bad weight table entry: {exc}") from exc
        return from_table(values)
    if kind in ("constant", "cbinom"):
        params: dict[str, float] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ParameterError(f"bad weight parameter {item!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError as exc:
                raise ParameterError(f"bad weight parameter {item!r}") from exc
        if "c" not in params:
            raise ParameterError(f"{kind} spec requires c=<value>")
        if kind == "constant":
            known = {"c", "b0"}
        else:
            known = {"c"}
        if set(params) - known:
            raise ParameterError(f"unknown weight parameters {sorted(set(params) - known)}")
        if kind == "constant":
            return constant(params["c"], params.get("b0"))
        return central_binomial(params["c"])
    raise ParameterError(f"unknown weight spec {spec!r}")


def _check_range(w: WeightSequence, n: int) -> None:
    if n < 0:
        raise ParameterError("index must be non-negative")
    if w.n_cap is not None and n > w.n_cap:
        raise ParameterError(f"index {n} beyond table cap {w.n_cap}")


def weights_array(w: WeightSequence, n_max: int) -> np.ndarray:
    """b_0 .. b_{n_max} as a float array."""
    _check_range(w, n_max)
    if w.kind == "constant":
        s = math.sqrt(w.c)
        out = np.full(n_max + 1, s)
        out[0] = s if w.b0 is None else w.b0
        return out
    if w.kind == "cbinom":
        out = np.empty(n_max + 1)
        out[0] = math.sqrt(w.c)
        if n_max >= 1:
            k = np.arange(1, n_max + 1, dtype=np.float64)
            out[1:] = out[0] * np.cumprod((2.0 * k - 1.0) / (2.0 * k))
        return out
    return w.table[: n_max + 1].copy()


def weight_at(w: WeightSequence, n: int) -> float:
    """b_n for a single index."""
    _check_range(w, n)
    if w.kind == "constant":
        if n == 0 and w.b0 is not None:
            return w.b0
        return math.sqrt(w.c)
    if w.kind == "table":
        return float(w.table[n])
    return float(weights_array(w, n)[n])


def convolution_target(w: WeightSequence, n_max: int) -> np.ndarray:
    """T(n) = sum_{k=0..n} b_k b_{n-k} for n = 0 .. n_max."""
    _check_range(w, n_max)
    if w.kind == "cbinom":
        # The self-convolution of this family telescopes to the constant c.
        return np.full(n_max + 1, w.c)
    if w.kind == "constant":
        n = np.arange(n_max + 1, dtype=np.float64)
        if w.b0 is None:
            return w.c * (n + 1.0)
        beta, s = w.b0, math.sqrt(w.c)
        out = 2.0 * beta * s + (n - 1.0) * w.c
        out[0] = beta * beta
        if n_max >= 1:
            out[1] = 2.0 * beta * s
        return out
    b = w.table[: n_max + 1]
    if n_max <= DIRECT_CONV_LIMIT:
        return np.convolve(b, b)[: n_max + 1]
    size = 1 << (2 * (n_max + 1) - 1).bit_length()
    spec = np.fft.rfft(b, n=size)
    return np.fft.irfft(spec * spec, n=size)[: n_max + 1]


def cumulative_target(w: WeightSequence, N: int) -> float:
    """sum_{n=0..N} T(n)."""
    _check_range(w, N)
    if w.kind == "cbinom":
        return w.c * (N + 1)
    if w.kind == "constant":
        if w.b0 is None:
            return w.c * ((N + 1) * (N + 2) // 2)
        beta, s = w.b0, math.sqrt(w.c)
        if N == 0:
            return beta * beta
        return beta * beta + 2.0 * beta * s * N + w.c * ((N - 1) * N // 2)
    return float(np.cumsum(convolution_target(w, N))[N])
