"""Toy-scale minimization of the worst normalized error over all subsets.

`exhaustive_min_error` finds the exact global minimum over every subset of
{0, ..., n_max} of

    max over n in [n_start, n_max] of |R_A(n) - T(n)| / nu(n)        (pointwise)
    max over n in [n_start, n_max] of |S_A(n) - CumT(n)| / nu(n)     (cumulative)

by depth-first search over membership decisions in increasing order.  The
pruning fact: once membership of 0..m is decided, R(n) is final for every
n <= m, so the partial objective over [n_start, m] is a valid lower bound
and any branch already at or above the incumbent is cut.  Branches explore
"exclude" before "include" and the incumbent only improves strictly, so the
returned witness has the lexicographically least membership string among
all global minimizers.

`greedy_min_error` is the scalable baseline: it fixes membership of each m
in increasing order, keeping whichever choice minimizes the partial
objective through index m, breaking ties toward exclusion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError

EXHAUSTIVE_MAX_N = 26


@dataclass(frozen=True)
class SearchProblem:
    target: np.ndarray        # T(n) for n = 0 .. n_max
    norm: np.ndarray          # nu(n) > 0 on the scored range
    n_start: int = 1
    objective: str = "pointwise"  # or "cumulative"

    def __post_init__(self) -> None:
        t = np.asarray(self.target, dtype=np.float64)
        v = np.asarray(self.norm, dtype=np.float64)
        if t.ndim != 1 or t.size == 0 or v.shape != t.shape:
            raise ParameterError("target and norm must be 1-d arrays of equal length")
        if self.objective not in ("pointwise", "cumulative"):
            raise ParameterError(f"unknown objective {self.objective!r}")
        if not 0 <= self.n_start <= t.size - 1:
            raise ParameterError("n_start outside the index range")
        if np.any(v[self.n_start :] <= 0):
            raise ParameterError("norm must be positive on the scored range")
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "norm", v)

    @property
    def n_max(self) -> int:
        return len(self.target) - 1

    def scored_target(self) -> np.ndarray:
        """Per-index comparison values: T(n), or its running sum."""
        if self.objective == "cumulative":
            return np.cumsum(self.target)
        return self.target


@dataclass(frozen=True)
class SearchResult:
    value: float
    witness: tuple[int, ...]  # elements of the minimizing set
    nodes_visited: int


def _apply_include(m: int, n_max: int, elements: list[int], R: list[int]) -> None:
    # ordered pairs (a, m) and (m, a) for existing a, plus (m, m)
    for a in elements:
        t = a + m
        if t > n_max:
            break
        R[t] += 2
    if 2 * m <= n_max:
        R[2 * m] += 1
    elements.append(m)


def _undo_include(m: int, n_max: int, elements: list[int], R: list[int]) -> None:
    elements.pop()
    if 2 * m <= n_max:
        R[2 * m] -= 1
    for a in elements:
        t = a + m
        if t > n_max:
            break
        R[t] -= 2


def exhaustive_min_error(prob: SearchProblem) -> SearchResult:
    """Exact global minimum (value and lexicographically least witness)."""
    n_max = prob.n_max
    if n_max > EXHAUSTIVE_MAX_N:
        raise ParameterError(
            f"exhaustive search is limited to n_max <= {EXHAUSTIVE_MAX_N}; "
            "use greedy_min_error for larger ranges"
        )
    target, norm = prob.scored_target().tolist(), prob.norm.tolist()
    cumulative = prob.objective == "cumulative"
    n_start = prob.n_start

    R = [0] * (n_max + 1)
    elements: list[int] = []
    best_value = float("inf")
    best_witness: tuple[int, ...] = ()
    nodes = 0

    def descend(m: int, obj: float, s_run: int) -> None:
        nonlocal best_value, best_witness, nodes
        for include in (False, True):
            nodes += 1
            if include:
                _apply_include(m, n_max, elements, R)
            s_next = s_run + R[m]
            obj_next = obj
            if m >= n_start:
                metric = s_next if cumulative else R[m]
                score = abs(metric - target[m]) / norm[m]
                if score > obj_next:
                    obj_next = score
            if obj_next < best_value:
                if m == n_max:
                    best_value = obj_next
                    best_witness = tuple(elements)
                else:
                    descend(m + 1, obj_next, s_next)
            if include:
                _undo_include(m, n_max, elements, R)

    descend(0, 0.0, 0)
    return SearchResult(value=best_value, witness=best_witness, nodes_visited=nodes)


def greedy_min_error(prob: SearchProblem) -> SearchResult:
    """Greedy baseline: per-index choice minimizing the objective so far."""
    n_max = prob.n_max
    target, norm = prob.scored_target().tolist(), prob.norm.tolist()
    cumulative = prob.objective == "cumulative"
    n_start = prob.n_start

    R = [0] * (n_max + 1)
    elements: list[int] = []
    obj = 0.0
    s_run = 0
    nodes = 0
    for m in range(n_max + 1):
        nodes += 1

        def scored(r_m: int) -> float:
            if m < n_start:
                return obj
            metric = s_run + r_m if cumulative else r_m
            return max(obj, abs(metric - target[m]) / norm[m])

        obj_excl = scored(R[m])
        _apply_include(m, n_max, elements, R)
        obj_incl = scored(R[m])
        if obj_incl < obj_excl:
            obj = obj_incl
        else:
            _undo_include(m, n_max, elements, R)
            obj = obj_excl
        s_run += R[m]
    return SearchResult(value=obj, witness=tuple(elements), nodes_visited=nodes)
