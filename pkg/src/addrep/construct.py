"""Randomized set constructions with bit-reproducible seeding.

Two samplers:

  * `sample_block_set`: the range splits into consecutive blocks
    [nq, nq+q-1] and each block independently receives a uniform p-subset,
    realized by a partial Fisher-Yates shuffle of the q block offsets.
    Block n draws from its own sub-stream `subseed(seed, n)`, so blocks can
    be generated in parallel with output identical to the sequential order.

  * `sample_bernoulli_set`: index n joins the set independently with
    probability b_n, consuming one uniform real per index in increasing
    order.  Indices are processed in fixed chunks of `BERNOULLI_CHUNK`
    driven by sub-stream `subseed(seed, chunk)`; the chunk length is part
    of the output contract (changing it changes the sampled sets).

`block_diagonal_counts` decomposes the cumulative pair count at a horizon N
into per-antidiagonal block counts Y_{u,v} (pairs with first element in
block u, second in block v, sum <= N): every antidiagonal u+v <= floor(N/q)-2
is unconstrained, the last two antidiagonals carry the boundary, and the
three parts must reproduce sum_{n<=N} R(n) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import AddrepError, ParameterError
from .intset import IntegerSet
from .prng import XoshiroVector, subseed_vec
from .repfn import cumulative_rep, exact_self_convolution, repfn_fast
from .weights import WeightSequence, weights_array

BERNOULLI_CHUNK = 1024
MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class BlockSamplerParams:
    p: int
    q: int
    n_blocks: int
    seed: int

    def __post_init__(self) -> None:
        if not 0 < self.p < self.q:
            raise ParameterError(f"need 0 < p < q, got p={self.p}, q={self.q}")
        if self.q > 0xFFFF:
            raise ParameterError("q above 65535 is not supported")
        if self.n_blocks < 1:
            raise ParameterError("n_blocks must be >= 1")
        if not 0 <= self.seed <= MAX_SEED:
            raise ParameterError("seed must fit in 64 bits")


def sample_block_set(params: BlockSamplerParams) -> IntegerSet:
    """Union of independent uniform p-subsets of the blocks [nq, nq+q-1]."""
    p, q, nb = params.p, params.q, params.n_blocks
    gen = XoshiroVector(subseed_vec(params.seed, np.arange(nb, dtype=np.uint64)))
    offsets = np.broadcast_to(np.arange(q, dtype=np.uint16), (nb, q)).copy()
    rows = np.arange(nb)
    for j in range(p):
        i = j + gen.next_below(q - j).astype(np.int64)
        tmp = offsets[rows, j].copy()
        offsets[rows, j] = offsets[rows, i]
        offsets[rows, i] = tmp
    elements = (rows[:, None] * q + offsets[:, :p].astype(np.int64)).ravel()
    mask = np.zeros(nb * q, dtype=np.uint8)
    mask[elements] = 1
    return IntegerSet.from_bool(mask)


def sample_bernoulli_set(w: WeightSequence, n_max: int, seed: int) -> IntegerSet:
    """Independent inclusions: n joins with probability b_n."""
    if not 0 <= seed <= MAX_SEED:
        raise ParameterError("seed must fit in 64 bits")
    b = weights_array(w, n_max)  # rejects weights outside [0, 1]
    n_chunks = (n_max + BERNOULLI_CHUNK) // BERNOULLI_CHUNK
    gen = XoshiroVector(subseed_vec(seed, np.arange(n_chunks, dtype=np.uint64)))
    u = np.empty((n_chunks, BERNOULLI_CHUNK))
    for j in range(BERNOULLI_CHUNK):
        u[:, j] = gen.next_unit()
    mask = (u.ravel()[: n_max + 1] < b).astype(np.uint8)
    return IntegerSet.from_bool(mask)


@dataclass(frozen=True, eq=False)
class DiagonalCounts:
    """Antidiagonal decomposition of the cumulative pair count at horizon N."""

    N: int
    q: int
    diag_sums: np.ndarray  # int64; entry M = sum_m Y_{m, M-m}, M = 0 .. floor(N/q)
    total: int  # sum_{n<=N} R(n), reproduced exactly by diag_sums.sum()

    @property
    def n_diagonals(self) -> int:
        return len(self.diag_sums)

    @property
    def interior_total(self) -> int:
        """Sum over the unconstrained antidiagonals M <= floor(N/q) - 2."""
        k = self.N // self.q
        return int(self.diag_sums[: max(k - 1, 0)].sum())

    @property
    def boundary_inner(self) -> int:
        """Antidiagonal M = floor(N/q) - 1."""
        k = self.N // self.q
        return int(self.diag_sums[k - 1]) if k >= 1 else 0

    @property
    def boundary_outer(self) -> int:
        """Antidiagonal M = floor(N/q)."""
        return int(self.diag_sums[self.N // self.q])


def block_diagonal_counts(A: IntegerSet, q: int, N: int) -> DiagonalCounts:
    """Exact Y_{u,v} antidiagonal sums, verified against the profile total."""
    if q < 1:
        raise ParameterError("q must be positive")
    if not 0 <= N <= A.n_max:
        raise ParameterError("horizon N must lie within the set range")
    K = N // q
    elems = A.elements()
    diag = np.zeros(K + 1, dtype=np.int64)

    if K >= 2:
        blocks = elems // q
        counts = np.bincount(blocks[blocks <= K - 2], minlength=K - 1)
        diag[: K - 1] = exact_self_convolution(counts[: K - 1], K - 1).astype(np.int64)

    # Boundary antidiagonals: the pair-sum constraint a + a' <= N is active.
    starts = np.searchsorted(elems, np.arange(K + 2, dtype=np.int64) * q)
    for M in (K - 1, K):
        if M < 0:
            continue
        total = 0
        for u in range(M + 1):
            v = M - u
            eu = elems[starts[u] : starts[u + 1]]
            if eu.size == 0:
                continue
            ev = elems[starts[v] : starts[v + 1]]
            if ev.size == 0:
                continue
            total += int(np.searchsorted(ev, N - eu, side="right").sum())
        diag[M] = total

    expected = int(cumulative_rep(repfn_fast(A.truncate(N))).S[N])
    reconstructed = int(diag.sum())
    if reconstructed != expected:
        raise AddrepError(
            f"antidiagonal decomposition lost pairs: {reconstructed} != {expected}"
        )
    return DiagonalCounts(N=N, q=q, diag_sums=diag, total=expected)
