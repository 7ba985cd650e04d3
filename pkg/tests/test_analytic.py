import math

import numpy as np
import pytest

from addrep import (
    BlockSamplerParams,
    IntegerSet,
    ParameterError,
    central_binomial,
    coefficient_identity_check,
    condition4_ratio,
    condition4_trajectory,
    constant,
    error_series,
    from_table,
    radial_eval,
    repfn_fast,
    repfn_naive,
    sample_block_set,
)
from addrep.bounds import ErrorSeries


def test_radial_singleton():
    d = radial_eval(IntegerSet.from_elements([0], n_max=64), constant(0.5), 0.5, 1e-12)
    assert d.a_r == 1.0
    assert d.reliable


def test_radial_full_interval_geometric():
    tol = 1e-10
    A = IntegerSet.full(2000)
    d = radial_eval(A, constant(0.5), 0.98, tol)
    assert d.reliable
    assert abs(d.a_r - 1.0 / 0.02) <= 2 * tol


def test_radial_rejects_bad_radius():
    A = IntegerSet.full(10)
    for r in (-0.5, 0.0, 1.0, 1.5):
        with pytest.raises(ParameterError):
            radial_eval(A, constant(0.5), r, 1e-9)


def test_radial_unreliable_flag():
    A = IntegerSet.full(10)  # far too short for r = 0.999
    d = radial_eval(A, constant(0.5), 0.999, 1e-9)
    assert not d.reliable and d.tail_bound > 1e-9


def test_radial_sums_monotone_in_r():
    A = IntegerSet.from_elements([0, 3, 5, 11], n_max=400)
    w = central_binomial(0.8)
    rs = [0.3, 0.5, 0.7, 0.9]
    diags = [radial_eval(A, w, r, 1.0) for r in rs]
    for a, b in zip(diags, diags[1:]):
        assert b.a_r > a.a_r and b.f_r > a.f_r
        assert b.b_lin > a.b_lin and b.b_sq > a.b_sq


def test_radial_square_sum_dominated():
    # 0 <= b_n <= 1 forces sum b_n^2 r^2n <= sum b_n r^2n
    w = from_table(np.linspace(0.05, 0.95, 30))
    A = IntegerSet.full(29)
    for r in (0.2, 0.8):
        d = radial_eval(A, w, r, 1.0)
        assert d.b_sq <= d.b_lin
    # equality only for 0/1 weights
    w01 = from_table([1.0, 0.0, 1.0, 1.0])
    d = radial_eval(IntegerSet.full(3), w01, 0.5, 1.0)
    assert d.b_sq == d.b_lin


def test_radial_block_ratio_approaches_one():
    # the sampled set's generating function tracks f(r) = 0.5/(1-r) as r -> 1
    w = constant(0.25)
    deviations_per_seed = []
    for seed in range(4):
        A = sample_block_set(BlockSamplerParams(1, 2, 20_000, seed))
        devs = [abs(radial_eval(A, w, r, 1e-6).ratio - 1.0) for r in (0.9, 0.99, 0.999)]
        deviations_per_seed.append(devs)
    monotone = sum(d[0] > d[1] > d[2] for d in deviations_per_seed)
    assert monotone >= 3, deviations_per_seed
    assert all(d[2] < 5e-3 for d in deviations_per_seed)


def test_identity_full_interval_unit_weights():
    check = coefficient_identity_check(IntegerSet.full(128), constant(1.0), 128)
    assert check.residual == 0.0 and check.passed


def test_identity_empty_set():
    check = coefficient_identity_check(IntegerSet.empty(256), central_binomial(0.5), 256)
    assert check.passed


def test_identity_random_pairs():
    rng = np.random.default_rng(42)
    weight_pool = [constant(0.3), constant(0.9, b0=0.2), central_binomial(0.7)]
    for trial in range(20):
        A = IntegerSet.from_bool((rng.random(513) < rng.uniform(0.05, 0.95)).astype(np.uint8))
        check = coefficient_identity_check(A, weight_pool[trial % 3], 512)
        assert check.passed, (trial, check)


def test_identity_range_check():
    with pytest.raises(ParameterError):
        coefficient_identity_check(IntegerSet.full(10), constant(0.5), 11)


def _series_with_errors(e: np.ndarray) -> ErrorSeries:
    n_max = len(e) - 1
    return ErrorSeries(n_max, e, np.cumsum(e),
                       np.full(n_max + 1, np.nan), np.full(n_max + 1, np.nan))


def test_condition4_zero_errors():
    series = error_series(repfn_naive(IntegerSet.full(100)), constant(1.0))
    assert condition4_ratio(constant(1.0), series, 100) == 0.0


def test_condition4_linear_errors_closed_form():
    # b_k = 0.5, e_k = k: ratio(N) = [0.25(N+1)] [N(N+1)(2N+1)/6] / [0.5(N+1)]^3,
    # which grows like (2/3) N; at N = 1000 the exact value is 2N(2N+1)/(6(N+1)).
    N = 1000
    series = _series_with_errors(np.arange(N + 1, dtype=np.float64))
    got = condition4_ratio(constant(0.25), series, N)
    oracle = 0.25 * (N + 1) * (N * (N + 1) * (2 * N + 1) / 6) / (0.5 * (N + 1)) ** 3
    assert abs(got - oracle) <= 1e-12 * oracle
    assert abs(got / N - 2.0 / 3.0) < 0.01 * (2.0 / 3.0)


def test_condition4_central_binomial_decreasing():
    # e_n = n^(1/4) / sqrt(log n) against the square-root-decay weights:
    # the ratio decreases across decades on this range
    N = 10**5
    n = np.arange(N + 1, dtype=np.float64)
    e = np.zeros(N + 1)
    e[2:] = n[2:] ** 0.25 / np.sqrt(np.log(n[2:]))
    series = _series_with_errors(e)
    w = central_binomial(1.0)
    vals = [condition4_ratio(w, series, h) for h in (10**3, 10**4, 10**5)]
    assert vals[0] > vals[1] > vals[2], vals
    traj = condition4_trajectory(w, series, [10**3, 10**4, 10**5])
    assert np.allclose(traj, vals, rtol=1e-9)


def test_condition4_zero_denominator_is_nan():
    series = _series_with_errors(np.ones(10))
    assert math.isnan(condition4_ratio(from_table([0.0] * 10), series, 9))


def test_identity_matches_fast_engines():
    rng = np.random.default_rng(3)
    A = IntegerSet.from_bool((rng.random(1025) < 0.4).astype(np.uint8))
    series_fft = error_series(repfn_fast(A, "fft"), constant(0.4))
    series_naive = error_series(repfn_naive(A), constant(0.4))
    assert np.array_equal(series_fft.e, series_naive.e)
