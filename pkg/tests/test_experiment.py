import json
import math

import numpy as np
import pytest

from addrep import (
    CapacityError,
    ExperimentConfig,
    ParameterError,
    run_experiment,
)
from addrep.experiment import estimate_trial_bytes, nearest_rank, run_trial


def block_config(tmp_path, **overrides):
    base = dict(
        kind="block", n_max=20_000, trials=4, base_seed=50, p=1, q=2,
        checkpoints=(1000, 10_000, 20_000), thresholds=(5.0, 8.0),
        out_dir=str(tmp_path), prefix="t", figures=False,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_kind_aliases():
    cfg = ExperimentConfig(kind="thm3", n_max=100, trials=1, p=1, q=2)
    assert cfg.kind == "block"
    cfg = ExperimentConfig(kind="thm6", n_max=100, trials=1, weights="constant:c=0.5")
    assert cfg.kind == "bernoulli"
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="thm9", n_max=100, trials=1)


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="block", n_max=100, trials=0, p=1, q=2)
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="block", n_max=100, trials=1)  # p, q missing
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="bernoulli", n_max=100, trials=1)  # weights missing
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="block", n_max=100, trials=1, p=1, q=2,
                         checkpoints=(50, 20))  # unsorted
    with pytest.raises(ParameterError):
        ExperimentConfig(kind="block", n_max=100, trials=1, p=1, q=2,
                         checkpoints=(200,))  # beyond n_max
    with pytest.raises(ParameterError):
        ExperimentConfig.from_dict({"kind": "block", "n_max": 10, "trials": 1,
                                    "p": 1, "q": 2, "bogus": 3})


def test_nearest_rank_percentiles():
    vals = np.arange(1.0, 11.0)  # 1..10
    assert nearest_rank(vals, 50.0) == 5.0
    assert nearest_rank(vals, 95.0) == 10.0
    assert nearest_rank(vals, 100.0) == 10.0
    assert nearest_rank(np.array([7.0]), 50.0) == 7.0
    fifty = np.arange(1.0, 51.0)
    assert nearest_rank(fifty, 50.0) == 25.0
    assert nearest_rank(fifty, 95.0) == 48.0


def test_block_experiment_outputs(tmp_path):
    cfg = block_config(tmp_path)
    report = run_experiment(cfg)
    text = report.csv_path.read_text()
    lines = text.splitlines()
    assert lines[0] == "trial,checkpoint,metric,value"
    # per trial: seed + 2 rows per checkpoint + max_norm_pt + one per threshold
    assert len(lines) == 1 + cfg.trials * (1 + 2 * len(cfg.checkpoints) + 1 + 2)
    summary = json.loads(report.json_path.read_text())
    assert summary["config"]["kind"] == "block"
    assert set(summary["aggregates"]["checkpoints"]) == {"1000", "10000", "20000"}
    stats = summary["aggregates"]["checkpoints"]["20000"]
    assert stats["abs_norm_cum_min"] <= stats["abs_norm_cum_median"] <= stats["abs_norm_cum_max"]


def test_experiment_rerun_is_byte_identical(tmp_path):
    r1 = run_experiment(block_config(tmp_path / "a"))
    r2 = run_experiment(block_config(tmp_path / "b"))
    assert r1.csv_path.read_bytes() == r2.csv_path.read_bytes()


def test_worker_count_does_not_change_bytes(tmp_path):
    r1 = run_experiment(block_config(tmp_path / "w1", workers=1))
    r2 = run_experiment(block_config(tmp_path / "w2", workers=4))
    assert r1.csv_path.read_bytes() == r2.csv_path.read_bytes()
    assert r1.json_path.read_text() != r2.json_path.read_text()  # config echo differs
    assert r1.aggregates == r2.aggregates


def test_bernoulli_full_weights_zero_errors(tmp_path):
    # b_n = 1 forces the full interval, so every error metric is exactly zero
    cfg = ExperimentConfig(
        kind="bernoulli", n_max=5000, trials=3, weights="constant:c=1",
        checkpoints=(100, 5000), out_dir=str(tmp_path), figures=False,
    )
    report = run_experiment(cfg)
    for r in report.results:
        assert all(e == 0.0 for e in r.checkpoint_E)
        assert all(m == 0.0 for m in r.checkpoint_norm_cum)
        assert r.violations == (0, 0)


def test_bernoulli_trial_reproducible():
    cfg = ExperimentConfig(kind="bernoulli", n_max=2000, trials=1, base_seed=9,
                           weights="constant:c=0.5", checkpoints=(2000,), figures=False)
    a = run_trial(cfg, 0)
    b = run_trial(cfg, 0)
    assert a == b
    assert a.seed == 9


def test_quad_coeff_injects_quadratic_term(tmp_path):
    base = block_config(tmp_path / "base", trials=2)
    bent = block_config(tmp_path / "bent", trials=2, quad_coeff=0.51 * 0.25)
    rb = run_experiment(base)
    rq = run_experiment(bent)
    delta = (0.51 - 0.5) * 0.25
    for tb, tq in zip(rb.results, rq.results):
        for cp, eb, eq in zip(base.checkpoints, tb.checkpoint_E, tq.checkpoint_E):
            assert math.isclose(eq, eb - delta * cp**2, rel_tol=1e-12, abs_tol=1e-9)
    # the perturbed normalized error dwarfs the honest one at the top checkpoint
    mb = [abs(t.checkpoint_norm_cum[-1]) for t in rb.results]
    mq = [abs(t.checkpoint_norm_cum[-1]) for t in rq.results]
    assert min(mq) > 10 * max(mb)


def test_capacity_error_states_requirement(tmp_path):
    cfg = block_config(tmp_path, mem_budget_gib=0.001)
    with pytest.raises(CapacityError, match="GiB"):
        run_experiment(cfg)
    assert estimate_trial_bytes(cfg.n_max) > 0.001 * (1 << 30)


def test_figures_rendered_alongside_csv(tmp_path):
    cfg = block_config(tmp_path, figures=True, trials=2)
    report = run_experiment(cfg)
    assert len(report.figure_paths) == 2
    for path in report.figure_paths:
        assert path.exists() and path.stat().st_size > 1000
        assert path.suffix == ".png"
