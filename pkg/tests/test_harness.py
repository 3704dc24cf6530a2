from __future__ import annotations

import numpy as np
import pytest

from drlse.acquisition import AcquisitionConfig, AcquisitionKind, ComputationPath
from drlse.ambiguity import binary_masses
from drlse.bands import AccuracyParams, BetaSchedule
from drlse.gp import KernelSpec
from drlse.harness import (
    AmbiguityDescriptor,
    ExperimentConfig,
    aggregate_records,
    f_score,
    ground_truth_H,
    monte_carlo,
    run,
    timing_ablation,
)
from drlse.problems import BenchmarkSpec, evaluate_grid


def booth_config(
    kind=AcquisitionKind.PROPOSED2,
    iterations=20,
    n=8,
    alpha=0.62,
    eta=0.0,
    seeds=(0,),
    path=ComputationPath.APPROX,
    zeta=0.005,
):
    return ExperimentConfig(
        problem=BenchmarkSpec("booth", n_design=n, n_env=n),
        kernel=KernelSpec(1300.0**2, 4.0, 1e-4),
        accuracy=AccuracyParams(
            threshold=100.0, alpha=alpha, eta=eta, beta=BetaSchedule.fixed(2.0)
        ),
        ambiguity=AmbiguityDescriptor("l1", 0.65, "uniform"),
        acquisition=AcquisitionConfig(
            kind=kind, gamma=0.01, path=path, zeta_per_region=zeta
        ),
        iterations=iterations,
        seeds=seeds,
    )


# ---------------------------------------------------------------------
# F-score
# ---------------------------------------------------------------------

def test_f_score_perfect_match():
    assert f_score([1, 2, 3], [1, 2, 3]) == 1.0


def test_f_score_formula_example():
    # |hit| = 2, |estimate| = 4, |truth| = 2 -> precision 1/2, recall 1.
    assert f_score([1, 2], [1, 2, 5, 6]) == pytest.approx(2.0 / 3.0)


def test_f_score_disjoint_and_empty():
    assert f_score([1, 2], [5, 6]) == 0.0
    assert f_score([1, 2], []) == 0.0
    with pytest.raises(ValueError):
        f_score([], [1])


def test_f_score_monotone_in_hits():
    # More of the truth captured at the same estimate size is never worse.
    assert f_score([1, 2, 3], [1, 2, 9]) >= f_score([1, 2, 3], [1, 8, 9])


# ---------------------------------------------------------------------
# Ground truth
# ---------------------------------------------------------------------

def test_ground_truth_tiny_radius_matches_plain_probability():
    cfg = booth_config()
    tiny = AmbiguityDescriptor("l1", 1e-12, "uniform")
    truth = ground_truth_H(cfg.problem, tiny, 100.0, 0.62)
    domain = cfg.problem.domain()
    values = evaluate_grid(cfg.problem, domain).reshape(domain.n_design, -1)
    plain = (values > 100.0).mean(axis=1)
    np.testing.assert_array_equal(truth, np.flatnonzero(plain > 0.62))


def test_ground_truth_huge_radius_requires_unanimity():
    cfg = booth_config()
    wide = AmbiguityDescriptor("l1", 2.0, "uniform")
    truth = ground_truth_H(cfg.problem, wide, 100.0, 0.9)
    domain = cfg.problem.domain()
    values = evaluate_grid(cfg.problem, domain).reshape(domain.n_design, -1)
    np.testing.assert_array_equal(truth, np.flatnonzero((values > 100.0).all(axis=1)))


def test_ground_truth_booth_row_is_proper_subset():
    cfg = booth_config(n=30)
    truth = ground_truth_H(cfg.problem, cfg.ambiguity, 100.0, 0.62)
    assert 0 < truth.size < 30


# ---------------------------------------------------------------------
# The run loop
# ---------------------------------------------------------------------

def test_single_iteration_observes_initial_plus_one():
    cfg = booth_config(iterations=1)
    record = run(cfg, seed=3, timer=None)
    assert len(record.rows) == 1
    assert record.rows[0].t == 1


def test_run_is_deterministic():
    cfg = booth_config(iterations=12)
    a = run(cfg, seed=5, timer=None)
    b = run(cfg, seed=5, timer=None)
    assert len(a.rows) == len(b.rows)
    for ra, rb in zip(a.rows, b.rows):
        assert ra == rb
    c = run(cfg, seed=6, timer=None)
    assert any(ra != rc for ra, rc in zip(a.rows, c.rows))


def test_rows_are_well_formed():
    cfg = booth_config(iterations=10)
    record = run(cfg, seed=1, timer=None)
    n = cfg.problem.n_design
    for row in record.rows:
        assert 0 <= row.x_index < n and 0 <= row.w_index < n
        assert row.above_size + row.below_size + row.undecided_size == n
        assert 0.0 <= row.f_score <= 1.0
        assert row.acq_seconds == 0.0
    assert [row.t for row in record.rows] == list(range(1, len(record.rows) + 1))


def test_positive_margin_terminates_small_grid():
    """With a positive margin the undecided set empties well under the cap."""
    cfg = booth_config(n=3, iterations=60, eta=0.1 * 1300.0)
    record = run(cfg, seed=0, timer=None)
    assert record.terminated
    assert len(record.rows) < 60
    assert record.rows[-1].undecided_size == 0


def test_paths_produce_identical_selections_when_lossless():
    base = dict(iterations=10, n=6)
    records = {}
    for path, zeta in [
        (ComputationPath.EXACT, 0.005),
        (ComputationPath.EXACT_PRUNED, 0.005),
        (ComputationPath.APPROX, 0.0),
    ]:
        cfg = booth_config(path=path, zeta=zeta, **base)
        records[path] = [
            (r.x_index, r.w_index) for r in run(cfg, seed=2, timer=None).rows
        ]
    assert records[ComputationPath.EXACT] == records[ComputationPath.EXACT_PRUNED]
    assert records[ComputationPath.EXACT] == records[ComputationPath.APPROX]


def test_noise_variance_reaches_observations():
    cfg = booth_config(iterations=6)
    record = run(cfg, seed=4, timer=None)
    domain = cfg.problem.domain()
    values = evaluate_grid(cfg.problem, domain)
    for row in record.rows:
        truth_value = values[domain.joint_index(row.x_index, row.w_index)]
        assert abs(row.y - truth_value) < 6 * np.sqrt(cfg.kernel.noise_variance)
        assert row.y != truth_value  # noise actually drawn


# ---------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------

def test_f_series_carry_forward():
    cfg = booth_config(n=3, iterations=40, eta=0.1 * 1300.0)
    record = run(cfg, seed=0, timer=None)
    assert record.terminated
    series = record.f_series(40)
    last_row = record.rows[-1]
    assert series.shape == (40,)
    assert np.all(series[last_row.t - 1 :] == last_row.f_score)


def test_monte_carlo_aggregate_shape_and_seeds():
    cfg = booth_config(iterations=8, seeds=(0, 1, 2))
    records, curve = monte_carlo(cfg, timer=None)
    assert len(records) == 3
    assert curve.n_seeds == 3
    assert curve.t.tolist() == list(range(1, 9))
    series = np.stack([r.f_series(8) for r in records])
    np.testing.assert_allclose(curve.f_mean, series.mean(axis=0))
    np.testing.assert_allclose(curve.f_sd, series.std(axis=0))
    rebuilt = aggregate_records(records, 8)
    np.testing.assert_array_equal(rebuilt.f_mean, curve.f_mean)


# ---------------------------------------------------------------------
# Timing ablation
# ---------------------------------------------------------------------

def test_timing_ablation_paths_and_shapes():
    cfg = booth_config(iterations=3, n=6)
    result = timing_ablation(cfg, seed=0)
    assert result.labels == (
        "naive-1000",
        "exact",
        "exact-pruned",
        "approx-1e-04",
        "approx-1e-08",
        "approx-1e-12",
    )
    for label in result.labels:
        times = result.seconds[label]
        assert times.shape == (3,)
        assert np.all(times > 0.0)
    mean, sd = result.mean_sd("exact")
    assert mean > 0.0 and sd >= 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        booth_config(iterations=0)
    with pytest.raises(ValueError):
        booth_config(seeds=())
