"""Acceptance gate: one test per shipped criterion.

Each test prints a PASS/FAIL line through the session reporter (echoed
in the terminal summary) and then asserts, so a red criterion is both
visible and fatal.  The slow criteria (5, 6, 8) dominate the runtime of
the suite; everything here is deterministic given the frozen seeds.
"""

from __future__ import annotations

import itertools
import time

import numpy as np
import pytest

from drlse.acquisition import (
    AcquisitionConfig,
    AcquisitionKind,
    ComputationPath,
    approx_expectation,
    exact_expectation,
    exact_expectation_pruned,
)
from drlse.ambiguity import AmbiguitySet, ReferenceDistribution, worst_case_mass
from drlse.bands import AccuracyParams, BetaSchedule
from drlse.gp import KernelSpec, ObservationLog, fit
from drlse.grid import GridDomain
from drlse.harness import (
    AmbiguityDescriptor,
    ExperimentConfig,
    ground_truth_H,
    run,
    timing_ablation,
)
from drlse.oracle import mesh_min_mass, naive_expectation, vertex_lp_min
from drlse.problems import BenchmarkSpec, SirParams, evaluate_grid
from drlse.report import write_run_csv


def booth_table1(alpha: float, reference: str, n: int, iterations: int, kind, gamma=0.01):
    """Booth with the published L1 parameter row, on an n x n grid."""
    return ExperimentConfig(
        problem=BenchmarkSpec("booth", n_design=n, n_env=n),
        kernel=KernelSpec(1300.0**2, 4.0, 1e-4),
        accuracy=AccuracyParams(
            threshold=100.0, alpha=alpha, beta=BetaSchedule.fixed(2.0)
        ),
        ambiguity=AmbiguityDescriptor("l1", 0.65, reference),
        acquisition=AcquisitionConfig(kind=kind, gamma=gamma),
        iterations=iterations,
    )


# ---------------------------------------------------------------------
# Criterion 1: ambiguity correctness
# ---------------------------------------------------------------------

def test_criterion_1_ambiguity_correctness(acceptance_report):
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in range(2, 7):
        for _ in range(20):
            probs = rng.dirichlet(np.ones(n))
            aset = AmbiguitySet(
                "l1", float(rng.uniform(0.05, 1.8)), ReferenceDistribution(probs)
            )
            for bits in itertools.product((0.0, 1.0), repeat=n):
                costs = np.array(bits)
                gap = abs(worst_case_mass(aset, costs) - vertex_lp_min(aset, costs))
                worst = max(worst, gap)
    l2_worst = 0.0
    for _ in range(10):
        probs = rng.dirichlet(np.ones(3))
        aset = AmbiguitySet(
            "l2", float(rng.uniform(0.05, 0.8)), ReferenceDistribution(probs)
        )
        costs = rng.integers(0, 2, size=3).astype(float)
        gap = abs(worst_case_mass(aset, costs) - mesh_min_mass(aset, costs, 1 / 400))
        l2_worst = max(l2_worst, gap)
    elapsed = time.perf_counter() - start
    mesh_tol = 3 * 3.0 / 400.0
    ok = worst <= 1e-9 and l2_worst <= mesh_tol and elapsed < 60.0
    acceptance_report(
        1,
        "ambiguity correctness",
        ok,
        f"L1 gap {worst:.2e}, L2 gap {l2_worst:.2e}, {elapsed:.1f}s",
    )
    assert worst <= 1e-9
    assert l2_worst <= mesh_tol
    assert elapsed < 60.0


# ---------------------------------------------------------------------
# Criteria 2-4: Lemma machinery on 50 random posteriors
# ---------------------------------------------------------------------

def _lemma_instance(master: int):
    rng = np.random.default_rng(master)
    n1 = int(rng.integers(3, 11))
    n2 = int(rng.integers(2, 9))
    domain = GridDomain.from_ranges((-2, 2), (-2, 2), n1, n2)
    kernel = KernelSpec(
        float(rng.uniform(0.5, 3.0)),
        float(rng.uniform(1.0, 5.0)),
        float(rng.uniform(0.02, 0.3)),
    )
    t = int(rng.integers(2, 12))
    gp = fit(
        domain,
        kernel,
        ObservationLog(
            rng.integers(0, domain.size, size=t), rng.normal(0.5, 1.0, size=t)
        ),
    )
    aset = AmbiguitySet(
        "l1",
        float(rng.uniform(0.05, 0.4)),
        ReferenceDistribution(rng.dirichlet(np.ones(n2) * 2)),
    )
    params = AccuracyParams(
        threshold=float(rng.normal(0.2, 0.3)),
        alpha=float(rng.uniform(0.25, 0.6)),
        beta=BetaSchedule.fixed(float(rng.uniform(0.5, 2.0))),
    )
    return gp, aset, params, int(rng.integers(n1))


@pytest.fixture(scope="module")
def lemma_instances():
    return [_lemma_instance(master) for master in range(50)]


def test_criterion_2_exact_expectation_vs_monte_carlo(
    lemma_instances, acceptance_report
):
    start = time.perf_counter()
    worst_z = 0.0
    failures = 0
    pairs = 0
    for master, (gp, aset, params, x) in enumerate(lemma_instances):
        for cand in range(gp.domain.size):
            exact = exact_expectation(gp, x, cand, aset, params)
            est, se = naive_expectation(
                gp, x, cand, aset, params, 20000,
                np.random.default_rng(master * 1000 + cand),
            )
            worst_z = max(worst_z, abs(exact - est) / se)
            pairs += 1
            if abs(exact - est) > 3.0 * se:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 300.0
    acceptance_report(
        2,
        "breakpoint sum vs Monte Carlo",
        ok,
        f"{pairs} pairs, worst z {worst_z:.2f}, {elapsed:.1f}s",
    )
    assert failures == 0
    assert elapsed < 300.0


def test_criterion_3_pruning_lossless(lemma_instances, acceptance_report):
    worst = 0.0
    for gp, aset, params, x in lemma_instances:
        for cand in range(gp.domain.size):
            gap = abs(
                exact_expectation(gp, x, cand, aset, params)
                - exact_expectation_pruned(gp, x, cand, aset, params)
            )
            worst = max(worst, gap)
    acceptance_report(3, "pruning losslessness", worst <= 1e-12, f"max gap {worst:.2e}")
    assert worst <= 1e-12


def test_criterion_4_cutoff_error_bound(lemma_instances, acceptance_report):
    worst_excess = -np.inf
    one_sided = True
    for gp, aset, params, x in lemma_instances:
        bound_unit = gp.domain.n_env + 1
        for cand in range(gp.domain.size):
            exact = exact_expectation(gp, x, cand, aset, params)
            for cutoff in (1e-4, 1e-8, 1e-12):
                approx = approx_expectation(gp, x, cand, aset, params, cutoff)
                if approx > exact + 1e-15:
                    one_sided = False
                worst_excess = max(
                    worst_excess, (exact - approx) - cutoff * bound_unit
                )
    ok = one_sided and worst_excess <= 1e-15
    acceptance_report(
        4,
        "cutoff approximation bound",
        ok,
        f"max error excess {worst_excess:.2e}, one-sided {one_sided}",
    )
    assert one_sided
    assert worst_excess <= 1e-15


# ---------------------------------------------------------------------
# Criterion 5: computation-path speedup
# ---------------------------------------------------------------------

def test_criterion_5_path_speedup(acceptance_report):
    config = booth_table1(
        alpha=0.5,
        reference="normal",
        n=30,
        iterations=50,
        kind=AcquisitionKind.PROPOSED1,
    )
    result = timing_ablation(config, seed=0)
    naive_mean, _ = result.mean_sd("naive-1000")
    exact_mean, _ = result.mean_sd("exact")
    approx_mean, _ = result.mean_sd("approx-1e-08")
    vs_exact = exact_mean / approx_mean
    vs_naive = naive_mean / approx_mean
    ok = vs_exact >= 10.0 and vs_naive >= 100.0
    acceptance_report(
        5,
        "cutoff path speedup",
        ok,
        f"exact/approx {vs_exact:.1f}x, naive/approx {vs_naive:.1f}x "
        f"(naive {naive_mean:.2f}s, exact {exact_mean:.3f}s, approx {approx_mean:.4f}s)",
    )
    assert vs_exact >= 10.0
    assert vs_naive >= 100.0


# ---------------------------------------------------------------------
# Criterion 6: end-to-end learning on Booth
# ---------------------------------------------------------------------

def test_criterion_6_booth_learning(acceptance_report):
    start = time.perf_counter()
    seeds = range(10)
    medians = {}
    at300 = None
    for kind in (AcquisitionKind.PROPOSED2, AcquisitionKind.RANDOM, AcquisitionKind.US):
        config = booth_table1(
            alpha=0.62, reference="uniform", n=30, iterations=300, kind=kind
        )
        series = np.stack(
            [run(config, seed, timer=None).f_series(300) for seed in seeds]
        )
        medians[kind] = float(np.median(series[:, 149]))
        if kind is AcquisitionKind.PROPOSED2:
            at300 = float(np.median(series[:, 299]))
    elapsed = time.perf_counter() - start
    proposed = medians[AcquisitionKind.PROPOSED2]
    exceeds = proposed > medians[AcquisitionKind.RANDOM] and proposed > medians[
        AcquisitionKind.US
    ]
    reaches = at300 >= 0.8
    ok = exceeds and reaches and elapsed < 1800.0
    acceptance_report(
        6,
        "Booth end-to-end learning",
        ok,
        f"median@150 proposed2 {proposed:.3f} vs random "
        f"{medians[AcquisitionKind.RANDOM]:.3f} / us {medians[AcquisitionKind.US]:.3f}; "
        f"median@300 {at300:.3f}; {elapsed:.0f}s",
    )
    assert elapsed < 1800.0
    assert reaches, f"median F at 300 is {at300:.3f} < 0.8"
    assert exceeds, (
        f"median F at 150: proposed2 {proposed:.3f} does not strictly exceed "
        f"random {medians[AcquisitionKind.RANDOM]:.3f} and us "
        f"{medians[AcquisitionKind.US]:.3f}"
    )


# ---------------------------------------------------------------------
# Criterion 7: guaranteed-termination mechanism
# ---------------------------------------------------------------------

def test_criterion_7_positive_margin_terminates(acceptance_report):
    config = ExperimentConfig(
        problem=BenchmarkSpec("booth", n_design=5, n_env=5),
        kernel=KernelSpec(1300.0**2, 4.0, 1e-4),
        accuracy=AccuracyParams(
            threshold=100.0,
            alpha=0.62,
            eta=0.1 * 1300.0,
            beta=BetaSchedule.fixed(2.0),
        ),
        ambiguity=AmbiguityDescriptor("l1", 0.65, "uniform"),
        acquisition=AcquisitionConfig(kind=AcquisitionKind.PROPOSED1, gamma=0.01),
        iterations=200,
    )
    records = [run(config, seed, timer=None) for seed in (0, 1, 2)]
    iters = [len(r.rows) for r in records]
    ok = all(r.terminated for r in records)
    acceptance_report(
        7, "positive-margin termination", ok, f"emptied after {iters} iterations"
    )
    for record in records:
        assert record.terminated
        assert record.rows[-1].undecided_size == 0
        assert len(record.rows) <= 200


# ---------------------------------------------------------------------
# Criterion 8: epidemic-control problem
# ---------------------------------------------------------------------

def sir_config(kind):
    return ExperimentConfig(
        problem=BenchmarkSpec("sir", n_design=50, n_env=50),
        kernel=KernelSpec(250.0**2, 0.5, 0.025),
        accuracy=AccuracyParams(
            threshold=135.0, alpha=0.9, beta=BetaSchedule.fixed(4.0)
        ),
        ambiguity=AmbiguityDescriptor("l1", 0.05, "sir-normal"),
        acquisition=AcquisitionConfig(kind=kind, gamma=0.01),
        iterations=100,
    )


def test_criterion_8_sir_properties(acceptance_report):
    params = SirParams()
    n = params.population
    # Conservation along an explicitly tracked trajectory.
    s, i, r = n - params.initial_infected, params.initial_infected, 0.0
    beta, gamma = params.rates(0.4, -0.2)
    conserved = True
    for _ in range(params.horizon):
        flow = beta * s * i / n * params.dt
        rec = gamma * i * params.dt
        s, i, r = s - flow, i + flow - rec, r + rec
        conserved &= abs(s + i + r - n) <= 1e-6 * n
    assert conserved

    # Peak monotone in the mapped infection rate across the grid.
    spec = BenchmarkSpec("sir", n_design=25, n_env=25)
    domain = spec.domain()
    peaks = (
        evaluate_grid(spec, domain).reshape(25, 25)
        + params.economic_weight * domain.design_points[:, 0][:, None]
    )
    monotone = bool(np.all(np.diff(peaks, axis=0) >= -1e-9))
    assert monotone

    # Ordinal end-to-end comparison at the published parameters.
    truth = ground_truth_H(
        sir_config(AcquisitionKind.RANDOM).problem,
        AmbiguityDescriptor("l1", 0.05, "sir-normal"),
        135.0,
        0.9,
    )
    assert truth.size > 0
    seeds = range(7)
    scores = {}
    for kind in (AcquisitionKind.PROPOSED2, AcquisitionKind.RANDOM):
        config = sir_config(kind)
        scores[kind] = np.median(
            [run(config, seed, timer=None).f_series(100)[99] for seed in seeds]
        )
    proposed = float(scores[AcquisitionKind.PROPOSED2])
    random_ = float(scores[AcquisitionKind.RANDOM])
    ok = conserved and monotone and proposed > random_
    acceptance_report(
        8,
        "SIR properties and ordinal learning",
        ok,
        f"median@100 proposed2 {proposed:.3f} vs random {random_:.3f}",
    )
    assert proposed > random_


# ---------------------------------------------------------------------
# Criterion 9: byte-identical output
# ---------------------------------------------------------------------

def test_criterion_9_deterministic_csv(tmp_path, acceptance_report):
    config = booth_table1(
        alpha=0.62,
        reference="uniform",
        n=8,
        iterations=10,
        kind=AcquisitionKind.PROPOSED2,
    )
    first = write_run_csv(run(config, 11, timer=None), tmp_path / "first.csv")
    second = write_run_csv(run(config, 11, timer=None), tmp_path / "second.csv")
    identical = first.read_bytes() == second.read_bytes()
    acceptance_report(
        9, "byte-identical CSV", identical, f"{first.stat().st_size} bytes compared"
    )
    assert identical
