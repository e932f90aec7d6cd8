import math

import numpy as np
import pytest

from ouroboros.checker import CheckConfig
from ouroboros.slln import (
    DistributionSpec,
    average_of_averages,
    convergence_csv,
    default_checkpoints,
    defect_bound,
    membership_sweep,
    seed_batch,
    simulate_path,
)
from ouroboros.verdict import Status


def test_distribution_parsing_and_moments():
    d = DistributionSpec.parse("exponential(2)")
    assert d == DistributionSpec.exponential(2.0)
    assert d.analytic_mean == 0.5
    assert d.label == "exponential(2)"
    assert DistributionSpec.parse("uniform(0, 1)").std == pytest.approx(1 / math.sqrt(12))


@pytest.mark.parametrize("text", ["cauchy(0,1)", "poisson(3)", "uniform(1,0)", "bernoulli(1.5)", "normal(0)", "uniform"])
def test_bad_distributions(text):
    with pytest.raises(ValueError):
        DistributionSpec.parse(text)


def test_default_checkpoints_end_at_n_max():
    assert default_checkpoints(10) == [1, 2, 4, 8, 10]
    assert default_checkpoints(1) == [1]


def test_uniform_running_mean_converges():
    trace = simulate_path(DistributionSpec.uniform(0.0, 1.0), 1_000_000, seed=42)
    assert trace.n_checkpoints[-1] == 1_000_000
    assert trace.final_abs_error <= 0.002


def test_prefix_consistency_of_one_path():
    d = DistributionSpec.uniform(-1.0, 1.0)
    coarse = simulate_path(d, 1000, [10, 1000], seed=5)
    fine = simulate_path(d, 1000, [10, 500, 1000], seed=5)
    assert coarse.running_means[0] == pytest.approx(fine.running_means[0])
    assert coarse.running_means[-1] == pytest.approx(fine.running_means[-1])


def test_bernoulli_path_segments_sum_exactly():
    d = DistributionSpec.bernoulli(0.3)
    checkpoints = [10, 100, 1000]
    trace = simulate_path(d, 1000, checkpoints, seed=7)
    draws = d.draw(np.random.default_rng(7), 1000)
    sums = [round(m * n) for m, n in zip(trace.running_means, checkpoints)]
    assert sums[0] == int(draws[:10].sum())
    for k in range(1, len(checkpoints)):
        lo, hi = checkpoints[k - 1], checkpoints[k]
        assert sums[k] - sums[k - 1] == int(draws[lo:hi].sum())


def test_degenerate_bernoulli_is_exact():
    trace = simulate_path(DistributionSpec.bernoulli(1.0), 100_000, seed=3)
    assert all(e == 0.0 for e in trace.abs_errors)


def test_paths_are_reproducible():
    d = DistributionSpec.uniform(-2.0, 2.0)
    assert simulate_path(d, 5000, seed=9) == simulate_path(d, 5000, seed=9)
    assert simulate_path(d, 5000, seed=9) != simulate_path(d, 5000, seed=10)


def test_invalid_checkpoints():
    d = DistributionSpec.uniform()
    with pytest.raises(ValueError):
        simulate_path(d, 100, [10, 5])
    with pytest.raises(ValueError):
        simulate_path(d, 100, [200])


def test_exponential_seed_batch_acceptance():
    summary = seed_batch(DistributionSpec.exponential(2.0), 1_000_000, range(100), 0.005)
    assert summary.total == 100
    assert summary.accepted(0.95)


def test_uniform_seed_batch_acceptance():
    summary = seed_batch(DistributionSpec.uniform(0.0, 1.0), 1_000_000, range(100), 0.002)
    assert summary.total == 100
    assert summary.accepted(0.95)


def test_average_of_averages_matches_pooled_mean():
    nested = average_of_averages(DistributionSpec.normal(3.0, 2.0), batches=16, batch_size=256, seed=1)
    assert nested.defect <= 1e-9
    assert nested.mean_of_means == pytest.approx(3.0, abs=0.1)


def test_membership_sweep_under_distribution():
    results = membership_sweep(DistributionSpec.exponential(1.0), [2, 8, 32], CheckConfig(sample_count=300))
    assert [n for n, _ in results] == [2, 8, 32]
    for n, verdict in results:
        assert verdict.status is Status.HOLDS_PROBABLY
        assert verdict.max_defect <= defect_bound(n, 20.0)
    with pytest.raises(ValueError):
        membership_sweep(DistributionSpec.uniform(), [4, 2], CheckConfig())


def test_convergence_csv_layout():
    trace = simulate_path(DistributionSpec.bernoulli(0.5), 100, [10, 100], seed=1)
    lines = convergence_csv(trace).splitlines()
    assert lines[0] == "n,running_mean,analytic_mean,abs_error"
    assert [line.split(",")[0] for line in lines[1:]] == ["10", "100"]
