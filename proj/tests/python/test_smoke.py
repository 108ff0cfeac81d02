"""Smoke tests for the Python bindings: a few hand-checked values per
module family, plus determinism of the Monte Carlo harness."""

import math

import pytest

import injnorm


def test_tensor_ops():
    t = injnorm.CoeffTensor(2, 2, [3.0, 4.0, 0.0, 5.0])
    assert t.at([1, 2]) == 4.0
    assert injnorm.rank1_inner(t, [[1.0, 0.0], [0.0, 1.0]]) == pytest.approx(4.0)
    assert injnorm.rank1_stddev(t, [[1.0, 0.0], [0.0, 1.0]]) == pytest.approx(4.0)
    stats = injnorm.coeff_stats(t)
    assert stats.sigma[0] == pytest.approx(math.sqrt(41.0))
    assert stats.sigma[1] == pytest.approx(5.0)
    assert stats.b_max == 5.0
    with pytest.raises(ValueError):
        injnorm.CoeffTensor(2, 2, [1.0])


def test_bounds():
    t = injnorm.CoeffTensor(2, 2, [3.0, 4.0, 0.0, 5.0])
    bd = injnorm.tensor_upper_bound(injnorm.coeff_stats(t), 2, 2, 1.0)
    assert bd.slice_term == pytest.approx(2.0 * (math.sqrt(41.0) + 5.0))
    assert bd.total == pytest.approx(bd.slice_term + bd.log_term)
    assert injnorm.slice_lower_bound(injnorm.coeff_stats(t)) == pytest.approx(math.sqrt(41.0))
    row, col, fourth = injnorm.latala_matrix_terms(t)
    assert (row, col) == (pytest.approx(5.0), pytest.approx(math.sqrt(41.0)))
    assert fourth == pytest.approx(962.0 ** 0.25)
    assert injnorm.gaussian_tail_bound(1.0, 2.0) == pytest.approx(2.0 * math.exp(-2.0))


def test_estimator_and_witness():
    diag = injnorm.CoeffTensor(2, 2, [3.0, 0.0, 0.0, 5.0])
    cfg = injnorm.EstimatorConfig()
    cfg.num_starts = 8
    res = injnorm.alt_max_estimate(diag, cfg, injnorm.SampleSeed(1, 0))
    assert res.value == pytest.approx(5.0, abs=1e-9)
    assert injnorm.grid_oracle(diag, 0.01) == pytest.approx(5.0, abs=1e-6)
    assert injnorm.slice_witness(diag).value == pytest.approx(5.0)


def test_sampling_determinism():
    b = injnorm.CoeffTensor.constant(2, 4, 1.0)
    s1 = injnorm.sample_gaussian(b, injnorm.SampleSeed(42, 7))
    s2 = injnorm.sample_gaussian(b, injnorm.SampleSeed(42, 7))
    assert s1.values.entries() == s2.values.entries()
    s3 = injnorm.sample_gaussian(b, injnorm.SampleSeed(42, 8))
    assert s1.values.entries() != s3.values.entries()


def test_chaining_lab():
    assert injnorm.maurey_sample_count(16, 0.5) == 67
    assert injnorm.sqrt_gap_holds(4.0, 1.0, 1.0)
    ones = injnorm.CoeffTensor.constant(2, 3, 1.0)
    profile = injnorm.fiber_profile(ones, 1, [1.0, 0.0, 0.0])
    assert all(v == pytest.approx(1.0) for v in profile)

    space = injnorm.FiniteMetricSpace([[0.0, 1.0], [1.0, 0.0]])
    adm = injnorm.build_admissible_sequence(space)
    assert adm.functional == pytest.approx(1.0)
    ultra = injnorm.ultrametric_construct(space, adm.tree)
    assert ultra.dist_hat[0][1] == pytest.approx(1.0)
    points = injnorm.hilbert_embed(space)
    dist = math.dist(points[0], points[1])
    assert dist == pytest.approx(1.0, abs=1e-8)


def test_monte_carlo_determinism():
    cfg = injnorm.RunConfig(injnorm.ModelSpec.gaussian(injnorm.CoeffTensor.constant(2, 4, 1.0)))
    cfg.trials = 6
    cfg.master_seed = 11
    cfg.workers = 1
    rep1 = injnorm.run_monte_carlo(cfg)
    cfg.workers = 3
    rep2 = injnorm.run_monte_carlo(cfg)
    assert rep1.to_json() == rep2.to_json()
    assert rep1.upper_holds.holds
    assert all(t.norm_estimate >= t.witness_value - 1e-9 for t in rep1.trials)
