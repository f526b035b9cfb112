"""Complete-system solver and noise-amplification tests.

Worked values used below:
  * mu=(2,0,2,0): the linear step solves [[2,0],[0,2]](s2,s1) = -(2,0),
    so sigma=(0,-1) and Q=z^2-1 with roots (-1,1); amplitudes solve
    a1+a2=2, -a1+a2=0, giving A=(1,1).
  * mu=(0,1,0,1): [[0,1],[1,0]](s2,s1) = -(0,1) gives sigma_1=0, sigma_2=-1,
    so X=(-1,1) again and A=(-1/2,1/2) from a1+a2=0, -a1+a2=1.
  * mu=(2,0,-2,0): [[2,0],[0,-2]](s2,s1) = (2,0) gives sigma=(0,1), and
    z^2+1 has no real roots: no two-spike signal matches these moments.
  * mu=(1,0,-1,-2): the same step gives sigma=(-2,1), and z^2-2z+1 is
    (z-1)^2: a repeated root is not a valid node pair either.
  * The d=2 size-h cluster has A=(1,-1), X=(0,h), so its moments are
    mu_k = -h^k for k>=1 and mu_0 = 0; its family parameter is
    t = -mu_3 = h^3 (the last moment equation carries a sign flip).
  * mu=(1.1290059010262046, 0.6859468387960028, -1.0504763861156126,
    -1.2821546935359023, -0.6135053375267643), the first uniform[-2,2]^5
    draw of default_rng(4242), has K<0 with a rootless boundary quartic:
    no parameter is hyperbolic at all, so the d=3 family is empty.
"""

import numpy as np
import pytest

from prony import prony_line as pl
from prony import prony_solver as ps
from prony.errors import (
    EmptyDomain,
    NoRealSolution,
    TooFewValidTrials,
)
from prony.signal_model import (
    MomentVector,
    Signal,
    compute_moments,
    elementary_symmetric,
)

EMPTY_DOMAIN_MU = (1.1290059010262046, 0.6859468387960028,
                   -1.0504763861156126, -1.2821546935359023,
                   -0.6135053375267643)


def _random_signal(rng, d):
    # well separated nodes, amplitudes bounded away from zero
    gaps = rng.uniform(0.2, 1.5, d)
    nodes = rng.uniform(-3.0, 0.0) + np.cumsum(gaps)
    amps = rng.uniform(0.5, 2.0, d) * rng.choice([-1.0, 1.0], d)
    return Signal(amps, nodes)


def _grid_through(t_star, half_width=1.0, n=80):
    # generic probe grid that contains t_star exactly
    return np.concatenate(
        [[t_star], np.linspace(t_star - half_width, t_star + half_width, n)])


# ---------------------------------------------------------------------------
# solve_complete


def test_solve_symmetric_pair():
    s = ps.solve_complete((2.0, 0.0, 2.0, 0.0))
    assert np.allclose(s.nodes, [-1.0, 1.0], atol=1e-12)
    assert np.allclose(s.amplitudes, [1.0, 1.0], atol=1e-12)


def test_solve_antisymmetric_pair():
    s = ps.solve_complete((0.0, 1.0, 0.0, 1.0))
    assert np.allclose(s.nodes, [-1.0, 1.0], atol=1e-12)
    assert np.allclose(s.amplitudes, [-0.5, 0.5], atol=1e-12)


def test_solve_round_trip():
    rng = np.random.default_rng(31415)
    for i in range(500):
        d = 2 + i % 3
        true = _random_signal(rng, d)
        mu = compute_moments(true, 2 * d - 1)
        rec = ps.solve_complete(mu)
        assert np.max(np.abs(rec.nodes - true.nodes)) <= 1e-8
        assert np.max(np.abs(rec.amplitudes - true.amplitudes)) <= 1e-7
        back = compute_moments(rec, 2 * d - 1)
        scale = max(1.0, float(np.max(np.abs(mu.values))))
        assert np.max(np.abs(back.values - mu.values)) <= 1e-8 * scale


def test_solve_no_real_solution():
    with pytest.raises(NoRealSolution):
        ps.solve_complete((2.0, 0.0, -2.0, 0.0))


def test_solve_repeated_root_rejected():
    with pytest.raises(NoRealSolution):
        ps.solve_complete((1.0, 0.0, -1.0, -2.0))


def test_solve_degenerate_hankel():
    with pytest.raises(pl.DegenerateHankel):
        ps.solve_complete((1.0, 1.0, 1.0, 1.0))


def test_solve_validation():
    with pytest.raises(ValueError):
        ps.solve_complete((1.0, 2.0, 3.0))  # odd length
    with pytest.raises(ValueError):
        ps.solve_complete((1.0,))
    with pytest.raises(ValueError):
        ps.solve_complete((1.0, np.nan, 0.0, 0.0))


def test_solve_accepts_moment_vector():
    mu = MomentVector((2.0, 0.0, 2.0, 0.0), 3)
    s = ps.solve_complete(mu)
    assert np.allclose(s.nodes, [-1.0, 1.0])


# ---------------------------------------------------------------------------
# make_cluster_signal


def test_cluster_by_construction():
    s = ps.make_cluster_signal(2, 0.1)
    assert np.array_equal(s.nodes, [0.0, 0.1])
    assert np.array_equal(s.amplitudes, [1.0, -1.0])
    s = ps.make_cluster_signal(3, 0.3)
    assert np.array_equal(s.nodes, [0.0, 0.15, 0.3])
    assert np.array_equal(s.amplitudes, [1.0, -1.0, 1.0])


def test_cluster_small_h_moments():
    for h in (0.5, 0.1, 1e-3):
        mu = compute_moments(ps.make_cluster_signal(2, h), 3)
        assert mu.values[0] == 0.0
        assert mu.values[1] == -h
        assert np.isclose(mu.values[2], -h * h, rtol=1e-15)


def test_cluster_seed_is_inert():
    a = ps.make_cluster_signal(2, 0.2, seed=0)
    b = ps.make_cluster_signal(2, 0.2, seed=99)
    assert np.array_equal(a.nodes, b.nodes)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_cluster_validation():
    with pytest.raises(ValueError):
        ps.make_cluster_signal(1, 0.1)
    with pytest.raises(ValueError):
        ps.make_cluster_signal(2, 0.0)
    with pytest.raises(ValueError):
        ps.make_cluster_signal(2, -0.5)


# ---------------------------------------------------------------------------
# the family parameter of a complete-system signal


def test_parameter_is_negated_last_moment():
    rng = np.random.default_rng(2718)
    for i in range(50):
        d = 2 + i % 3
        s = _random_signal(rng, d)
        mu = compute_moments(s, 2 * d - 1)
        line = pl.line_params(MomentVector(mu.values[: 2 * d - 1], 2 * d - 2))
        t = line.parameter_of(elementary_symmetric(s.nodes))
        ref = -float(mu.values[2 * d - 1])
        assert abs(t - ref) <= 1e-9 * max(1.0, abs(ref))


# ---------------------------------------------------------------------------
# curve_distance


def test_distance_membership():
    rng = np.random.default_rng(161803)
    for i in range(20):
        d = 2 + i % 2
        s = _random_signal(rng, d)
        mu = compute_moments(s, 2 * d - 1)
        head = MomentVector(mu.values[: 2 * d - 1], 2 * d - 2)
        grid = _grid_through(-float(mu.values[2 * d - 1]))
        assert ps.curve_distance(s, head, grid) <= 1e-7


def test_distance_two_spike_example():
    s = Signal((-0.5, 0.5), (-1.0, 1.0))
    dist = ps.curve_distance(s, (0.0, 1.0, 0.0), _grid_through(-1.0))
    assert dist <= 1e-9


def test_distance_bounded_by_perturbation():
    rng = np.random.default_rng(55)
    for _ in range(20):
        s = _random_signal(rng, 2)
        mu = compute_moments(s, 3)
        delta = rng.uniform(-1e-4, 1e-4, 4)
        moved = Signal(s.amplitudes + delta[:2], s.nodes + delta[2:])
        grid = _grid_through(-float(mu.values[3]))
        dist = ps.curve_distance(moved, MomentVector(mu.values[:3], 2), grid)
        # the unperturbed signal sits on the family at a sampled parameter
        assert dist <= np.linalg.norm(delta) * (1.0 + 1e-9) + 1e-12


def test_distance_empty_domain():
    s = _random_signal(np.random.default_rng(3), 3)
    with pytest.raises(EmptyDomain):
        ps.curve_distance(s, EMPTY_DOMAIN_MU, np.linspace(-2, 2, 41))


def test_distance_dimension_mismatch():
    s = _random_signal(np.random.default_rng(4), 3)
    with pytest.raises(ValueError):
        ps.curve_distance(s, (0.0, 1.0, 0.0), np.linspace(-2, 0, 11))


def test_noisy_reconstructions_hug_the_family():
    # per trial, the nearest family point is no farther than the true
    # signal, which lies on the family at a sampled parameter (both
    # distances Euclidean; the max-norm point error can be smaller)
    true = ps.make_cluster_signal(2, 0.4)
    mu = compute_moments(true, 3)
    head = MomentVector(mu.values[:3], 2)
    grid = _grid_through(float(-mu.values[3]), half_width=0.5)
    target = np.concatenate([true.amplitudes, true.nodes])
    for trial in range(30):
        rng = np.random.default_rng([77, trial])
        rec = ps.solve_complete(mu.values + rng.uniform(-1e-8, 1e-8, 4))
        guess = np.concatenate([rec.amplitudes, rec.nodes])
        l2_err = float(np.linalg.norm(guess - target))
        # slack absorbs root-refinement noise in the family sampler
        assert ps.curve_distance(rec, head, grid) <= l2_err + 1e-13


# ---------------------------------------------------------------------------
# NoiseConfig / AmplificationResult


def test_config_defaults_and_mapping():
    cfg = ps.NoiseConfig.from_mapping({
        "d": 2, "epsilon": 1e-8, "trials": 10, "seed": 3,
        "h_grid": [0.4, 0.2]})
    assert cfg.h == 0.4
    assert cfg.t_resolution == 21
    with pytest.raises(ValueError):
        ps.NoiseConfig.from_mapping({"d": 2, "epsilon": 1e-8, "trials": 10,
                                     "seed": 3, "h_grid": [0.4, 0.2],
                                     "bogus": 1})
    with pytest.raises(ValueError):
        ps.NoiseConfig.from_mapping({"d": 2, "epsilon": 1e-8, "trials": 10,
                                     "seed": 3})


def test_config_validation():
    ok = dict(d=2, epsilon=1e-8, trials=5, seed=0, h_grid=(0.4, 0.2))
    ps.NoiseConfig(**ok)
    for bad in (dict(ok, d=1), dict(ok, epsilon=0.0), dict(ok, trials=0),
                dict(ok, h_grid=(0.2, 0.4)), dict(ok, h_grid=(0.4,)),
                dict(ok, h_grid=(0.4, 0.4)), dict(ok, h_grid=(0.4, -0.1)),
                dict(ok, t_resolution=2), dict(ok, seed=-1)):
        with pytest.raises(ValueError):
            ps.NoiseConfig(**bad)


def test_result_validation():
    rows = ((0.4, 1e-6, 1e-7, 0), (0.2, 1e-5, 1e-6, 0))
    ps.AmplificationResult(rows=rows, point_slope=-3.0, point_intercept=0.0,
                           point_r2=1.0, curve_slope=-2.0,
                           curve_intercept=0.0, curve_r2=1.0)
    with pytest.raises(ValueError):
        ps.AmplificationResult(rows=rows[:1], point_slope=-3.0,
                               point_intercept=0.0, point_r2=1.0,
                               curve_slope=-2.0, curve_intercept=0.0,
                               curve_r2=1.0)
    with pytest.raises(ValueError):
        bad = ((0.4, 1e-7, 1e-6, 0), rows[1])  # curve above point
        ps.AmplificationResult(rows=bad, point_slope=-3.0,
                               point_intercept=0.0, point_r2=1.0,
                               curve_slope=-2.0, curve_intercept=0.0,
                               curve_r2=1.0)


# ---------------------------------------------------------------------------
# amplification_experiment


def test_experiment_slopes_and_determinism():
    cfg = ps.NoiseConfig(d=2, epsilon=1e-8, trials=50, seed=7,
                         h_grid=(0.4, 0.2, 0.1))
    res = ps.amplification_experiment(cfg)
    assert all(row[3] == 0 for row in res.rows)
    assert res.point_slope < -2.3
    assert -2.6 < res.curve_slope < -1.4
    assert res.curve_slope >= res.point_slope + 0.4
    assert res.point_r2 > 0.95 and res.curve_r2 > 0.95
    again = ps.amplification_experiment(cfg)
    assert res.rows == again.rows
    assert res.point_slope == again.point_slope
    assert res.curve_slope == again.curve_slope


def test_experiment_errors_scale_with_epsilon():
    small = ps.NoiseConfig(d=2, epsilon=1e-8, trials=40, seed=77,
                           h_grid=(0.4, 0.1))
    big = ps.NoiseConfig(d=2, epsilon=1e-7, trials=40, seed=77,
                         h_grid=(0.4, 0.1))
    r1 = ps.amplification_experiment(small)
    r2 = ps.amplification_experiment(big)
    for (_, p1, c1, _), (_, p2, c2, _) in zip(r1.rows, r2.rows):
        assert 5.0 <= p2 / p1 <= 20.0
        assert 5.0 <= c2 / c1 <= 20.0


def test_experiment_accepts_mapping():
    res = ps.amplification_experiment({
        "d": 2, "epsilon": 1e-8, "trials": 10, "seed": 5,
        "h_grid": [0.4, 0.2]})
    assert len(res.rows) == 2


def test_experiment_epsilon_too_large():
    cfg = ps.NoiseConfig(d=2, epsilon=0.2, trials=5, seed=0,
                         h_grid=(0.4, 0.2))
    with pytest.raises(ValueError):
        ps.amplification_experiment(cfg)


def test_experiment_reports_failure_flood():
    # at the epsilon ceiling and a tight d=3 cluster, most perturbed
    # systems leave the real hyperbolic regime
    cfg = ps.NoiseConfig(d=3, epsilon=0.1, trials=40, seed=9,
                         h_grid=(0.3, 0.2))
    with pytest.raises(TooFewValidTrials) as err:
        ps.amplification_experiment(cfg)
    assert "h=" in str(err.value)
