import numpy as np
import pytest

from locscape import (BoundaryCondition, DistributionSpec, DomainError, PathConfig, assemble,
                      estimate_landscape_mc, grid_1d, landscape_from_operator, probe_points_for,
                      sample_potential, simulate_reflecting_path, smallest_eigenpairs)


def test_reflected_path_stays_inside():
    cfg = PathConfig(dt=1e-3, seed=4)
    for dim in (1, 2):
        pos, dF = simulate_reflecting_path(dim, 0.5, cfg, n_steps=2000)
        assert pos.min() >= 0.0 and pos.max() <= 1.0
        assert dF.sum() > 0.0      # a 2-time-unit path does hit the walls


def test_local_time_zero_without_wall_contact():
    # a short small-step path from the center cannot reach a wall
    pos, dF = simulate_reflecting_path(1, 0.5, PathConfig(dt=1e-5, seed=5), n_steps=50)
    assert 0.25 < pos.min() and pos.max() < 0.75
    assert np.all(dF == 0.0)


def test_mean_displacement_vanishes_by_symmetry():
    cfg = PathConfig(dt=1e-4, seed=8)
    n_paths, n_steps = 2000, 100     # t = 0.01 from the center
    finals = np.empty(n_paths)
    for i in range(n_paths):
        pos, _ = simulate_reflecting_path(1, 0.5, PathConfig(dt=1e-4, seed=cfg.seed ^ i), n_steps)
        finals[i] = pos[-1, 0]
    disp = finals - 0.5
    se = disp.std(ddof=1) / np.sqrt(n_paths)
    assert abs(disp.mean()) < 3 * se


def test_start_point_must_lie_in_domain():
    with pytest.raises(DomainError):
        simulate_reflecting_path(1, 1.5, PathConfig(), 10)
    fieldv = sample_potential(grid_1d(10), DistributionSpec.bernoulli(1.0), 0)
    with pytest.raises(DomainError):
        estimate_landscape_mc(-0.1, fieldv, 10.0, BoundaryCondition.neumann(), PathConfig())


def test_constant_potential_estimate_is_exact():
    fieldv = sample_potential(grid_1d(30), DistributionSpec.bernoulli(1.0), 0)
    cfg = PathConfig(n_paths=10_000, seed=11)
    est = estimate_landscape_mc(0.5, fieldv, 100.0, BoundaryCondition.neumann(), cfg)
    assert abs(est.mean - 0.01) <= max(3 * est.std_error, 1e-12)
    # per-step exponential killing makes every path identical here
    assert est.std_error < 1e-15


def test_absorbing_walls_give_exit_time_parabola():
    fieldv = sample_potential(grid_1d(30), DistributionSpec.bernoulli(0.0), 0)
    cfg = PathConfig(n_paths=10_000, seed=12, t_max=4.0)
    est = estimate_landscape_mc(0.5, fieldv, 1.0, BoundaryCondition.dirichlet(), cfg)
    assert abs(est.mean - 0.125) <= 3 * est.std_error
    assert est.std_error < 0.01


def test_estimates_agree_with_fd_landscape(strong_disorder_1d):
    grid, fieldv, K, bc = strong_disorder_1d
    # fine-resolution difference oracle so its own interface bias is negligible
    fine = grid_1d(30, 32)
    fine_field = sample_potential(fine, DistributionSpec.bernoulli(0.5), fieldv.seed)
    op = assemble(fine, fine_field, K, bc)
    w = landscape_from_operator(op).w
    cfg = PathConfig(dt=2e-5, n_paths=10_000, seed=13)
    for x in probe_points_for(fieldv, 5):
        est = estimate_landscape_mc(x, fieldv, K, bc, cfg)
        node = int(np.argmin(np.abs(op.axes[0] - x)))
        assert abs(est.mean - w[node]) <= 3 * est.std_error


def test_stiff_robin_walls_approach_absorbing_walls():
    fieldv = sample_potential(grid_1d(20), DistributionSpec.bernoulli(0.0), 0)
    cfg = PathConfig(dt=2e-5, n_paths=10_000, seed=14, t_max=4.0)
    robin = estimate_landscape_mc(0.5, fieldv, 1.0, BoundaryCondition.robin(1e4), cfg)
    absorbed = estimate_landscape_mc(0.5, fieldv, 1.0, BoundaryCondition.dirichlet(), cfg)
    combined = np.hypot(robin.std_error, absorbed.std_error)
    assert abs(robin.mean - absorbed.mean) <= 3 * combined


def test_halving_dt_moves_constant_estimate_less_than_one_se():
    fieldv = sample_potential(grid_1d(10), DistributionSpec.bernoulli(1.0), 0)
    bc = BoundaryCondition.neumann()
    a = estimate_landscape_mc(0.3, fieldv, 50.0, bc, PathConfig(dt=1e-4, n_paths=2000, seed=15))
    b = estimate_landscape_mc(0.3, fieldv, 50.0, bc, PathConfig(dt=5e-5, n_paths=2000, seed=15))
    assert abs(a.mean - b.mean) <= max(a.std_error, 1e-12)


def test_estimator_independent_of_chunking(strong_disorder_1d):
    grid, fieldv, K, bc = strong_disorder_1d
    a = estimate_landscape_mc(0.4, fieldv, K, bc, PathConfig(n_paths=500, seed=16, chunk=64))
    b = estimate_landscape_mc(0.4, fieldv, K, bc, PathConfig(n_paths=500, seed=16, chunk=4096))
    assert a.mean == b.mean and a.std_error == b.std_error


def test_landscape_bound_holds_stochastically(strong_disorder_1d):
    grid, fieldv, K, bc = strong_disorder_1d
    op = assemble(grid, fieldv, K, bc)
    pair = smallest_eigenpairs(op, 1)[0]
    cfg = PathConfig(dt=2e-5, n_paths=4000, seed=17)
    for x in probe_points_for(fieldv, 5):
        est = estimate_landscape_mc(x, fieldv, K, bc, cfg)
        node = int(np.argmin(np.abs(op.axes[0] - x)))
        assert pair.eigenvalue * est.mean + 3 * pair.eigenvalue * est.std_error >= abs(pair.mode[node])
