"""Diagnostics: error series, energy estimate, smoothness, L2 comparison."""

import math

import numpy as np
import pytest

import qfluid as qf
from qfluid.diagnostics import RunRecord
from qfluid.presets import default_grid, default_params


def synthetic_record(grid, t, mean, var, snapshots=None):
    n = len(t)
    return RunRecord(
        grid=grid,
        t=np.asarray(t, dtype=float),
        mean=np.asarray(mean, dtype=float),
        var=np.asarray(var, dtype=float),
        mass=np.ones(n),
        max_abs_V=np.zeros(n),
        center_energy=np.zeros(n),
        smoothness_series=np.zeros(n),
        status=["ok"] * n,
        snapshots=snapshots or {},
        steps_survived=n - 1,
        final_status="ok",
    )


def test_center_error_on_exact_trajectory():
    params = default_params()
    grid = default_grid()
    t = np.arange(0.0, 30.0)
    rec = synthetic_record(grid, t, params.a * np.cos(params.omega * t), np.full(len(t), 256.0))
    assert np.allclose(qf.center_error(rec, params), 0.0, atol=1e-14)
    err = qf.dispersion_error(rec, params)
    assert np.allclose(err, np.abs(256.0 / params.equilibrium_sigma2() - 1.0), atol=1e-12)


def test_center_error_absolute_when_amplitude_zero():
    params = qf.PhysicalParams(D=25.0, omega=0.1, a=0.0)
    grid = default_grid()
    rec = synthetic_record(grid, [0.0, 1.0], [0.3, -0.2], [250.0, 250.0])
    assert np.allclose(qf.center_error(rec, params), [0.3, 0.2])


def test_center_energy_estimate_on_exact_packet():
    params = default_params()
    grid = default_grid()
    state = qf.init_coherent_state(params, grid, 0.0)
    e = qf.center_energy_estimate(state, grid, params)
    e_c = qf.OracleWave(params).center_energy()
    assert e == pytest.approx(e_c, rel=0.02)
    assert e == pytest.approx(e_c, rel=1e-3)  # actual accuracy is much tighter


def test_center_energy_estimate_zero_amplitude():
    base = default_params()
    params = qf.PhysicalParams(D=base.D, omega=base.omega, a=0.0)
    grid = default_grid()
    state = qf.init_coherent_state(params, grid, 0.0)
    e = qf.center_energy_estimate(state, grid, params)
    assert e == pytest.approx(params.D * params.omega, rel=0.02)
    # doubling D doubles the zero-point estimate (wider grid: the packet
    # width grows with sqrt(D))
    wide = qf.make_grid(-128.0, 1.0, 256)
    params2 = qf.PhysicalParams(D=2 * base.D, omega=base.omega, a=0.0)
    e1 = qf.center_energy_estimate(qf.init_coherent_state(params, wide, 0.0), wide, params)
    e2 = qf.center_energy_estimate(qf.init_coherent_state(params2, wide, 0.0), wide, params2)
    assert e2 == pytest.approx(2.0 * e1, rel=1e-6)


def test_smoothness_of_exact_packet():
    # second difference of the quadratic ln rho is the constant -dx^2/sigma^2
    params = default_params()
    grid = default_grid()
    state = qf.init_coherent_state(params, grid, 0.0)
    expected = (grid.dx**2 * params.omega / params.D) ** 2
    assert qf.smoothness(state, grid) == pytest.approx(expected, rel=1e-9)


def test_smoothness_increases_with_noise():
    params = default_params()
    grid = default_grid()
    state = qf.init_coherent_state(params, grid, 0.0)
    before = qf.smoothness(state, grid)
    qf.perturb_density(state, np.random.default_rng(1))
    assert qf.smoothness(state, grid) > 100 * before


def test_l2_distance_identical_records():
    grid = default_grid()
    rho = np.exp(-grid.positions**2 / 512.0)
    snaps = {k: (rho, np.zeros(grid.n)) for k in range(3)}
    rec = synthetic_record(grid, [0.0, 1.0, 2.0], [0, 0, 0], [256] * 3, snapshots=snaps)
    steps, dist = qf.l2_density_distance(rec, rec)
    assert list(steps) == [0, 1, 2]
    assert np.all(dist == 0.0)


def test_l2_distance_shifted_gaussian():
    # independent oracle: direct grid quadrature of two unit-mass Gaussians
    # (sigma = 4 dx) shifted by one cell; the analytic value is
    # sqrt(2 (1 - exp(-dx^2/(4 sigma^2)))) = 0.17609
    grid = qf.make_grid(-60.0, 1.0, 121)
    x = grid.positions
    sigma = 4.0
    g0 = np.exp(-(x**2) / (2 * sigma**2)) / math.sqrt(2 * math.pi * sigma**2)
    g1 = np.exp(-((x - 1.0) ** 2) / (2 * sigma**2)) / math.sqrt(2 * math.pi * sigma**2)
    oracle = np.sqrt(np.sum((g0 - g1) ** 2) * grid.dx) / np.sqrt(np.sum(g0**2) * grid.dx)
    analytic = math.sqrt(2.0 * (1.0 - math.exp(-1.0 / (4 * sigma**2))))
    assert oracle == pytest.approx(analytic, rel=1e-12)

    rec_a = synthetic_record(grid, [0.0], [0.0], [16.0], snapshots={0: (g0, np.zeros(grid.n))})
    rec_b = synthetic_record(grid, [0.0], [1.0], [16.0], snapshots={0: (g1, np.zeros(grid.n))})
    _, dist = qf.l2_density_distance(rec_a, rec_b)
    assert dist[0] == pytest.approx(oracle, rel=1e-12)
    assert dist[0] == pytest.approx(0.176, abs=0.002)


def test_l2_distance_uses_common_steps_only():
    grid = default_grid()
    rho = np.exp(-grid.positions**2 / 512.0)
    rec_a = synthetic_record(grid, [0.0, 1.0], [0, 0], [256, 256],
                             snapshots={0: (rho, np.zeros(grid.n)), 2: (rho, np.zeros(grid.n))})
    rec_b = synthetic_record(grid, [0.0, 1.0], [0, 0], [256, 256],
                             snapshots={0: (rho, np.zeros(grid.n)), 3: (rho, np.zeros(grid.n))})
    steps, dist = qf.l2_density_distance(rec_a, rec_b)
    assert list(steps) == [0]


def test_diagnostics_are_pure():
    params = default_params()
    grid = default_grid()
    rec = qf.run(qf.RunConfig(steps=10), params, grid)
    e1 = qf.center_error(rec, params)
    e2 = qf.center_error(rec, params)
    assert np.array_equal(e1, e2)
    d1 = qf.dispersion_error(rec, params)
    d2 = qf.dispersion_error(rec, params)
    assert np.array_equal(d1, d2)
