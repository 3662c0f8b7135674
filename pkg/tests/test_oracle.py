"""Closed-form coherent packet: internal consistency and defining relations."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import qfluid as qf
from qfluid.presets import default_params


@pytest.fixture(scope="module")
def wave():
    return qf.OracleWave(default_params())


def test_density_is_modulus_squared(wave):
    x = np.linspace(-40, 40, 101)
    for t in (0.0, 3.7, 16.0, 50.1):
        assert np.allclose(np.abs(wave.psi(x, t)) ** 2, wave.density(x, t), rtol=1e-13)


def test_phase_vanishes_at_t0(wave):
    x = np.linspace(-40, 40, 101)
    psi = wave.psi(x, 0.0)
    assert np.allclose(psi.imag, 0.0, atol=1e-15)
    assert np.all(psi.real > 0)


def test_madelung_velocity_from_phase(wave):
    # V = 2 D * d(theta)/dx, with theta_x = Im(psi_x / psi) to dodge phase wraps
    p = wave.params
    h = 1e-3
    for t in (2.0, 9.0, 23.5, 40.0):
        for x in (-5.0, 0.0, 4.0, 11.0):
            dpsi = (wave.psi(x + h, t) - wave.psi(x - h, t)) / (2 * h)
            v = 2 * p.D * (dpsi / wave.psi(x, t)).imag
            assert v == pytest.approx(wave.velocity(t), abs=1e-6)


def test_madelung_velocity_unit_amplitude():
    p = default_params()
    params = qf.PhysicalParams(D=p.D, omega=p.omega, a=1.0)
    wave = qf.OracleWave(params)
    h = 1e-3
    for t in (1.0, 7.0, 30.0):
        dpsi = (wave.psi(2.0 + h, t) - wave.psi(2.0 - h, t)) / (2 * h)
        v = 2 * params.D * (dpsi / wave.psi(2.0, t)).imag
        assert v == pytest.approx(-params.omega * math.sin(params.omega * t), abs=1e-7)


def test_density_normalization(wave):
    for t in (0.0, 11.0, 37.0):
        total, err = quad(lambda xx: wave.density(xx, t), -300, 300)
        assert err < 1e-9
        assert total == pytest.approx(1.0, abs=1e-8)


def test_density_peak_at_minus_a_after_half_period(wave):
    p = wave.params
    t = math.pi / p.omega
    xs = np.linspace(-20, 20, 4001)
    peak_x = xs[np.argmax(wave.density(xs, t))]
    assert peak_x == pytest.approx(-p.a, abs=0.02)


def test_density_variance_is_D_over_omega(wave):
    # independent oracle: quadrature of the printed density's second moment
    p = wave.params
    for t in (0.0, 5.0, 21.0):
        c = p.a * math.cos(p.omega * t)
        var, err = quad(lambda xx: (xx - c) ** 2 * wave.density(xx, t), c - 200, c + 200)
        assert err < 1e-8
        assert var == pytest.approx(p.D / p.omega, rel=1e-9)


def test_velocity_values(wave):
    p = wave.params
    assert wave.velocity(0.0) == 0.0
    assert wave.velocity(0.5 * math.pi / p.omega) == pytest.approx(-p.a * p.omega)
    still = qf.OracleWave(qf.PhysicalParams(D=p.D, omega=p.omega, a=0.0))
    assert all(still.velocity(t) == 0.0 for t in (0.0, 3.0, 17.0))


def test_potential_center_value(wave):
    p = wave.params
    for t in (0.0, 4.0, 26.0):
        center = p.a * math.cos(p.omega * t)
        assert wave.potential_q(center, t) == pytest.approx(p.D * p.omega, rel=1e-12)
    still = qf.OracleWave(qf.PhysicalParams(D=p.D, omega=p.omega, a=0.0))
    assert still.potential_q(0.0, 1.0) == pytest.approx(p.D * p.omega)


def test_force_is_negative_potential_gradient(wave):
    rng = np.random.default_rng(42)
    h = 1e-3
    for _ in range(100):
        x = rng.uniform(-30, 30)
        t = rng.uniform(0, 128)
        grad = (wave.potential_q(x + h, t) - wave.potential_q(x - h, t)) / (2 * h)
        assert -grad == pytest.approx(wave.force(x, t), abs=1e-6)


def test_force_values(wave):
    p = wave.params
    for t in (0.0, 8.0, 19.0):
        center = p.a * math.cos(p.omega * t)
        assert wave.force(center, t) == pytest.approx(0.0, abs=1e-14)
        assert wave.force(center + 1.0, t) == pytest.approx(p.omega**2)


def test_force_plus_trap_is_uniform(wave):
    # the quantum force cancels the trap up to -omega^2 a cos(omega t):
    # rigid transport of the packet
    p = wave.params
    x = np.linspace(-40, 40, 201)
    for t in (0.0, 6.0, 31.0):
        total = wave.force(x, t) - p.omega**2 * x
        expected = -p.omega**2 * p.a * math.cos(p.omega * t)
        assert np.allclose(total, expected, atol=1e-12)


def test_energy_identity(wave):
    # E = V^2/2 + phi + Q pointwise
    p = wave.params
    x = np.linspace(-35, 35, 101)
    for t in (0.0, 3.0, 12.0, 47.0):
        assembled = (
            0.5 * wave.velocity(t) ** 2 + 0.5 * p.omega**2 * x**2 + wave.potential_q(x, t)
        )
        assert np.allclose(assembled, wave.energy(x, t), atol=1e-12)


def test_energy_at_center_is_pendulum_plus_zero_point(wave):
    p = wave.params
    e_c = wave.center_energy()
    assert e_c == pytest.approx(p.D * p.omega + 0.5 * p.a**2 * p.omega**2)
    for t in np.linspace(0.0, 128.0, 20):
        center = p.a * math.cos(p.omega * t)
        assert wave.energy(center, t) == pytest.approx(e_c, rel=1e-12)


def test_zero_amplitude_energy_is_zero_point(wave):
    p = wave.params
    still = qf.OracleWave(qf.PhysicalParams(D=p.D, omega=p.omega, a=0.0))
    x = np.linspace(-30, 30, 61)
    assert np.allclose(still.energy(x, 5.0), p.D * p.omega, atol=1e-14)


def _fd4(f, z, h):
    """Fourth-order central first derivative."""
    return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)


def _fd4_second(f, z, h):
    """Fourth-order central second derivative."""
    return (
        -f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)
    ) / (12 * h**2)


def test_generalized_schrodinger_residual(wave):
    # D^2 psi_xx + i D psi_t - (omega^2 x^2 / 4) psi = 0 on the closed form.
    # Step 0.02 balances stencil truncation against roundoff in the D^2 term;
    # much smaller steps bury the check in cancellation noise.
    p = wave.params
    h = 0.02
    rng = np.random.default_rng(7)
    for _ in range(100):
        x = rng.uniform(-25, 25)
        t = rng.uniform(1.0, 127.0)
        psi_xx = _fd4_second(lambda xx: wave.psi(xx, t), x, h)
        psi_t = _fd4(lambda tt: wave.psi(x, tt), t, h)
        residual = p.D**2 * psi_xx + 1j * p.D * psi_t - 0.25 * p.omega**2 * x**2 * wave.psi(x, t)
        assert abs(residual) <= 1e-6 * abs(wave.psi(x, t))
