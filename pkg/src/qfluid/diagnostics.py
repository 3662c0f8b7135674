"""Per-step measurements, oracle/reference comparison metrics, run summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FluidState, PhysicalParams, SpatialGrid
from .forces import fd_log_gradient, fd_quantum_potential, moments

__all__ = [
    "RunRecord",
    "center_error",
    "dispersion_error",
    "center_energy_estimate",
    "smoothness",
    "l2_density_distance",
]


@dataclass
class RunRecord:
    """Time series of diagnostics for one run (step 0 = initial state).

    Series all have length steps_survived + 1.  snapshots maps step index to
    (rho, V) arrays at the snapshot cadence.  status holds the per-step
    stepper status ("ok" or "cfl_warning"); final_status records how the run
    ended ("ok" or a divergence label).
    """

    grid: SpatialGrid
    t: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    mass: np.ndarray
    max_abs_V: np.ndarray
    center_energy: np.ndarray
    smoothness_series: np.ndarray
    status: list[str]
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]]
    steps_survived: int
    final_status: str
    max_center_error: float = float("nan")
    max_var_error: float = float("nan")


def center_error(record: RunRecord, params: PhysicalParams) -> np.ndarray:
    """|mean(t) - a cos(omega t)| / a per step (absolute error if a = 0)."""
    expected = params.a * np.cos(params.omega * record.t)
    err = np.abs(record.mean - expected)
    if params.a > 0:
        err = err / params.a
    return err


def dispersion_error(record: RunRecord, params: PhysicalParams) -> np.ndarray:
    """|var(t)/(D/omega) - 1| per step."""
    return np.abs(record.var / params.equilibrium_sigma2() - 1.0)


def center_energy_estimate(state: FluidState, grid: SpatialGrid, params: PhysicalParams) -> float:
    """Energy estimate at the packet center: V(xbar)^2/2 + phi(xbar) + Q(xbar).

    Q comes from the log-derivative stencil chain, linearly interpolated at
    the (generically off-grid) measured mean.
    """
    m = moments(state, grid)
    x = grid.positions
    Q = fd_quantum_potential(fd_log_gradient(state, grid), grid, params)
    # interpolate inside the stencil-valid region only
    q_at_mean = float(np.interp(m.mean, x[2:-2], Q[2:-2]))
    v_at_mean = float(np.interp(m.mean, x, state.V))
    return 0.5 * v_at_mean**2 + 0.5 * params.omega**2 * m.mean**2 + q_at_mean


def smoothness(state: FluidState, grid: SpatialGrid) -> float:
    """Mean squared second difference of ln rho over the packet core
    (|x - mean| <= 3 sigma)."""
    m = moments(state, grid)
    x = grid.positions
    d2 = state.ln_rho[2:] - 2 * state.ln_rho[1:-1] + state.ln_rho[:-2]
    core = np.abs(x[1:-1] - m.mean) <= 3.0 * np.sqrt(m.var)
    if not np.any(core):
        return float("nan")
    return float(np.mean(d2[core] ** 2))


def l2_density_distance(record_a: RunRecord, record_b: RunRecord) -> tuple[np.ndarray, np.ndarray]:
    """Relative L2 distance between density snapshots at matching steps.

    Returns (steps, distances) with one entry per step index present in both
    records: sqrt(sum (rho_a - rho_b)^2 dx) / sqrt(sum rho_a^2 dx).
    """
    common = sorted(set(record_a.snapshots) & set(record_b.snapshots))
    dx = record_a.grid.dx
    steps = np.array(common, dtype=int)
    dist = np.empty(len(common))
    for i, k in enumerate(common):
        rho_a = record_a.snapshots[k][0]
        rho_b = record_b.snapshots[k][0]
        num = np.sqrt(np.sum((rho_a - rho_b) ** 2) * dx)
        den = np.sqrt(np.sum(rho_a**2) * dx)
        dist[i] = num / den
    return steps, dist
