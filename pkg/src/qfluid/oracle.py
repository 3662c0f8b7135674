"""Closed-form oscillating wave packet: the exact coherent solution used as
ground truth for tests, diagnostics, and the oracle_exact force estimator.

All quantities follow from the wave function

    psi(x,t) = (omega/2 pi D)^(1/4)
               * exp[-(omega/4D)(x - a cos(omega t))^2]
               * exp[-i( omega t/2 + (omega/2D) a x sin(omega t)
                         - (omega/8D) a^2 sin(2 omega t) )]

whose density is a rigidly-translating Gaussian of variance D/omega and
whose velocity field V = 2D grad(theta) is uniform in space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams

__all__ = ["OracleWave"]


@dataclass(frozen=True)
class OracleWave:
    """Evaluator for the exact coherent-packet solution of one scenario."""

    params: PhysicalParams

    def center(self, t):
        """Packet center a cos(omega t)."""
        p = self.params
        return p.a * np.cos(p.omega * t)

    def psi(self, x, t):
        """Complex amplitude of the packet (unit norm, M-independent)."""
        p = self.params
        x = np.asarray(x, dtype=float)
        envelope = (p.omega / (2 * math.pi * p.D)) ** 0.25 * np.exp(
            -(p.omega / (4 * p.D)) * (x - self.center(t)) ** 2
        )
        phase = -(
            0.5 * p.omega * t
            + (p.omega / (2 * p.D)) * p.a * x * np.sin(p.omega * t)
            - (p.omega / (8 * p.D)) * p.a**2 * np.sin(2 * p.omega * t)
        )
        return envelope * np.exp(1j * phase)

    def density(self, x, t):
        """Probability density sqrt(omega/2 pi D) exp[-(omega/2D)(x - center)^2]."""
        p = self.params
        x = np.asarray(x, dtype=float)
        return np.sqrt(p.omega / (2 * math.pi * p.D)) * np.exp(
            -(p.omega / (2 * p.D)) * (x - self.center(t)) ** 2
        )

    def velocity(self, t):
        """Uniform velocity -a omega sin(omega t)."""
        p = self.params
        return -p.a * p.omega * np.sin(p.omega * t)

    def potential_q(self, x, t):
        """Quantum potential D omega - (1/2) omega^2 (x - center)^2."""
        p = self.params
        x = np.asarray(x, dtype=float)
        return p.D * p.omega - 0.5 * p.omega**2 * (x - self.center(t)) ** 2

    def force(self, x, t):
        """Quantum force -dQ/dx = omega^2 (x - center); cancels the external
        harmonic force up to a spatially uniform remainder, which is what
        transports the packet rigidly."""
        p = self.params
        x = np.asarray(x, dtype=float)
        return p.omega**2 * (x - self.center(t))

    def energy(self, x, t):
        """Pointwise energy E = V^2/2 + phi + Q."""
        p = self.params
        x = np.asarray(x, dtype=float)
        return (
            p.D * p.omega
            + p.a * p.omega**2 * x * np.cos(p.omega * t)
            - 0.5 * p.a**2 * p.omega**2 * np.cos(2 * p.omega * t)
        )

    def center_energy(self) -> float:
        """Energy at the packet center: zero-point term plus pendulum term."""
        p = self.params
        return p.D * p.omega + 0.5 * p.a**2 * p.omega**2
