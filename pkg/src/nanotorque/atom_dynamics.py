"""Two-level internal dynamics: steady state and optical Bloch evolution.

Equations of motion (rotating frame, detuning Delta, Rabi frequency Omega):

    d rho_ee / dt = -Im(Omega rho_ge) - Gamma rho_ee
    d rho_ge / dt = (i Delta - Gamma/2) rho_ge + (i Omega* / 2)(rho_ee - rho_gg)

Delta is a direct input; surface-induced level shifts are not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StepTooLarge
from .fiber_modes import GuidedModeId

MAX_STEP_PRODUCT = 0.1


@dataclass(frozen=True)
class BlochState:
    rho_ee: float
    rho_ge: complex = 0j
    time: float = 0.0

    def __post_init__(self):
        tol = 1e-12
        if not (-tol <= self.rho_ee <= 1 + tol):
            raise DomainError(f"rho_ee = {self.rho_ee} outside [0, 1]")
        if abs(self.rho_ge) ** 2 > self.rho_ee * (1 - self.rho_ee) + tol:
            raise DomainError("coherence violates |rho_ge|^2 <= rho_ee (1 - rho_ee)")


@dataclass(frozen=True)
class DriveSpec:
    """Driving guided field: mode (f_c, p_c), power (W) and detuning (rad/s)."""

    mode_id: GuidedModeId
    power_P: float
    detuning_Delta: float = 0.0

    def __post_init__(self):
        if not self.power_P >= 0:
            raise DomainError("drive power must be non-negative")


def steady_state_rho_ee(Omega: complex, Delta: float, Gamma: float) -> float:
    if not Gamma > 0:
        raise DomainError("Gamma must be positive")
    w2 = abs(Omega) ** 2
    return w2 / (4 * Delta**2 + Gamma**2 + 2 * w2)


def steady_state(Omega: complex, Delta: float, Gamma: float) -> BlochState:
    """Fixed point of the Bloch equations (population and coherence)."""
    rho_ee = steady_state_rho_ee(Omega, Delta, Gamma)
    rho_ge = 1j * np.conj(Omega) * (rho_ee - (1 - rho_ee)) / 2 / (Gamma / 2 - 1j * Delta)
    return BlochState(rho_ee, complex(rho_ge))


def _derivs(rho_ee, rho_ge, Omega, Delta, Gamma):
    d_ee = -(Omega * rho_ge).imag - Gamma * rho_ee
    d_ge = (1j * Delta - Gamma / 2) * rho_ge + 0.5j * np.conj(Omega) * (2 * rho_ee - 1)
    return d_ee, d_ge


def rho_dot(state: BlochState, Omega: complex, Gamma: float, Delta: float = 0.0):
    """(d rho_ee/dt, d rho_ge/dt) at ``state``."""
    d_ee, d_ge = _derivs(state.rho_ee, state.rho_ge, Omega, Delta, Gamma)
    return float(d_ee), complex(d_ge)


def evolve_bloch(state: BlochState, Omega: complex, Delta: float, Gamma: float,
                 dt: float, n_steps: int = 1) -> BlochState:
    """Advance ``n_steps`` fixed RK4 steps of size ``dt``."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    fastest = max(Gamma, abs(Omega), abs(Delta))
    if dt * fastest > MAX_STEP_PRODUCT:
        raise StepTooLarge(f"dt * max(Gamma, |Omega|, |Delta|) = {dt * fastest:.3g} > {MAX_STEP_PRODUCT}")
    y = np.array([state.rho_ee, state.rho_ge], dtype=complex)

    def f(v):
        d_ee, d_ge = _derivs(v[0].real, v[1], Omega, Delta, Gamma)
        return np.array([d_ee, d_ge], dtype=complex)

    for _ in range(n_steps):
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return BlochState(float(y[0].real), complex(y[1]), state.time + n_steps * dt)


def excitation_rate(state: BlochState, Omega: complex, Gamma: float) -> float:
    """Upward transition rate Gamma rho_ee + d rho_ee/dt."""
    d_ee, _ = rho_dot(state, Omega, Gamma)
    return Gamma * state.rho_ee + d_ee
