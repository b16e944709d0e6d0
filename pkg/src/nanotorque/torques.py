"""Axial orbital (T) and spin (Q) torques on the atom.

All torques are built from rate-level identities: a drive photon absorbed
from mode (l_c, p_c) transfers p_c l_c hbar, of which q hbar goes into the
internal (spin) state; each spontaneously emitted photon carries away p l hbar
(guided) or l hbar (radiation order l) and returns q hbar of spin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import hbar as HBAR

from .atom_dynamics import BlochState, DriveSpec, rho_dot
from .coupling import AtomSpec, EmissionBreakdown
from .errors import DomainError, UndefinedRatio

ZN_NM = 1e-30  # N m per zN nm


@dataclass(frozen=True)
class TorqueBreakdown:
    """Torque components in N m (F_phi in N) at one configuration."""

    T_drv: float
    Q_drv: float
    T_spon: float
    Q_spon: float
    T_scatt: float
    Q_scatt: float
    T_total: float
    Q_total: float
    F_phi: float
    T_vdw_e: float = 0.0
    T_vdw_g: float = 0.0


def _check_gamma(Gamma):
    if not Gamma > 0:
        raise DomainError("Gamma must be positive")


def drive_orbital_torque(lc: int, pc: int, q: int, Gamma: float, rho_ee: float, rho_dot_ee: float) -> float:
    _check_gamma(Gamma)
    return (pc * lc - q) * HBAR * (Gamma * rho_ee + rho_dot_ee)


def drive_spin_torque(q: int, Gamma: float, rho_ee: float, rho_dot_ee: float) -> float:
    _check_gamma(Gamma)
    return q * HBAR * (Gamma * rho_ee + rho_dot_ee)


def emitted_angular_rate(breakdown: EmissionBreakdown) -> float:
    """Sum of p l gamma (guided) plus l gamma (radiation), in rad/s."""
    return breakdown.guided_angular + breakdown.radiation_angular


def spon_orbital_torque(q: int, breakdown: EmissionBreakdown) -> float:
    """Per-excitation recoil torque q hbar Gamma - hbar (sum p l gamma + sum l gamma)."""
    return HBAR * (q * breakdown.gamma_total - emitted_angular_rate(breakdown))


def spon_spin_torque(q: int, Gamma: float) -> float:
    _check_gamma(Gamma)
    return -q * HBAR * Gamma


def vdw_torques(atom: AtomSpec) -> tuple[float, float]:
    """Excited- and ground-state vdW torques.

    The potentials of a single-q dipole do not depend on phi, so both vanish.
    """
    return 0.0, 0.0


def total_torques(drive: DriveSpec, atom: AtomSpec, state: BlochState,
                  breakdown: EmissionBreakdown, Omega: complex,
                  rho_dot_ee: float | None = None) -> TorqueBreakdown:
    """Every torque component for a driven atom in ``state``.

    ``Omega`` is the Rabi frequency at the atom, used to evaluate d rho_ee/dt
    unless ``rho_dot_ee`` is given (pass 0.0 for a steady state).
    """
    q = atom.q
    lc = drive.mode_id.kind.l
    pc = drive.mode_id.p
    Gamma = breakdown.gamma_total
    rho_ee = state.rho_ee
    if rho_dot_ee is None:
        d_ee, _ = rho_dot(state, Omega, Gamma, drive.detuning_Delta)
    else:
        d_ee = rho_dot_ee
    t_drv = drive_orbital_torque(lc, pc, q, Gamma, rho_ee, d_ee)
    q_drv = drive_spin_torque(q, Gamma, rho_ee, d_ee)
    t_spon = spon_orbital_torque(q, breakdown)
    q_spon = spon_spin_torque(q, Gamma)
    t_scatt = rho_ee * t_spon
    # same operation order as Q_drv, so a steady state cancels bit for bit
    q_scatt = -(q * HBAR * (Gamma * rho_ee))
    t_total = t_drv + t_scatt
    q_total = q_drv + q_scatt
    vdw_e, vdw_g = vdw_torques(atom)
    return TorqueBreakdown(t_drv, q_drv, t_spon, q_spon, t_scatt, q_scatt,
                           t_total, q_total, t_total / atom.r, vdw_e, vdw_g)


def steady_total_torque(lc: int, pc: int, rho_ee: float, breakdown: EmissionBreakdown) -> float:
    """hbar rho_ee (p_c l_c Gamma - sum p l gamma - sum l gamma), the steady-state T_total."""
    return HBAR * rho_ee * (pc * lc * breakdown.gamma_total - emitted_angular_rate(breakdown))


def torque_ratio(lc: int, pc: int, q: int) -> float:
    """Drive orbital/spin torque ratio (p_c l_c - q)/q."""
    if q == 0:
        raise UndefinedRatio("orbital/spin ratio undefined for q = 0")
    return (pc * lc - q) / q


# -- identity residuals ------------------------------------------------------


def _rel(residual, *scale):
    s = math.fsum(abs(x) for x in scale)
    return abs(residual) / s if s else abs(residual)


def drive_identity_residual(tb: TorqueBreakdown, lc: int, pc: int, Gamma: float,
                            rho_ee: float, rho_dot_ee: float) -> float:
    """Relative residual of T_drv + Q_drv = p_c l_c hbar (Gamma rho_ee + d rho_ee/dt)."""
    target = pc * lc * HBAR * (Gamma * rho_ee + rho_dot_ee)
    return _rel(tb.T_drv + tb.Q_drv - target, tb.T_drv, tb.Q_drv, target)


def spon_identity_residual(tb: TorqueBreakdown, breakdown: EmissionBreakdown) -> float:
    """Relative residual of T_spon + Q_spon = -hbar (sum p l gamma + sum l gamma)."""
    target = -HBAR * emitted_angular_rate(breakdown)
    return _rel(tb.T_spon + tb.Q_spon - target, tb.T_spon, tb.Q_spon, target)
