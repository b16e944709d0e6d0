"""Minkowski angular-momentum densities of guided light.

Densities use the complex reduced components e, h of the (f=+1, p=+1) mode
with explicit circulation prefactors p:

    j_orb  = |A|^2 p { (eps0 n^2 / 4w)[l|e|^2 - 2 Im(e_r* e_phi)]
                       + (mu0 / 4w)[l|h|^2 - 2 Im(h_r* h_phi)] }
    j_spin = |A|^2 p { (eps0 n^2 / 2w) Im(e_r* e_phi) + (mu0 / 2w) Im(h_r* h_phi) }
    u      = |A|^2 { (eps0 n^2 / 4)|e|^2 + (mu0 / 4)|h|^2 }
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT, epsilon_0 as EPS0, hbar as HBAR, mu_0 as MU0

from .errors import DegeneratePoint, QuadratureNotConverged
from .fiber_modes import GuidedMode, _radial_integral


@dataclass(frozen=True)
class AMDensities:
    """Axial AM densities (J s / m^3) and energy density (J / m^3) at one radius."""

    j_orb: float
    j_spin: float
    j_can: float
    u: float


@dataclass(frozen=True)
class IntegratedAM:
    """Per-unit-length J_orb, J_spin (J s / m) and energy U (J / m)."""

    J_orb: float
    J_spin: float
    U: float
    omega: float

    @property
    def J_total(self) -> float:
        return self.J_orb + self.J_spin

    @property
    def photon_am(self) -> float:
        """hbar omega J / U, in units of hbar."""
        return self.omega * self.J_total / self.U

    @property
    def orbital_spin_ratio(self) -> float:
        return self.J_orb / self.J_spin if self.J_spin else math.inf


def _terms(mode: GuidedMode, r):
    e_r, e_phi, e_z, h_r, h_phi, h_z = mode._complex_reduced(r)
    nsq = mode.fiber.index(r) ** 2
    e2 = np.abs(e_r) ** 2 + np.abs(e_phi) ** 2 + np.abs(e_z) ** 2
    h2 = np.abs(h_r) ** 2 + np.abs(h_phi) ** 2 + np.abs(h_z) ** 2
    im_e = np.imag(np.conj(e_r) * e_phi)
    im_h = np.imag(np.conj(h_r) * h_phi)
    return nsq, e2, h2, im_e, im_h


def _density_arrays(mode, amplitude_A, p, l, r):
    w = mode.omega
    a2 = abs(amplitude_A) ** 2
    nsq, e2, h2, im_e, im_h = _terms(mode, r)
    j_orb = a2 * p * (EPS0 * nsq / (4 * w) * (l * e2 - 2 * im_e) + MU0 / (4 * w) * (l * h2 - 2 * im_h))
    j_spin = a2 * p * (EPS0 * nsq / (2 * w) * im_e + MU0 / (2 * w) * im_h)
    u = a2 * (EPS0 * nsq / 4 * e2 + MU0 / 4 * h2)
    return j_orb, j_spin, u


def am_densities(mode: GuidedMode, amplitude_A: float, p: int, l: int, r: float) -> AMDensities:
    j_orb, j_spin, u = (float(x) for x in _density_arrays(mode, amplitude_A, p, l, r))
    return AMDensities(j_orb, j_spin, j_orb + j_spin, u)


def canonical_density_direct(mode: GuidedMode, amplitude_A: float, p: int, l: int, r):
    """p l (eps0 n^2 |e|^2 + mu0 |h|^2) |A|^2 / 4w, without the orbital/spin split."""
    nsq, e2, h2, _, _ = _terms(mode, r)
    return abs(amplitude_A) ** 2 * p * l * (EPS0 * nsq * e2 + MU0 * h2) / (4 * mode.omega)


def photon_am(mode: GuidedMode, amplitude_A: float, p: int, l: int, r: float) -> float:
    """hbar omega j_can / u at r, returned in units of hbar."""
    d = am_densities(mode, amplitude_A, p, l, r)
    if d.u == 0:
        raise DegeneratePoint(f"energy density vanishes at r = {r:g}")
    return mode.omega * d.j_can / d.u


def integrated_am(mode: GuidedMode, amplitude_A: float, p: int, l: int, rtol: float = 1e-12) -> IntegratedAM:
    """Cross-section integrals of j_orb, j_spin and u (adaptive radial quadrature)."""
    if mode.q <= 0:
        raise QuadratureNotConverged("mode is not evanescent outside the core")
    a = mode.fiber.radius_a

    def integ(index):
        return 2 * math.pi * _radial_integral(
            lambda r: _density_arrays(mode, amplitude_A, p, l, r)[index] * r, a, mode.q, rtol)

    out = IntegratedAM(integ(0), integ(1), integ(2), mode.omega)
    if not all(math.isfinite(x) for x in (out.J_orb, out.J_spin, out.U)):
        raise QuadratureNotConverged("non-finite angular-momentum integral")
    return out


def poynting_angular_momentum(mode: GuidedMode, amplitude_A: float, f: int = 1, p: int | None = None) -> float:
    """J_z = (1/c^2) int n^2 r S_phi dA from the assembled fields.

    Pointwise this differs from j_can; only the integrals must agree.
    """
    def integrand(r):
        (e_r, e_phi, e_z), (h_r, h_phi, h_z) = mode.fields(r, f, p)
        s_phi = 0.5 * np.real(e_z * np.conj(h_r) - e_r * np.conj(h_z))
        return mode.fiber.index(r) ** 2 * r * s_phi * r
    total = _radial_integral(integrand, mode.fiber.radius_a, mode.q)
    return 2 * math.pi * abs(amplitude_A) ** 2 * total / C_LIGHT**2


def photon_am_hbar_units(value: float) -> float:
    """Convert J s to units of hbar."""
    return value / HBAR
