"""Atom-field coupling, directional emission rates and the Rabi frequency.

The dipole has a single spherical component d_q (q = -1, 0, +1), so every
contraction reduces to ``d . e = (-1)^q d e_{-q}``.  Spherical components of
a field at azimuth phi carry an extra ``exp(-i q phi)`` relative to phi = 0.

The counter-rotating coefficients (the G-tilde of the full Hamiltonian)
only feed the van der Waals potentials and are not evaluated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import jv
from scipy.constants import c as C_LIGHT, epsilon_0 as EPS0, hbar as HBAR

from . import kernels
from .errors import DomainError, QuadratureNotConverged
from .fiber_modes import FiberSpec, GuidedMode, GuidedModeId, guided_kinds, mode_profile
from .radiation_modes import QuadraturePlan, RadiationMode, orthonormal_basis, radiation_quadrature

DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class AtomSpec:
    """Two-level emitter: transition wavelength (m), free-space linewidth
    (rad/s), dipole spherical index q and cylindrical position (r, phi, z)."""

    lambda0: float
    gamma0: float
    q: int
    r: float
    phi: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if self.q not in (-1, 0, 1):
            raise DomainError(f"q must be -1, 0 or +1, got {self.q}")
        if not self.gamma0 > 0:
            raise DomainError("gamma0 must be positive")
        if not self.lambda0 > 0:
            raise DomainError("lambda0 must be positive")

    @property
    def omega0(self) -> float:
        return 2 * math.pi * C_LIGHT / self.lambda0

    def moved(self, **kwargs) -> "AtomSpec":
        return replace(self, **kwargs)


def _check_outside(atom: AtomSpec, fiber: FiberSpec):
    if not atom.r > fiber.radius_a:
        raise DomainError(f"atom at r = {atom.r:g} m is not outside the fiber (a = {fiber.radius_a:g} m)")


def dipole_magnitude(atom: AtomSpec) -> float:
    w0 = atom.omega0
    return math.sqrt(3 * math.pi * EPS0 * HBAR * C_LIGHT**3 * atom.gamma0 / w0**3)


def dipole_cartesian(q: int, d: float = 1.0) -> np.ndarray:
    """Cartesian vector whose only spherical component is V_q = d."""
    s2 = math.sqrt(2.0)
    comps = {-1: 0.0, 0: 0.0, 1: 0.0}
    comps[q] = d
    vx = (comps[-1] - comps[1]) / s2
    vy = 1j * (comps[-1] + comps[1]) / s2
    return np.array([vx, vy, comps[0]], dtype=complex)


def spherical_pick(components, q: int):
    """Select e_{-q} from an (e_-1, e_0, e_+1) triple."""
    return components[1 - q]


# -- guided channels ---------------------------------------------------------


def coupling_guided(atom: AtomSpec, mode: GuidedMode) -> complex:
    """G_mu = sqrt(omega beta' / 4 pi eps0 hbar) (d . e) exp(i(f beta z + p l phi))."""
    q = atom.q
    d = dipole_magnitude(atom)
    e_mq = complex(spherical_pick(mode.spherical(atom.r), q))
    d_dot_e = (-1) ** q * d * e_mq * np.exp(-1j * q * atom.phi)
    pref = math.sqrt(mode.omega * mode.beta_prime / (4 * math.pi * EPS0 * HBAR))
    phase = mode.id.f * mode.beta * atom.z + mode.id.p * mode.l * atom.phi
    return complex(pref * d_dot_e * np.exp(1j * phase))


def gamma_guided_rate(atom: AtomSpec, mode: GuidedMode) -> float:
    return 2 * math.pi * abs(coupling_guided(atom, mode)) ** 2


def guided_channels(fiber: FiberSpec, omega: float) -> list[GuidedMode]:
    """Every guided channel (kind, f, p) at omega, each solved once."""
    channels = []
    for kind in guided_kinds(fiber, omega):
        p_values = (1, -1) if kind.family.hybrid else (0,)
        base = mode_profile(fiber, GuidedModeId(omega, kind, 1, p_values[0]))
        for f in (1, -1):
            for p in p_values:
                channels.append(base.with_direction(f, p))
    return channels


def coupling_radiation(atom: AtomSpec, mode: RadiationMode) -> complex:
    """G_nu = sqrt(omega / 4 pi eps0 hbar) (d . e) exp(i(beta z + l phi)).

    With delta(omega) delta(beta) normalization, 2 pi |G_nu|^2 integrated
    over beta and summed over (l, p) is a rate.
    """
    _check_outside(atom, mode.fiber)
    q = atom.q
    d = dipole_magnitude(atom)
    e_mq = complex(np.asarray(spherical_pick(mode.spherical(atom.r), q)))
    d_dot_e = (-1) ** q * d * e_mq * np.exp(-1j * q * atom.phi)
    pref = math.sqrt(mode.id.omega / (4 * math.pi * EPS0 * HBAR))
    phase = mode.id.beta * atom.z + mode.id.l * atom.phi
    return complex(pref * d_dot_e * np.exp(1j * phase))


# -- radiation channels --------------------------------------------------------


class RadiationChannels:
    """Normalized radiation-mode coefficients at the plan nodes, memoized per l.

    Coefficients depend on (fiber, omega, beta, l) only, so one instance
    serves every atom radius of a scan.
    """

    def __init__(self, fiber: FiberSpec, plan: QuadraturePlan):
        self.fiber = fiber
        self.plan = plan
        k = plan.omega / C_LIGHT
        self.sigma = np.sqrt((k * fiber.n2) ** 2 - plan.nodes**2)
        self._coefs: dict[int, np.ndarray] = {}

    def coefs(self, l_values) -> np.ndarray:
        out = np.empty((len(l_values), 2, 4, self.plan.node_count), dtype=complex)
        for i, l in enumerate(l_values):
            if l not in self._coefs:
                basis = orthonormal_basis(self.fiber, self.plan.omega, self.plan.nodes, int(l))
                block = np.stack([np.stack(basis[p][2:]) for p in (1, -1)])
                bad = ~np.all(np.isfinite(block), axis=(0, 1))
                block[:, :, bad] = 0.0
                self._coefs[l] = (block, bad)
            out[i] = self._coefs[l][0]
        return out

    def dropped_bound(self, r: float, l_values) -> float:
        """Upper estimate of the dropped (overflowing) nodes' share of |e|^2.

        Such nodes have |l| >> sigma r, where every field component is
        bounded by the free-space order-(|l| - 1) amplitude.
        """
        worst = 0.0
        for l in l_values:
            bad = self._coefs[l][1]
            if bad.any():
                x = self.sigma[bad] * r
                worst = max(worst, float(np.max(jv(abs(l) - 1, x) ** 2)))
        return worst

    def shell_sums(self, r: float, l_values, backend=None) -> np.ndarray:
        l_values = np.asarray(l_values, dtype=np.int64)
        coefs = self.coefs(l_values)
        if self.dropped_bound(r, l_values) > 1e-30:
            raise QuadratureNotConverged("radiation-mode coefficients overflowed at a non-negligible node")
        return kernels.radiation_shell_sums(
            r, self.plan.omega, self.plan.nodes, self.plan.weights, self.sigma,
            coefs, l_values, backend=backend,
        )


def _rate_prefactor(atom: AtomSpec, omega: float) -> float:
    return omega * dipole_magnitude(atom) ** 2 / (2 * EPS0 * HBAR)


def radiation_shells(atom: AtomSpec, fiber: FiberSpec, plan: QuadraturePlan,
                     channels: RadiationChannels | None = None, backend=None) -> dict[int, np.ndarray]:
    """Per-l rates for all three dipole orientations at the atom radius.

    Returns ``{l: array([rate_q=-1, rate_q=0, rate_q=+1])}`` in rad/s.  The
    l-sum is extended until the last ``plan.tail_levels`` |l| shells each
    contribute below ``plan.tol`` of the running total for every q.
    """
    _check_outside(atom, fiber)
    if channels is None:
        channels = RadiationChannels(fiber, plan)
    k = plan.omega / C_LIGHT
    pref = _rate_prefactor(atom, plan.omega)
    l_top = max(plan.l_min_cut, math.ceil(k * fiber.n2 * atom.r) + math.ceil(math.log10(1 / plan.tol)))
    shells: dict[int, np.ndarray] = {}
    done = -1
    while True:
        new = [l for l in range(-l_top, l_top + 1) if abs(l) > done]
        sums = channels.shell_sums(atom.r, new, backend=backend)
        for l, col in zip(new, sums.T):
            # rows are e_-1, e_0, e_+1 -> dipoles q = +1, 0, -1
            shells[l] = pref * col[::-1]
        done = l_top
        total = sum(shells.values())
        tail_ok = all(
            np.all(shells[L] + shells.get(-L, 0.0) < plan.tol * total)
            for L in range(l_top - plan.tail_levels + 1, l_top + 1)
        )
        if tail_ok:
            return dict(sorted(shells.items()))
        if l_top >= plan.l_cap:
            raise QuadratureNotConverged(f"l-sum not converged by |l| = {l_top}")
        l_top = min(plan.l_cap, l_top + 8)


def gamma_radiation_rate(atom: AtomSpec, fiber: FiberSpec, plan: QuadraturePlan,
                         channels: RadiationChannels | None = None, backend=None) -> dict[int, float]:
    """Map l -> beta-integrated, p-summed emission rate into radiation modes."""
    shells = radiation_shells(atom, fiber, plan, channels, backend)
    return {l: float(v[atom.q + 1]) for l, v in shells.items()}


def l_cutoff(rates: dict[int, float], tol: float) -> int:
    """Smallest L with sum_{|l| > L} rate < tol * total."""
    total = sum(rates.values())
    by_shell = {}
    for l, v in rates.items():
        by_shell[abs(l)] = by_shell.get(abs(l), 0.0) + v
    tail = 0.0
    for L in sorted(by_shell, reverse=True):
        if tail + by_shell[L] >= tol * total:
            return L
        tail += by_shell[L]
    return 0


# -- totals --------------------------------------------------------------------


@dataclass(frozen=True)
class EmissionBreakdown:
    gamma_guided: dict
    gamma_radiation: dict
    gamma_total: float
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def guided_total(self) -> float:
        return sum(self.gamma_guided.values())

    @property
    def radiation_total(self) -> float:
        return sum(self.gamma_radiation.values())

    @property
    def guided_angular(self) -> float:
        """sum over guided channels of p l gamma."""
        return sum(mid.p * mid.kind.l * g for mid, g in self.gamma_guided.items())

    @property
    def radiation_angular(self) -> float:
        """sum over radiation orders of l gamma."""
        return sum(l * g for l, g in self.gamma_radiation.items())


def total_gamma(atom: AtomSpec, fiber: FiberSpec, plan: QuadraturePlan | None = None,
                tol: float = DEFAULT_TOL, guided: list[GuidedMode] | None = None,
                channels: RadiationChannels | None = None, backend=None) -> EmissionBreakdown:
    """Total decay rate with its guided and radiation channel breakdown."""
    _check_outside(atom, fiber)
    w0 = atom.omega0
    if plan is None:
        plan = radiation_quadrature(w0, tol, fiber.n2)
    if guided is None:
        guided = guided_channels(fiber, w0)
    g_guided = {mode.id: gamma_guided_rate(atom, mode) for mode in guided}
    g_rad = gamma_radiation_rate(atom, fiber, plan, channels, backend)
    # fixed summation order: guided in channel order, radiation by increasing l
    total = math.fsum(g_guided.values()) + math.fsum(g_rad.values())
    return EmissionBreakdown(g_guided, g_rad, total, {"l_cutoff": l_cutoff(g_rad, plan.tol)})


def breakdowns_for_all_q(atom: AtomSpec, fiber: FiberSpec, plan: QuadraturePlan,
                         guided: list[GuidedMode], channels: RadiationChannels,
                         backend=None) -> dict[int, EmissionBreakdown]:
    """EmissionBreakdown for q = -1, 0, +1 at one radius from a single l-sum."""
    shells = radiation_shells(atom, fiber, plan, channels, backend)
    out = {}
    for q in (-1, 0, 1):
        a_q = atom.moved(q=q)
        g_guided = {mode.id: gamma_guided_rate(a_q, mode) for mode in guided}
        g_rad = {l: float(v[q + 1]) for l, v in shells.items()}
        total = math.fsum(g_guided.values()) + math.fsum(g_rad.values())
        out[q] = EmissionBreakdown(g_guided, g_rad, total, {"l_cutoff": l_cutoff(g_rad, plan.tol)})
    return out


def rabi_frequency(atom: AtomSpec, drive_mode: GuidedMode, amplitude_A: float) -> complex:
    """Omega = (-1)^q d E_{-q} / hbar for the driving field at the atom."""
    q = atom.q
    e_mq = complex(spherical_pick(drive_mode.spherical(atom.r), q))
    mid = drive_mode.id
    phase = mid.f * drive_mode.beta * atom.z + (mid.p * drive_mode.l - q) * atom.phi
    field_mq = amplitude_A * e_mq * np.exp(1j * phase)
    return complex((-1) ** q * dipole_magnitude(atom) * field_mq / HBAR)
