"""Guided modes of a step-index fiber.

Exact vector theory: Bessel J in the core, modified Bessel K in the
cladding, coefficients fixed by continuity of the tangential fields at
r = a.  Profiles are normalized as ``2*pi * int n(r)^2 |e|^2 r dr = 1``.

Phase convention for the reduced (f=+1, p=+1) mode functions: the stored
real profiles ``e_r, e_phi, e_z, h_r, h_phi, h_z`` assemble into complex
components as

    e = (i e_r, e_phi, e_z),    h = (h_r, i h_phi, i h_z)

so that e_z is in quadrature with e_r.  Other (f, p) follow from

    E = A (r e_r + p phi e_phi + f z e_z) exp(i f beta z + i p l phi)
    H = A (f p r h_r + f phi h_phi + p z h_z) exp(i f beta z + i p l phi)
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.constants import c as C_LIGHT, epsilon_0 as EPS0, mu_0 as MU0
from scipy.special import jv, kv

from .errors import DegenerateMode, DomainError, NoGuidedMode

SCAN_POINTS = 10_000
GROUP_STEP = 1e-6


@dataclass(frozen=True)
class FiberSpec:
    """Core radius (m) and core/cladding refractive indices."""

    radius_a: float
    n1: float
    n2: float = 1.0

    def __post_init__(self):
        if not self.radius_a > 0:
            raise DomainError(f"fiber radius must be positive, got {self.radius_a}")
        if not (self.n1 >= self.n2 >= 1.0):
            raise DomainError(f"need n1 >= n2 >= 1, got n1={self.n1}, n2={self.n2}")

    @property
    def homogeneous(self) -> bool:
        return self.n1 == self.n2

    def index(self, r):
        return np.where(np.asarray(r) < self.radius_a, self.n1, self.n2)


class Family(enum.Enum):
    HE = "HE"
    EH = "EH"
    TE = "TE"
    TM = "TM"

    @property
    def hybrid(self) -> bool:
        return self in (Family.HE, Family.EH)


@dataclass(frozen=True)
class ModeKind:
    family: Family
    l: int
    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"radial order must be >= 1, got {self.m}")
        if self.family.hybrid and self.l < 1:
            raise ValueError(f"{self.family.value} modes need l >= 1")
        if not self.family.hybrid and self.l != 0:
            raise ValueError(f"{self.family.value} modes have l = 0")

    @classmethod
    def parse(cls, label: str) -> "ModeKind":
        """Parse labels such as ``HE11``, ``TE01`` or ``HE_2_1``."""
        text = label.strip().upper().replace("_", "")
        match = re.fullmatch(r"(HE|EH|TE|TM)(\d)(\d+)", text)
        if match is None:
            raise ValueError(f"cannot parse mode label {label!r}")
        fam, l, m = match.groups()
        return cls(Family(fam), int(l), int(m))

    @property
    def label(self) -> str:
        return f"{self.family.value}{self.l}{self.m}"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class GuidedModeId:
    omega: float
    kind: ModeKind
    f: int = 1
    p: int = 1

    def __post_init__(self):
        if self.f not in (1, -1):
            raise ValueError(f"f must be +1 or -1, got {self.f}")
        if self.kind.family.hybrid and self.p not in (1, -1):
            raise ValueError("hybrid modes need p = +1 or -1")
        if not self.kind.family.hybrid and self.p != 0:
            raise ValueError("TE/TM modes need p = 0")


class Profiles(NamedTuple):
    e_r: np.ndarray
    e_phi: np.ndarray
    e_z: np.ndarray
    h_r: np.ndarray
    h_phi: np.ndarray
    h_z: np.ndarray


def v_number(fiber: FiberSpec, omega: float) -> float:
    if omega <= 0:
        raise DomainError("omega must be positive")
    return omega / C_LIGHT * fiber.radius_a * math.sqrt(fiber.n1**2 - fiber.n2**2)


# -- dispersion relation ---------------------------------------------------


def _uw(fiber, omega, beta):
    k = omega / C_LIGHT
    a = fiber.radius_a
    u = a * np.sqrt(np.maximum(k * k * fiber.n1**2 - beta * beta, 0.0))
    w = a * np.sqrt(np.maximum(beta * beta - k * k * fiber.n2**2, 0.0))
    return u, w


def _hybrid_branches(fiber, l, u, w):
    """Roots X of the hybrid eigenvalue quadratic in X = J_l'(u)/(u J_l(u)).

    Returns (x_he, x_eh); the HE branch is the smaller root.
    """
    n1s, n2s = fiber.n1**2, fiber.n2**2
    kl = kv(l, w)
    kt = -(kv(l - 1, w) + kv(l + 1, w)) / (2.0 * w * kl)
    rhs = l * l * (1.0 / u**2 + 1.0 / w**2) * (n1s / u**2 + n2s / w**2)
    disc = np.sqrt((n1s - n2s) ** 2 * kt**2 + 4.0 * n1s * rhs)
    base = -(n1s + n2s) * kt
    return (base - disc) / (2.0 * n1s), (base + disc) / (2.0 * n1s)


def dispersion_function(fiber: FiberSpec, omega: float, family: Family, l: int, beta):
    """Pole-free form of the exact eigenvalue equation; zero on a guided mode.

    Defined on the open interval ``k n2 < beta < k n1``.
    """
    beta = np.asarray(beta, dtype=float)
    u, w = _uw(fiber, omega, beta)
    if family is Family.TE:
        return jv(1, u) * w * kv(0, w) + u * jv(0, u) * kv(1, w)
    if family is Family.TM:
        return fiber.n1**2 * jv(1, u) * w * kv(0, w) + fiber.n2**2 * u * jv(0, u) * kv(1, w)
    x_he, x_eh = _hybrid_branches(fiber, l, u, w)
    x = x_he if family is Family.HE else x_eh
    jl = jv(l, u)
    jlp = (jv(l - 1, u) - jv(l + 1, u)) / 2.0
    return jlp / u - x * jl


def _bisect(func, lo, hi, flo):
    # Bisect to the floating-point limit; the bracket is already sign-changing.
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid


def dispersion_roots(fiber: FiberSpec, omega: float, family: Family, l: int,
                     points: int = SCAN_POINTS) -> list[float]:
    """All roots of the family's dispersion function, highest beta first."""
    if fiber.homogeneous:
        return []
    k = omega / C_LIGHT
    lo, hi = k * fiber.n2, k * fiber.n1
    grid = np.linspace(lo, hi, points + 2)[1:-1]
    vals = dispersion_function(fiber, omega, family, l, grid)
    func = lambda b: float(dispersion_function(fiber, omega, family, l, b))
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        roots.append(_bisect(func, grid[i], grid[i + 1], vals[i]))
    roots.extend(grid[vals == 0.0])
    return sorted(roots, reverse=True)


def solve_eigenvalue(fiber: FiberSpec, omega: float, kind: ModeKind) -> float:
    """Propagation constant of ``kind`` (m-th root counted from high beta)."""
    if omega <= 0:
        raise DomainError("omega must be positive")
    roots = dispersion_roots(fiber, omega, kind.family, kind.l)
    if len(roots) < kind.m:
        raise NoGuidedMode(f"{kind.label} is below cutoff (V = {v_number(fiber, omega):.4f})")
    return roots[kind.m - 1]


def guided_kinds(fiber: FiberSpec, omega: float, l_max: int = 30) -> list[ModeKind]:
    """Every guided (family, l, m) at ``omega``, sorted by decreasing beta."""
    found = []
    for fam in (Family.TE, Family.TM):
        for m, beta in enumerate(dispersion_roots(fiber, omega, fam, 0), start=1):
            found.append((beta, ModeKind(fam, 0, m)))
    for l in range(1, l_max + 1):
        n_before = len(found)
        for fam in (Family.HE, Family.EH):
            for m, beta in enumerate(dispersion_roots(fiber, omega, fam, l), start=1):
                found.append((beta, ModeKind(fam, l, m)))
        if len(found) == n_before:
            break
    found.sort(key=lambda item: -item[0])
    return [kind for _, kind in found]


def group_slope(fiber: FiberSpec, omega: float, kind: ModeKind, rel_step: float = GROUP_STEP) -> float:
    """d(beta)/d(omega) by a central difference of the eigenvalue solver.

    A homogeneous fiber has no bound modes; there the plane-wave slope
    n/c is returned (same stencil applied to beta = n omega / c).
    """
    dw = rel_step * omega
    if fiber.homogeneous:
        n = fiber.n1
        return (n * (omega + dw) / C_LIGHT - n * (omega - dw) / C_LIGHT) / (2.0 * dw)
    b_hi = solve_eigenvalue(fiber, omega + dw, kind)
    b_lo = solve_eigenvalue(fiber, omega - dw, kind)
    return (b_hi - b_lo) / (2.0 * dw)


# -- field construction ------------------------------------------------------


def _field_components(l, beta, omega, nsq, kappa2, a_coef, b_coef, z, zp, lz_r):
    """Cylindrical E, H from E_z = a Z(r), H_z = b Z(r) in a homogeneous layer.

    ``z`` is the radial function, ``zp`` its r-derivative and ``lz_r`` is
    l Z / r (finite at r = 0).  ``kappa2`` is k^2 n^2 - beta^2 (negative in
    the evanescent region).
    """
    wm = omega * MU0
    we = omega * EPS0 * nsq
    pre = 1j / kappa2
    e_r = pre * (beta * a_coef * zp + 1j * wm * b_coef * lz_r)
    e_phi = pre * (1j * beta * a_coef * lz_r - wm * b_coef * zp)
    h_r = pre * (beta * b_coef * zp - 1j * we * a_coef * lz_r)
    h_phi = pre * (1j * beta * b_coef * lz_r + we * a_coef * zp)
    return e_r, e_phi, a_coef * z, h_r, h_phi, b_coef * z


@dataclass(frozen=True)
class GuidedMode:
    """A solved and normalized guided mode.

    ``coef_e`` and ``coef_h`` are the core E_z and H_z amplitudes (the latter
    stored as the real factor multiplying i).
    """

    id: GuidedModeId
    fiber: FiberSpec
    beta: float
    beta_prime: float
    coef_e: float
    coef_h: float
    _meta: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def omega(self) -> float:
        return self.id.omega

    @property
    def kind(self) -> ModeKind:
        return self.id.kind

    @property
    def l(self) -> int:
        return self.id.kind.l

    @property
    def h(self) -> float:
        k = self.omega / C_LIGHT
        return math.sqrt(k * k * self.fiber.n1**2 - self.beta**2)

    @property
    def q(self) -> float:
        k = self.omega / C_LIGHT
        return math.sqrt(self.beta**2 - k * k * self.fiber.n2**2)

    def with_direction(self, f: int, p: int | None = None) -> "GuidedMode":
        """Same solved mode relabelled with another (f, p)."""
        if p is None:
            p = self.id.p
        new_id = GuidedModeId(self.omega, self.kind, f, p)
        return GuidedMode(new_id, self.fiber, self.beta, self.beta_prime,
                          self.coef_e, self.coef_h, self._meta)

    def _complex_reduced(self, r):
        r = np.asarray(r, dtype=float)
        l, a = self.l, self.fiber.radius_a
        h, q = self.h, self.q
        a_in, b_in = self.coef_e, 1j * self.coef_h
        scale = jv(l, h * a) / kv(l, q * a)
        inside = r < a
        ri, ro = np.where(inside, r, 0.0), np.where(inside, 2 * a, r)
        x = h * ri
        z_in = jv(l, x)
        zp_in = h * (jv(l - 1, x) - jv(l + 1, x)) / 2.0
        lz_in = h * (jv(l - 1, x) + jv(l + 1, x)) / 2.0 if l else np.zeros_like(x)
        comp_in = _field_components(l, self.beta, self.omega, self.fiber.n1**2,
                                    h * h, a_in, b_in, z_in, zp_in, lz_in)
        y = q * ro
        z_out = kv(l, y)
        zp_out = -q * (kv(l - 1, y) + kv(l + 1, y)) / 2.0
        lz_out = q * (kv(l + 1, y) - kv(l - 1, y)) / 2.0 if l else np.zeros_like(y)
        comp_out = _field_components(l, self.beta, self.omega, self.fiber.n2**2,
                                     -q * q, a_in * scale, b_in * scale, z_out, zp_out, lz_out)
        return tuple(np.where(inside, ci, co) for ci, co in zip(comp_in, comp_out))

    def profiles(self, r) -> Profiles:
        """Real reduced profiles (see module docstring for the phase convention)."""
        e_r, e_phi, e_z, h_r, h_phi, h_z = self._complex_reduced(r)
        return Profiles(e_r.imag, e_phi.real, e_z.real, h_r.real, h_phi.imag, h_z.imag)

    def fields(self, r, f: int | None = None, p: int | None = None):
        """Complex cylindrical (e, h) for direction f and circulation p.

        Excludes the exp(i f beta z + i p l phi) factor.  Defaults to this
        mode's own (f, p).
        """
        f = self.id.f if f is None else f
        p = self.id.p if p is None else p
        pe = p if self.kind.family.hybrid else 1
        e_r, e_phi, e_z, h_r, h_phi, h_z = self._complex_reduced(r)
        e = (e_r, pe * e_phi, f * e_z)
        h = (f * pe * h_r, f * h_phi, pe * h_z)
        return e, h

    def spherical(self, r, f: int | None = None, p: int | None = None):
        """Spherical components (e_-1, e_0, e_+1) at azimuth phi = 0."""
        (e_r, e_phi, e_z), _ = self.fields(r, f, p)
        return spherical_from_cylindrical(e_r, e_phi, e_z)

    def norm_integral(self) -> float:
        """2 pi int n^2 |e|^2 r dr, by adaptive quadrature (should be 1)."""
        def integrand(r):
            pr = self.profiles(r)
            return self.fiber.index(r) ** 2 * (pr.e_r**2 + pr.e_phi**2 + pr.e_z**2) * r
        return 2 * math.pi * _radial_integral(integrand, self.fiber.radius_a, self.q)

    def poynting_flux(self) -> float:
        """Axial power (1/2) int Re(e x h*)_z dA of the unit-normalized profile."""
        def integrand(r):
            pr = self.profiles(r)
            return (pr.e_r * pr.h_phi - pr.e_phi * pr.h_r) * r
        return math.pi * _radial_integral(integrand, self.fiber.radius_a, self.q)


def spherical_from_cylindrical(e_r, e_phi, e_z):
    """(V_-1, V_0, V_+1) at phi = 0, with V_{+-1} = -+(V_x +- i V_y)/sqrt(2)."""
    s2 = math.sqrt(2.0)
    return (e_r - 1j * e_phi) / s2, e_z, -(e_r + 1j * e_phi) / s2


def _radial_integral(func, a, decay, rtol=1e-12):
    # The cladding tail ~ exp(-2 decay r); beyond 50 decay lengths it is < 1e-40.
    total, _ = integrate.quad(func, 0.0, a, epsabs=0.0, epsrel=rtol, limit=200)
    edges = a + np.array([0.0, 0.5, 2.0, 6.0, 15.0, 50.0]) / decay
    for lo, hi in zip(edges[:-1], edges[1:]):
        part, _ = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=rtol, limit=200)
        total += part
    return total


def _core_coefficients(fiber, omega, kind, beta):
    """(coef_e, coef_h) before normalization, with H_z = i coef_h J_l."""
    if kind.family is Family.TE:
        return 0.0, 1.0
    if kind.family is Family.TM:
        return 1.0, 0.0
    l = kind.l
    u, w = _uw(fiber, omega, beta)
    jl = jv(l, u)
    jlp = (jv(l - 1, u) - jv(l + 1, u)) / 2.0
    kl = kv(l, w)
    klp = -(kv(l - 1, w) + kv(l + 1, w)) / 2.0
    s = l * (1.0 / u**2 + 1.0 / w**2) / (jlp / (u * jl) + klp / (w * kl))
    return 1.0, beta * s / (omega * MU0)


def hybrid_s(fiber: FiberSpec, omega: float, l: int, beta: float) -> float:
    """The hybrid-mode parameter s; negative on HE branches, positive on EH."""
    u, w = _uw(fiber, omega, beta)
    jl = jv(l, u)
    jlp = (jv(l - 1, u) - jv(l + 1, u)) / 2.0
    kl = kv(l, w)
    klp = -(kv(l - 1, w) + kv(l + 1, w)) / 2.0
    return float(l * (1.0 / u**2 + 1.0 / w**2) / (jlp / (u * jl) + klp / (w * kl)))


def mode_profile(fiber: FiberSpec, mode_id: GuidedModeId) -> GuidedMode:
    """Solve, construct and normalize the guided mode ``mode_id``."""
    kind = mode_id.kind
    beta = solve_eigenvalue(fiber, mode_id.omega, kind)
    beta_prime = group_slope(fiber, mode_id.omega, kind)
    ce, ch = _core_coefficients(fiber, mode_id.omega, kind, beta)
    raw = GuidedMode(mode_id, fiber, beta, beta_prime, ce, ch)
    scale = 1.0 / math.sqrt(raw.norm_integral())
    return GuidedMode(mode_id, fiber, beta, beta_prime, ce * scale, ch * scale)


def power_amplitude(mode: GuidedMode, power_P: float) -> float:
    """Real field amplitude A with |A|^2 = P / P1."""
    if power_P < 0:
        raise DomainError("power must be non-negative")
    p1 = mode.poynting_flux()
    if p1 <= 0:
        raise DegenerateMode(f"non-positive power flux {p1:g} for {mode.kind}")
    return math.sqrt(power_P / p1)
