"""Radiation (continuum) modes of a step-index fiber.

At fixed (omega, beta, l) the fields are built from E_z and H_z potentials:
``J_l(h r)`` in the core (h^2 = k^2 n1^2 - beta^2) and a ``J_l/Y_l(sigma r)``
superposition in the cladding (sigma^2 = k^2 n2^2 - beta^2).  Tangential
continuity at r = a fixes the four cladding coefficients from the two core
ones, which leaves a two-dimensional solution space per (beta, l).

Normalization is delta(omega - omega') at fixed (beta, l).  Matching the
large-r asymptotics gives, for cladding coefficients (C_J, C_Y) of E_z and
(D_J, D_Y) of H_z,

    (2 pi omega / sigma^2) [n2^2 (|C_J|^2 + |C_Y|^2) + (mu0/eps0)(|D_J|^2 + |D_Y|^2)] = 1.

Polarization basis: ``p = +1`` is the solution whose core field has
H_z = 0 (TM-like in the core), normalized; ``p = -1`` is the Gram-Schmidt
complement of the solution with E_z = 0 in the core.  Any orthonormal pair
gives the same p-summed observables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT, epsilon_0 as EPS0, mu_0 as MU0
from scipy.special import jv, yv

from .errors import InvalidBeta
from .fiber_modes import FiberSpec

GAUSS_ORDER = 32
IMPEDANCE_SQ = MU0 / EPS0


@dataclass(frozen=True)
class RadiationModeId:
    omega: float
    beta: float
    l: int
    p: int = 1

    def __post_init__(self):
        if self.p not in (1, -1):
            raise ValueError(f"p must be +1 or -1, got {self.p}")


def matching_coefficients(fiber: FiberSpec, omega: float, beta, l: int, core_e, core_h):
    """Cladding (C_J, C_Y, D_J, D_Y) for core E_z = core_e J_l, H_z = core_h J_l.

    Vectorized over ``beta``; uses the J/Y Wronskian instead of a 4x4 solve.
    """
    beta = np.asarray(beta, dtype=float)
    k = omega / C_LIGHT
    a = fiber.radius_a
    n1s, n2s = fiber.n1**2, fiber.n2**2
    h = np.sqrt(k * k * n1s - beta * beta)
    sig = np.sqrt(k * k * n2s - beta * beta)
    xi, xo = h * a, sig * a

    j_in = jv(l, xi)
    jp_in = 0.5 * (jv(l - 1, xi) - jv(l + 1, xi))
    jo, yo = jv(l, xo), yv(l, xo)
    jpo = 0.5 * (jv(l - 1, xo) - jv(l + 1, xo))
    ypo = 0.5 * (yv(l - 1, xo) - yv(l + 1, xo))

    alpha_e = core_e * j_in
    alpha_h = core_h * j_in
    mix = sig * beta * l / a * (1.0 / h**2 - 1.0 / sig**2)
    # Argument-derivatives of the cladding E_z and H_z combinations at r = a.
    dh = -1j * mix / (omega * MU0) * alpha_e + (sig / h) * core_h * jp_in
    de = 1j * mix / (omega * EPS0 * n2s) * alpha_h + (n1s * sig / (n2s * h)) * core_e * jp_in

    w = 0.5 * math.pi * xo
    c_j = w * (alpha_e * ypo - de * yo)
    c_y = w * (de * jo - alpha_e * jpo)
    d_j = w * (alpha_h * ypo - dh * yo)
    d_y = w * (dh * jo - alpha_h * jpo)
    return c_j, c_y, d_j, d_y


def _inner(omega, sig, n2s, u, v):
    """Continuum inner product <u, v> of two cladding coefficient sets."""
    cju, cyu, dju, dyu = u
    cjv, cyv, djv, dyv = v
    return (2 * math.pi * omega / sig**2) * (
        n2s * (cju * np.conj(cjv) + cyu * np.conj(cyv))
        + IMPEDANCE_SQ * (dju * np.conj(djv) + dyu * np.conj(dyv))
    )


def orthonormal_basis(fiber: FiberSpec, omega: float, beta, l: int):
    """Normalized (core, cladding) coefficients for p = +1 and p = -1.

    Returns ``{p: (core_e, core_h, c_j, c_y, d_j, d_y)}``, arrays over beta.
    Nodes where Y_l(sigma a) overflows (tiny sigma, large |l|) come back as
    NaN; their contribution is bounded separately by the caller.
    """
    beta = np.asarray(beta, dtype=float)
    k = omega / C_LIGHT
    n2s = fiber.n2**2
    sig = np.sqrt(k * k * n2s - beta * beta)
    one, zero = np.ones_like(beta), np.zeros_like(beta)
    with np.errstate(all="ignore"):
        s1 = (one, zero) + matching_coefficients(fiber, omega, beta, l, one, zero)
        s2 = (zero, one) + matching_coefficients(fiber, omega, beta, l, zero, one)
        # Per-node rescaling keeps the Gram entries finite; the orthonormal
        # result does not depend on it.
        s1 = _rescaled(s1)
        s2 = _rescaled(s2)
        n_plus = 1.0 / np.sqrt(_inner(omega, sig, n2s, s1[2:], s1[2:]).real)
        plus = tuple(x * n_plus for x in s1)
        # Near the light line the two solutions are almost parallel in the
        # cladding, so the closed Gram formula cancels; subtract component
        # wise and reorthogonalize once instead.
        minus = s2
        for _ in range(2):
            proj = _inner(omega, sig, n2s, minus[2:], plus[2:])
            minus = tuple(y - proj * x for x, y in zip(plus, minus))
        n_minus = 1.0 / np.sqrt(_inner(omega, sig, n2s, minus[2:], minus[2:]).real)
        minus = tuple(y * n_minus for y in minus)
    return {1: plus, -1: minus}


def _rescaled(coefs):
    scale = np.max(np.abs(np.stack(coefs)), axis=0)
    scale = np.where(np.isfinite(scale) & (scale > 0), scale, np.nan)
    return tuple(c / scale for c in coefs)


@dataclass(frozen=True)
class RadiationMode:
    id: RadiationModeId
    fiber: FiberSpec
    core_e: complex
    core_h: complex
    c_j: complex
    c_y: complex
    d_j: complex
    d_y: complex

    @property
    def k(self) -> float:
        return self.id.omega / C_LIGHT

    @property
    def h(self) -> float:
        return math.sqrt(self.k**2 * self.fiber.n1**2 - self.id.beta**2)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.k**2 * self.fiber.n2**2 - self.id.beta**2)

    def potentials(self, r):
        """(E_z, H_z) and their r-derivatives, plus kappa^2 and n^2, at r."""
        r = np.asarray(r, dtype=float)
        l, a = self.id.l, self.fiber.radius_a
        inside = r < a
        h, sig = self.h, self.sigma
        x = h * r
        jl, jp = jv(l, x), 0.5 * (jv(l - 1, x) - jv(l + 1, x))
        y = sig * r
        jo, yo = jv(l, y), yv(l, np.where(inside, 1.0, y))
        jpo = 0.5 * (jv(l - 1, y) - jv(l + 1, y))
        ypo = 0.5 * (yv(l - 1, np.where(inside, 1.0, y)) - yv(l + 1, np.where(inside, 1.0, y)))
        ez = np.where(inside, self.core_e * jl, self.c_j * jo + self.c_y * yo)
        hz = np.where(inside, self.core_h * jl, self.d_j * jo + self.d_y * yo)
        dez = np.where(inside, h * self.core_e * jp, sig * (self.c_j * jpo + self.c_y * ypo))
        dhz = np.where(inside, h * self.core_h * jp, sig * (self.d_j * jpo + self.d_y * ypo))
        kappa2 = np.where(inside, h * h, sig * sig)
        nsq = np.where(inside, self.fiber.n1**2, self.fiber.n2**2)
        return ez, hz, dez, dhz, kappa2, nsq

    def fields(self, r):
        """Complex cylindrical (e, h) at r; the exp(i beta z + i l phi) factor excluded."""
        r = np.asarray(r, dtype=float)
        ez, hz, dez, dhz, kappa2, nsq = self.potentials(r)
        beta, l, omega = self.id.beta, self.id.l, self.id.omega
        il_r = 1j * l / r
        pre = 1j / kappa2
        wm, we = omega * MU0, omega * EPS0 * nsq
        e_r = pre * (beta * dez + wm * il_r * hz)
        e_phi = pre * (beta * il_r * ez - wm * dhz)
        h_r = pre * (beta * dhz - we * il_r * ez)
        h_phi = pre * (beta * il_r * hz + we * dez)
        return (e_r, e_phi, ez), (h_r, h_phi, hz)

    def spherical(self, r):
        """(e_-1, e_0, e_+1) at phi = 0."""
        (e_r, e_phi, e_z), _ = self.fields(r)
        s2 = math.sqrt(2.0)
        return (e_r - 1j * e_phi) / s2, e_z, -(e_r + 1j * e_phi) / s2

    def norm_weight(self) -> float:
        coefs = (self.c_j, self.c_y, self.d_j, self.d_y)
        return float(_inner(self.id.omega, self.sigma, self.fiber.n2**2, coefs, coefs).real)


def radiation_profile(fiber: FiberSpec, mode_id: RadiationModeId) -> RadiationMode:
    k = mode_id.omega / C_LIGHT
    if not abs(mode_id.beta) < k * fiber.n2:
        raise InvalidBeta(f"|beta| = {abs(mode_id.beta):g} must be below k n2 = {k * fiber.n2:g}")
    basis = orthonormal_basis(fiber, mode_id.omega, np.array([mode_id.beta]), mode_id.l)
    coefs = [complex(np.asarray(x).ravel()[0]) for x in basis[mode_id.p]]
    return RadiationMode(mode_id, fiber, *coefs)


# -- quadrature plan -----------------------------------------------------------


@dataclass(frozen=True)
class QuadraturePlan:
    """Gauss-Legendre panels in beta over (-k n2, k n2) and l-sum controls.

    ``nodes`` and ``weights`` are in rad/m.  ``l_min_cut`` is the smallest
    |l| at which the l-sum may stop; the sum then continues until
    ``tail_levels`` consecutive |l| shells each add less than ``tol`` of the
    running total, up to ``l_cap``.
    """

    omega: float
    n2: float
    tol: float
    nodes: np.ndarray
    weights: np.ndarray
    l_min_cut: int
    l_cap: int = 400
    tail_levels: int = 3

    @property
    def node_count(self) -> int:
        return int(self.nodes.size)


def panel_edges(tol: float) -> np.ndarray:
    """Panel boundaries on u = beta/(k n2) in (-1, 1), graded toward both ends."""
    depth = max(4, math.ceil(0.5 * math.log2(1.0 / tol)) + 2)
    inner = 1.0 - 2.0 ** -np.arange(1, depth + 1)
    return np.concatenate([[-1.0], -inner[::-1], [0.0], inner, [1.0]])


def radiation_quadrature(omega0: float, tol: float = 1e-6, n2: float = 1.0,
                         r_max: float | None = None) -> QuadraturePlan:
    """Quadrature plan for the beta-integral and l-sum of radiation-mode rates.

    ``r_max`` (largest atom radius of interest) sets the minimum l cutoff;
    beyond |l| ~ k n2 r the emission into order l decays super-exponentially.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = omega0 / C_LIGHT
    edges = panel_edges(tol)
    x, w = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    lo, hi = edges[:-1, None], edges[1:, None]
    u = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
    wu = 0.5 * (hi - lo) * w[None, :]
    kn = k * n2
    extra = math.ceil(math.log10(1.0 / tol))
    l_min = extra + (math.ceil(kn * r_max) if r_max else 0)
    return QuadraturePlan(omega0, n2, tol, (kn * u).ravel(), (kn * wu).ravel(), l_min)
