"""Independent reference computations used only by the tests."""

from __future__ import annotations

import math

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.special import jv, kv

_X20, _W20 = np.polynomial.legendre.leggauss(20)
_X40, _W40 = np.polynomial.legendre.leggauss(40)


def _gl(func, lo, hi, x, w):
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.sum(w * func(mid + half * x)))


def adaptive_gauss_legendre(func, lo, hi, rtol=1e-10, depth=40):
    """Recursive 20/40-point Gauss-Legendre with interval bisection."""
    total_est = abs(_gl(func, lo, hi, _X40, _W40)) or 1.0

    def rec(a, b, level):
        coarse = _gl(func, a, b, _X20, _W20)
        fine = _gl(func, a, b, _X40, _W40)
        if abs(fine - coarse) <= 0.01 * rtol * total_est or level >= depth:
            return fine
        m = 0.5 * (a + b)
        return rec(a, m, level + 1) + rec(m, b, level + 1)

    return rec(lo, hi, 0)


def guided_integral(mode, density, rtol=1e-10):
    """2 pi int density(r) r dr over core and cladding (tail cut at 60/q)."""
    a = mode.fiber.radius_a
    f = lambda r: density(r) * r
    core = adaptive_gauss_legendre(f, 0.0, a, rtol)
    edges = a + np.array([0.0, 1.0, 4.0, 12.0, 30.0, 60.0]) / mode.q
    clad = sum(adaptive_gauss_legendre(f, lo, hi, rtol) for lo, hi in zip(edges[:-1], edges[1:]))
    return 2 * math.pi * (core + clad)


# -- eigenvalue oracle: the classic pole-bearing form -------------------------


def textbook_eigen(fiber, omega, l, beta):
    """(J'/uJ + K'/wK)(J'/uJ + n2^2/n1^2 K'/wK) - l^2 (...)(...) with TE/TM for l = 0."""
    k = omega / C_LIGHT
    a = fiber.radius_a
    u = a * np.sqrt(k * k * fiber.n1**2 - beta**2)
    w = a * np.sqrt(beta**2 - k * k * fiber.n2**2)
    jr = 0.5 * (jv(l - 1, u) - jv(l + 1, u)) / (u * jv(l, u))
    kr = -0.5 * (kv(l - 1, w) + kv(l + 1, w)) / (w * kv(l, w))
    r = fiber.n2**2 / fiber.n1**2
    return (jr + kr) * (jr + r * kr) - l * l * (1 / u**2 + 1 / w**2) * (1 / u**2 + r / w**2)


def textbook_te(fiber, omega, beta):
    return textbook_eigen_single(fiber, omega, beta, 1.0)


def textbook_tm(fiber, omega, beta):
    return textbook_eigen_single(fiber, omega, beta, fiber.n2**2 / fiber.n1**2)


def textbook_eigen_single(fiber, omega, beta, ratio):
    k = omega / C_LIGHT
    a = fiber.radius_a
    u = a * np.sqrt(k * k * fiber.n1**2 - beta**2)
    w = a * np.sqrt(beta**2 - k * k * fiber.n2**2)
    return -jv(1, u) / (u * jv(0, u)) - ratio * kv(1, w) / (w * kv(0, w))


def oracle_roots(func, lo, hi, points=100_000, rtol=1e-12):
    """Sign-change scan plus bisection, discarding poles of ``func``."""
    grid = np.linspace(lo, hi, points + 2)[1:-1]
    with np.errstate(all="ignore"):
        vals = func(grid)
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        a, b, fa = grid[i], grid[i + 1], vals[i]
        while (b - a) > rtol * abs(b):
            m = 0.5 * (a + b)
            fm = float(func(np.array(m)))
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        root = 0.5 * (a + b)
        with np.errstate(all="ignore"):
            f_root = abs(float(func(np.array(root))))
        # a pole keeps |f| at least as large as at the bracket ends
        if f_root < min(abs(vals[i]), abs(vals[i + 1])):
            roots.append(root)
    return sorted(roots, reverse=True)


# -- Cartesian field helpers ---------------------------------------------------


def cartesian(vec_cyl, phi):
    """Rotate cylindrical components (v_r, v_phi, v_z) at azimuth phi to Cartesian."""
    v_r, v_phi, v_z = vec_cyl
    c, s = math.cos(phi), math.sin(phi)
    return np.array([v_r * c - v_phi * s, v_r * s + v_phi * c, v_z], dtype=complex)


def guided_cartesian_fields(mode, r, phi, f, p):
    e, h = mode.fields(r, f, p)
    pl = (p if mode.kind.family.hybrid else 0) * mode.l
    phase = np.exp(1j * pl * phi)
    return cartesian(e, phi) * phase, cartesian(h, phi) * phase


def curl_residuals(fields, r, beta, m, omega, nsq, step=1e-6):
    """Relative residuals of curl E = i omega mu0 H and curl H = -i omega eps0 n^2 E.

    ``fields(r)`` returns cylindrical (e, h) for an exp(i beta z + i m phi)
    dependence; radial derivatives are taken by central differences.
    """
    from scipy.constants import epsilon_0, mu_0

    dr = step * r
    (er, ep, ez), (hr, hp, hz) = fields(r)
    (er1, ep1, ez1), (hr1, hp1, hz1) = fields(r + dr)
    (er0, ep0, ez0), (hr0, hp0, hz0) = fields(r - dr)
    d = lambda hi, lo: (hi - lo) / (2 * dr)

    def curl(vr, vp, vz, vp1, vp0, vz1, vz0):
        return np.array([
            1j * m / r * vz - 1j * beta * vp,
            1j * beta * vr - d(vz1, vz0),
            (d((r + dr) * vp1, (r - dr) * vp0)) / r - 1j * m / r * vr,
        ])

    c_e = curl(er, ep, ez, ep1, ep0, ez1, ez0)
    c_h = curl(hr, hp, hz, hp1, hp0, hz1, hz0)
    rhs_e = 1j * omega * mu_0 * np.array([hr, hp, hz])
    rhs_h = -1j * omega * epsilon_0 * nsq * np.array([er, ep, ez])
    res_e = np.max(np.abs(c_e - rhs_e)) / np.max(np.abs(rhs_e))
    res_h = np.max(np.abs(c_h - rhs_h)) / np.max(np.abs(rhs_h))
    return res_e, res_h


def radiation_cartesian_e(fiber, omega, beta, l, coefs, r, phi):
    """Cartesian cladding E of radiation modes at (r, phi), vectorized over beta.

    ``coefs`` is the (c_j, c_y, d_j, d_y) tuple of arrays; the exp(i l phi)
    factor is included.
    """
    from scipy.constants import mu_0
    from scipy.special import jvp, yv, yvp

    k = omega / C_LIGHT
    sig = np.sqrt((k * fiber.n2) ** 2 - beta**2)
    x = sig * r
    c_j, c_y, d_j, d_y = coefs
    ez = c_j * jv(l, x) + c_y * yv(l, x)
    hz = d_j * jv(l, x) + d_y * yv(l, x)
    dez = sig * (c_j * jvp(l, x) + c_y * yvp(l, x))
    dhz = sig * (d_j * jvp(l, x) + d_y * yvp(l, x))
    e_r = (1j * beta * dez - omega * mu_0 * l / r * hz) / sig**2
    e_phi = (-beta * l / r * ez - 1j * omega * mu_0 * dhz) / sig**2
    c, s = math.cos(phi), math.sin(phi)
    phase = np.exp(1j * l * phi)
    return np.array([(e_r * c - e_phi * s) * phase, (e_r * s + e_phi * c) * phase, ez * phase])
