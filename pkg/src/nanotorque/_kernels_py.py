"""Pure-numpy radiation-rate kernel (fallback for the compiled ``_kernels``)."""

import math

import numpy as np
from scipy.constants import mu_0 as MU0
from scipy.special import jv, yv


def bessel_tables(x, n_max):
    """J_n(x), Y_n(x) for n = 0..n_max; Y by upward recurrence (stable)."""
    x = np.asarray(x, dtype=float)
    orders = np.arange(n_max + 1)[:, None]
    jt = jv(orders, x[None, :])
    yt = np.empty_like(jt)
    yt[0] = yv(0, x)
    if n_max >= 1:
        yt[1] = yv(1, x)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_max):
            yt[n + 1] = (2.0 * n / x) * yt[n] - yt[n - 1]
    return jt, yt


def _signed(table, orders):
    """Integer-order lookup with Z_{-n} = (-1)^n Z_n."""
    sign = np.where((orders < 0) & (orders % 2 == 1), -1.0, 1.0)
    return sign[..., None] * table[np.abs(orders)]


def radiation_shell_sums(r, omega, beta, weights, sigma, coefs, l_values):
    """Beta-integrated, p-summed |e_s|^2 for every l and spherical index s.

    Parameters
    ----------
    r : float
        Atom radius (outside the core).
    beta, weights, sigma : (n,) float arrays
        Quadrature nodes, weights and cladding transverse wavenumbers.
    coefs : (n_l, 2, 4, n) complex array
        Normalized cladding coefficients (C_J, C_Y, D_J, D_Y) per l and p.
        Nodes whose coefficients are all zero contribute nothing.
    l_values : (n_l,) int array

    Returns
    -------
    (3, n_l) float array with rows for e_-1, e_0, e_+1.
    """
    l_values = np.asarray(l_values, dtype=np.int64)
    x = sigma * r
    jt, yt = bessel_tables(x, int(np.max(np.abs(l_values))) + 1)
    orders = l_values[:, None] + np.array([-1, 0, 1])[None, :]
    jz = _signed(jt, orders)
    yz = _signed(yt, orders)
    live = np.any(coefs != 0, axis=(1, 2))  # (n_l, n)
    yz = np.where(live[:, None, :], yz, 0.0)
    cj, cy, dj, dy = (coefs[:, :, i, :] for i in range(4))
    # (n_l, p, order, n)
    cz = cj[:, :, None, :] * jz[:, None] + cy[:, :, None, :] * yz[:, None]
    dz = dj[:, :, None, :] * jz[:, None] + dy[:, :, None, :] * yz[:, None]
    scale = 1.0 / (math.sqrt(2.0) * sigma)
    wm = omega * MU0
    e_minus = (1j * beta * cz[:, :, 0] - wm * dz[:, :, 0]) * scale
    e_zero = cz[:, :, 1]
    e_plus = (1j * beta * cz[:, :, 2] + wm * dz[:, :, 2]) * scale
    out = np.empty((3, l_values.size))
    for row, comp in enumerate((e_minus, e_zero, e_plus)):
        out[row] = (np.abs(comp) ** 2).sum(axis=1) @ weights
    return out
