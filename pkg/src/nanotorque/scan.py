"""Radial torque scans, angular-momentum tables and plot-data emission."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT

from .angular_momentum import canonical_density_direct, am_densities, integrated_am
from .atom_dynamics import DriveSpec, steady_state
from .config import ScanConfig
from .coupling import (AtomSpec, RadiationChannels, breakdowns_for_all_q,
                       guided_channels, rabi_frequency)
from .errors import NanotorqueError, NoGuidedMode
from .fiber_modes import (Family, GuidedMode, GuidedModeId, ModeKind, dispersion_function, guided_kinds,
                          mode_profile, power_amplitude, v_number)
from .radiation_modes import radiation_quadrature
from .torques import ZN_NM, drive_identity_residual, spon_identity_residual, total_torques

IDENTITY_TOL = 1e-12
QUANTIZATION_TOL = 1e-9

SCAN_COLUMNS = (
    "mode", "q", "r_over_a", "r_nm", "Gamma_over_gamma0", "gamma_guided_over_gamma0",
    "gamma_rad_over_gamma0", "rho_ee", "T_drv_zN_nm", "Q_drv_zN_nm", "T_scatt_zN_nm",
    "Q_scatt_zN_nm", "T_total_zN_nm", "Q_total_zN_nm", "F_phi_zN",
)
AM_COLUMNS = (
    "mode", "p", "r_over_a", "j_orb_Js_m3", "j_spin_Js_m3", "j_can_Js_m3", "u_J_m3", "photon_am_hbar",
)
AM_SUMMARY_COLUMNS = (
    "mode", "p", "J_orb_Js_m", "J_spin_Js_m", "U_J_m", "J_orb_over_J_spin", "photon_am_hbar",
)


class IdentityViolation(NanotorqueError):
    """A conservation identity failed on a computed row."""


@dataclass
class Table:
    columns: tuple
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def select(self, **match):
        idx = {self.columns.index(k): v for k, v in match.items()}
        return Table(self.columns, [r for r in self.rows if all(r[i] == v for i, v in idx.items())])


class ModeCache:
    """Per-run memo of solved modes keyed by (fiber, omega, kind)."""

    def __init__(self):
        self._modes = {}

    def get(self, fiber, omega, kind: ModeKind) -> GuidedMode:
        key = (fiber, omega, kind)
        if key not in self._modes:
            p = 1 if kind.family.hybrid else 0
            self._modes[key] = mode_profile(fiber, GuidedModeId(omega, kind, 1, p))
        return self._modes[key]


def run_scan(config: ScanConfig, tol: float | None = None, backend=None, check: bool = True) -> Table:
    """Steady-state torques for every (drive mode, q, r) of the config."""
    tol = config.tol if tol is None else tol
    fiber = config.fiber
    omega = config.omega0
    a = fiber.radius_a
    grid = config.scan.values()
    cache = ModeCache()
    drives = []
    for dm in config.drives:
        mode = cache.get(fiber, omega, dm.kind).with_direction(dm.f, dm.p)
        amp = power_amplitude(mode, config.power_P)
        drives.append((dm, mode, amp))
    guided = guided_channels(fiber, omega)
    plan = radiation_quadrature(omega, tol, fiber.n2, r_max=grid[-1] * a)
    channels = RadiationChannels(fiber, plan)
    g0 = config.gamma0

    table = Table(SCAN_COLUMNS, meta={"drive_residual": 0.0, "emission_residual": 0.0})
    results = {}
    for r_over_a in grid:
        atom = AtomSpec(config.lambda0, g0, config.q_values[0], r_over_a * a)
        results[r_over_a] = breakdowns_for_all_q(atom, fiber, plan, guided, channels, backend)
    for dm, mode, amp in drives:
        spec = DriveSpec(mode.id, config.power_P, config.detuning)
        for q in config.q_values:
            for r_over_a in grid:
                bd = results[r_over_a][q]
                atom = AtomSpec(config.lambda0, g0, q, r_over_a * a)
                Gamma = bd.gamma_total
                Omega = rabi_frequency(atom, mode, amp)
                state = steady_state(Omega, config.detuning, Gamma)
                tb = total_torques(spec, atom, state, bd, Omega, rho_dot_ee=0.0)
                res = _identity_residuals(tb, dm, bd, Gamma, state.rho_ee)
                table.meta["drive_residual"] = max(table.meta["drive_residual"], res[0])
                table.meta["emission_residual"] = max(table.meta["emission_residual"], res[1])
                if check:
                    _assert_identities(tb, res, r_over_a, q, dm)
                table.rows.append((
                    dm.label, q, r_over_a, r_over_a * a * 1e9, Gamma / g0,
                    bd.guided_total / g0, bd.radiation_total / g0, state.rho_ee,
                    tb.T_drv / ZN_NM, tb.Q_drv / ZN_NM, tb.T_scatt / ZN_NM, tb.Q_scatt / ZN_NM,
                    tb.T_total / ZN_NM, tb.Q_total / ZN_NM, tb.F_phi / 1e-21,
                ))
    return table


def _identity_residuals(tb, dm, bd, Gamma, rho_ee):
    return (drive_identity_residual(tb, dm.kind.l, dm.p, Gamma, rho_ee, 0.0),
            spon_identity_residual(tb, bd))


def _assert_identities(tb, residuals, r_over_a, q, dm):
    res_d, res_s = residuals
    where = f"{dm.label} q={q:+d} r/a={r_over_a:.6g}"
    if res_d > IDENTITY_TOL:
        raise IdentityViolation(f"drive identity residual {res_d:.3g} at {where}")
    if res_s > IDENTITY_TOL:
        raise IdentityViolation(f"emission identity residual {res_s:.3g} at {where}")
    if tb.Q_total != 0.0:
        raise IdentityViolation(f"steady-state Q_total = {tb.Q_total:.3g} N m at {where}")


def run_am_analysis(config: ScanConfig) -> tuple[Table, Table]:
    """Angular-momentum densities on the am grid and integrated totals per drive mode.

    With zero drive power the densities are reported per unit mode amplitude.
    """
    fiber, omega = config.fiber, config.omega0
    cache = ModeCache()
    dens = Table(AM_COLUMNS)
    summary = Table(AM_SUMMARY_COLUMNS)
    for dm in config.drives:
        mode = cache.get(fiber, omega, dm.kind).with_direction(dm.f, dm.p)
        amp = power_amplitude(mode, config.power_P) if config.power_P > 0 else 1.0
        p, l = dm.p, dm.kind.l
        target = p * l
        for r_over_a in config.am_grid.values():
            r = r_over_a * fiber.radius_a
            d = am_densities(mode, amp, p, l, r)
            ph = omega * d.j_can / d.u if d.u > 0 else math.nan
            direct = float(canonical_density_direct(mode, amp, p, l, r))
            if abs(ph - target) > QUANTIZATION_TOL or abs(d.j_can - direct) > 1e-12 * max(abs(direct), d.u / omega):
                raise IdentityViolation(f"photon AM {ph!r} != {target} for {dm.label} at r/a={r_over_a:g}")
            dens.rows.append((dm.label, p, r_over_a, d.j_orb, d.j_spin, d.j_can, d.u, ph))
        tot = integrated_am(mode, amp, p, l)
        ratio = tot.J_orb / tot.J_spin if tot.J_spin else math.nan
        summary.rows.append((dm.label, p, tot.J_orb, tot.J_spin, tot.U, ratio, tot.photon_am))
    return dens, summary


def mode_table(config: ScanConfig) -> Table:
    """beta, effective index, group index and cutoff V of every guided mode."""
    fiber, omega = config.fiber, config.omega0
    k = omega / C_LIGHT
    table = Table(("mode", "beta_per_um", "n_eff", "c_beta_prime", "cutoff_V"))
    cache = ModeCache()
    for kind in guided_kinds(fiber, omega):
        mode = cache.get(fiber, omega, kind)
        table.rows.append((kind.label, mode.beta * 1e-6, mode.beta / k,
                           mode.beta_prime * C_LIGHT, cutoff_v(fiber, omega, kind)))
    return table


def cutoff_v(fiber, omega, kind: ModeKind, rel_tol: float = 1e-10) -> float:
    """V number below which ``kind`` is no longer guided (0 for HE11).

    Near cutoff the root sits within a hair of k n2, so roots are counted
    on a grid geometric in w = a sqrt(beta^2 - k^2 n2^2).  TE/TM roots reach
    the light line exponentially in w and need the deep grid; hybrid roots
    approach it algebraically, and below w ~ 1e-4 V the hybrid quadratic
    loses all precision to cancellation.
    """
    if kind.family is Family.HE and kind.l == 1 and kind.m == 1:
        return 0.0
    a = fiber.radius_a
    w_floor = 1e-4 if kind.family.hybrid else 1e-9

    def guided(w_freq):
        k = w_freq / C_LIGHT
        v = v_number(fiber, w_freq)
        ws = np.geomspace(w_floor * v, v * (1 - 1e-12), 20_000)
        beta = np.sqrt((k * fiber.n2) ** 2 + (ws / a) ** 2)
        with np.errstate(all="ignore"):
            vals = dispersion_function(fiber, w_freq, kind.family, kind.l, beta)
        return int(np.count_nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)) >= kind.m

    lo, hi = 0.0, omega
    if not guided(hi):
        raise NoGuidedMode(f"{kind.label} is not guided at this frequency")
    while hi - lo > rel_tol * omega:
        mid = 0.5 * (lo + hi)
        if mid > 0 and guided(mid):
            hi = mid
        else:
            lo = mid
    return v_number(fiber, hi)


# -- output --------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return f"{value:+d}" if value else "0"
    return f"{value:.11e}"


def format_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


_FIGURE_PANELS = {
    "fig2": (("a", "T_drv_zN_nm"), ("b", "Q_drv_zN_nm")),
    "fig3": (("a", "T_scatt_zN_nm"), ("b", "Q_scatt_zN_nm")),
}


def emit_plotdata(table: Table, style: str, out_dir) -> list[str]:
    """Write per-panel whitespace-separated series files; returns their paths.

    fig2/fig3: one file per quantity, one series column per q.
    fig4: one file per q, one T_total series column per drive mode.
    Nothing is written if the table holds no rows.
    """
    if not table.rows:
        raise ValueError("empty table: nothing to plot")
    qs = sorted({row[1] for row in table.rows}, reverse=True)
    modes = list(dict.fromkeys(row[0] for row in table.rows))
    files = {}
    if style in _FIGURE_PANELS:
        mode = modes[0]
        for panel, col in _FIGURE_PANELS[style]:
            series = {f"q={q:+d}" if q else "q=0": table.select(mode=mode, q=q) for q in qs}
            files[f"{style}{panel}_{col}.dat"] = _series_text(series, col)
    elif style == "fig4":
        for panel, q in zip("abc", (1, 0, -1)):
            if q not in qs:
                continue
            series = {m: table.select(mode=m, q=q) for m in modes}
            files[f"fig4{panel}_q{q:+d}_T_total_zN_nm.dat"] = _series_text(series, "T_total_zN_nm")
    else:
        raise ValueError(f"unknown plot style {style!r}")
    if not files:
        raise ValueError("selection produced no series")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, text in files.items():
        path = os.path.join(out_dir, name)
        write_text(path, text)
        paths.append(path)
    return paths


def _series_text(series: dict, col: str) -> str:
    names = list(series)
    grid = series[names[0]].column("r_over_a")
    cols = [series[n].column(col) for n in names]
    if any(len(c) != len(grid) for c in cols):
        raise ValueError("series have different radial grids")
    lines = ["# r_over_a " + " ".join(names) + f"  [{col}]"]
    for i, r in enumerate(grid):
        lines.append(" ".join([_fmt(r)] + [_fmt(c[i]) for c in cols]))
    return "\n".join(lines) + "\n"
