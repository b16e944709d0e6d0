"""Qualitative features of the published torque curves, on the reference configs."""

import pathlib

import numpy as np
import pytest

from nanotorque.config import load_config
from nanotorque.scan import run_scan

CONFIGS = pathlib.Path(__file__).resolve().parent.parent / "configs"
LABELS = ("HE11", "TE01", "TM01", "HE21")


@pytest.fixture(scope="module")
def fig4():
    return run_scan(load_config(CONFIGS / "fig4.conf"))


def series(table, mode, q, col):
    sel = table.select(mode=mode, q=q)
    return np.array(sel.column("r_over_a")), np.array(sel.column(col))


def test_scattering_torques_opposite_signs(fig4):
    # Visible part of the curves: spin is converted into orbital angular momentum.
    for q in (1, -1):
        r, t = series(fig4, "HE21", q, "T_scatt_zN_nm")
        _, s = series(fig4, "HE21", q, "Q_scatt_zN_nm")
        near = r < 2.0
        assert np.all(t[near] * s[near] < 0)
        # Beyond 2a the recoil torque weakly reverses sign, below 1% of its peak.
        far = ~near
        assert np.max(np.abs(t[far])) < 0.01 * np.max(np.abs(t))


def test_fig4a_hybrid_modes_dominate_for_q_plus(fig4):
    tot = {m: series(fig4, m, 1, "T_total_zN_nm")[1] for m in LABELS}
    assert np.all(np.minimum(tot["HE11"], tot["HE21"]) > np.maximum(tot["TE01"], tot["TM01"]))


def test_fig4c_te_tm_dominate_for_q_minus_beyond_115(fig4):
    r, _ = series(fig4, "HE11", -1, "T_total_zN_nm")
    tot = {m: series(fig4, m, -1, "T_total_zN_nm")[1] for m in LABELS}
    far = r > 1.15
    assert np.all(np.minimum(tot["TE01"], tot["TM01"])[far] > np.maximum(tot["HE11"], tot["HE21"])[far])
    # the reason given: a larger Rabi frequency, hence larger rho_ee
    _, rho_te = series(fig4, "TE01", -1, "rho_ee")
    _, rho_he = series(fig4, "HE21", -1, "rho_ee")
    assert np.all(rho_te[far] > rho_he[far])


def test_te_tm_drive_has_no_axial_dipole_torque(fig4):
    _, te = series(fig4, "TE01", 0, "T_total_zN_nm")
    assert np.all(te == 0)
