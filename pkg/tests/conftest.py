from __future__ import annotations

import math

import pytest
from scipy.constants import c as C_LIGHT

from nanotorque.coupling import RadiationChannels, guided_channels
from nanotorque.fiber_modes import FiberSpec, GuidedModeId, ModeKind, mode_profile
from nanotorque.radiation_modes import radiation_quadrature

A_REF = 350e-9
N1_REF = 1.4537
LAMBDA_REF = 780e-9
OMEGA_REF = 2 * math.pi * C_LIGHT / LAMBDA_REF
GAMMA0_REF = 2 * math.pi * 6.065e6


@pytest.fixture(scope="session")
def fiber():
    return FiberSpec(A_REF, N1_REF, 1.0)


@pytest.fixture(scope="session")
def omega():
    return OMEGA_REF


@pytest.fixture(scope="session")
def modes(fiber, omega):
    """Solved reference modes keyed by label (f = +1, p = +1 or 0)."""
    out = {}
    for label in ("HE11", "TE01", "TM01", "HE21"):
        kind = ModeKind.parse(label)
        p = 1 if kind.family.hybrid else 0
        out[label] = mode_profile(fiber, GuidedModeId(omega, kind, 1, p))
    return out


@pytest.fixture(scope="session")
def guided(fiber, omega):
    return guided_channels(fiber, omega)


@pytest.fixture(scope="session")
def plan(omega):
    return radiation_quadrature(omega, 1e-6, 1.0, r_max=3 * A_REF)


@pytest.fixture(scope="session")
def channels(fiber, plan):
    return RadiationChannels(fiber, plan)
