"""Axial torques of nanofiber-guided light on a two-level atom.

Guided and radiation modes of a step-index fiber, directional emission
rates, optical Bloch dynamics, orbital/spin torque bookkeeping and the
Minkowski angular momentum of guided light.
"""

from .angular_momentum import AMDensities, am_densities, integrated_am, photon_am
from .atom_dynamics import BlochState, DriveSpec, evolve_bloch, excitation_rate, steady_state_rho_ee
from .coupling import (AtomSpec, EmissionBreakdown, coupling_guided, dipole_magnitude,
                       gamma_guided_rate, gamma_radiation_rate, rabi_frequency, total_gamma)
from .errors import *  # noqa: F401,F403
from .fiber_modes import (Family, FiberSpec, GuidedMode, GuidedModeId, ModeKind, group_slope,
                          mode_profile, power_amplitude, solve_eigenvalue, v_number)
from .kernels import BACKEND
from .radiation_modes import RadiationMode, RadiationModeId, radiation_profile, radiation_quadrature
from .torques import (TorqueBreakdown, drive_orbital_torque, drive_spin_torque, spon_orbital_torque,
                      spon_spin_torque, torque_ratio, total_torques)

__version__ = "0.1.0"
