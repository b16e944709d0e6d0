"""Exception types raised by the solver stack."""


class NanotorqueError(Exception):
    """Base class for all package errors."""


class NoGuidedMode(NanotorqueError):
    """The requested guided mode is below cutoff at this frequency."""


class DegenerateMode(NanotorqueError):
    """A mode has non-positive power flux and cannot be normalized to a power."""


class InvalidBeta(NanotorqueError, ValueError):
    """Radiation-mode propagation constant outside the open light cone."""


class QuadratureNotConverged(NanotorqueError):
    """An integral or mode sum did not reach the requested tolerance."""


class StepTooLarge(NanotorqueError, ValueError):
    """Fixed integration step too coarse for the fastest rate in the problem."""


class UndefinedRatio(NanotorqueError, ZeroDivisionError):
    """Orbital/spin torque ratio requested for a pi (q = 0) transition."""


class DegeneratePoint(NanotorqueError):
    """Energy density vanishes where a per-photon quantity was requested."""


class DomainError(NanotorqueError, ValueError):
    """Input outside the physical domain (e.g. atom inside the fiber)."""


class ConfigError(NanotorqueError):
    """Malformed or inconsistent scan configuration."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
