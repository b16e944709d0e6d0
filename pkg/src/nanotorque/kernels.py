"""Backend selection for the hot radiation-rate kernel.

The compiled extension is used when importable; set
``NANOTORQUE_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

import numpy as np

from . import _kernels_py

_FORCE_PURE = os.environ.get("NANOTORQUE_PURE_PYTHON", "") not in ("", "0")

try:
    if _FORCE_PURE:
        raise ImportError("pure-python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def radiation_shell_sums(r, omega, beta, weights, sigma, coefs, l_values, backend=None):
    """Dispatch to the selected backend (see ``_kernels_py`` for the contract)."""
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _compiled.radiation_shell_sums(
            float(r), float(omega),
            np.ascontiguousarray(beta, dtype=np.float64),
            np.ascontiguousarray(weights, dtype=np.float64),
            np.ascontiguousarray(sigma, dtype=np.float64),
            np.ascontiguousarray(coefs, dtype=np.complex128),
            np.ascontiguousarray(l_values, dtype=np.int64),
        )
    return _kernels_py.radiation_shell_sums(r, omega, beta, weights, sigma, coefs, l_values)


def available_backends():
    return ["python"] + (["cython"] if _compiled is not None else [])
