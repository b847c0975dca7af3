"""Backend selection for the enumeration kernels.

The compiled extension is used when it was built; otherwise the pure
Python implementation takes over. Both expose the same four functions.
"""

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _compiled if _compiled is not None else _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend():
    """Name of the backend currently in use."""
    return _active.NAME


def set_backend(name):
    """Switch backend; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    previous = _active.NAME
    _active = _BACKENDS[name]
    return previous


def _prep(a):
    return np.ascontiguousarray(a, dtype=np.float64)


# non-finite results are turned into PermanentOverflowError by the callers
def _quiet():
    return np.errstate(over="ignore", invalid="ignore")


def permanent_ryser(a):
    with _quiet():
        return _active.permanent_ryser(_prep(a))


def poly_ryser(a):
    with _quiet():
        return np.asarray(_active.poly_ryser(_prep(a)))


def permanent_definition(a):
    with _quiet():
        return _active.permanent_definition(_prep(a))


def poly_definition(a):
    with _quiet():
        return np.asarray(_active.poly_definition(_prep(a)))
