"""Backend selection for the numerical kernels.

The compiled module is preferred; when it is missing (no C toolchain at
install time) the numpy implementation is used. :func:`use` switches the
active backend, which tests and the benchmark rely on.
"""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

active = _ckernels if _ckernels is not None else _pykernels


def available():
    return sorted(_BACKENDS)


def use(name):
    """Activate backend ``name`` and return the previously active one's name."""
    global active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available()}")
    previous = active.NAME
    active = _BACKENDS[name]
    return previous


def backend_name():
    return active.NAME
