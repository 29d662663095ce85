"""Digamma and polygamma functions and the expected-entropy ``h`` family.

``h(u) = u * (psi(N + 1) - psi(N*u + 1))`` with ``N = n + s`` is the
contribution of one cell to the posterior expected entropy of a Dirichlet
distribution; ``h'`` and ``h''`` drive the linear term and the remainder
bounds in :mod:`idmtree.idm`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = ["DomainError", "PolyOrder", "HContext", "polygamma", "h_family"]


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class PolyOrder(enum.IntEnum):
    DIGAMMA = 0
    TRIGAMMA = 1
    TETRAGAMMA = 2


@dataclass(frozen=True)
class HContext:
    """Sample size ``n`` and IDM prior weight ``s`` shared by every cell."""

    n: int
    s: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s!r}")

    @property
    def total(self) -> float:
        return self.n + self.s

    @property
    def sigma(self) -> float:
        return self.s / (self.n + self.s)


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr, np.ascontiguousarray(arr.ravel())


def _wrap(arr, out):
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def polygamma(order, z):
    """psi^(order)(z) for order 0, 1 or 2 and real ``z > 0``.

    Accepts scalars or arrays. Arguments below 10 are shifted upward with
    the recurrence psi(z+1) = psi(z) + 1/z (and its derivatives) before
    the Bernoulli asymptotic series is summed; relative error is around
    1e-15 away from the zero of psi near 1.4616.
    """
    order = PolyOrder(order)
    arr, flat = _as_array(z)
    if not np.all(flat > 0):
        raise DomainError("polygamma requires z > 0")
    return _wrap(arr, _kernels.active.polygamma(int(order), flat))


def h_family(order, u, ctx: HContext):
    """h (order 0), h' (order 1) or h'' (order 2) evaluated at ``u`` in [0, 1]."""
    order = PolyOrder(order)
    arr, flat = _as_array(u)
    if not np.all((flat >= 0) & (flat <= 1)):
        raise DomainError("h_family requires 0 <= u <= 1")
    return _wrap(arr, _kernels.active.h_family(int(order), flat, float(ctx.total)))


def _h_raw(order, u, total):
    # Unchecked entry point for the bound computations; u is built from
    # counts and is in [0, 1] up to rounding.
    return _kernels.active.h_family(order, np.ascontiguousarray(u, dtype=np.float64).ravel(),
                                    float(total)).reshape(np.shape(u))
