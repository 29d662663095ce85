"""Expected entropy and mutual information under the imprecise Dirichlet model.

For a table of counts ``n_i`` and prior mean ``t`` on the simplex the
posterior means are ``u_i = (n_i + s*t_i) / (n + s)``. Entropy and mutual
information expectations are sums of :func:`idmtree.special.h_family`
terms in ``u``. Their range over all ``t`` is bounded by expanding around
an expansion point ``t*`` to first order in ``sigma = s / (n + s)`` and
bounding the second-order remainder with ``h'' < 0`` and ``h''' > 0``.

Two intervals are returned for each quantity:

* ``outer`` always contains the exact IDM expectation interval;
* ``inner`` is spanned by two attained values and so lies inside it.

Both are within O(sigma**2) of the exact interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .data import ContingencyTable, DataError
from .special import _h_raw

__all__ = [
    "IdmConfig", "Interval", "ExpansionPoint", "MIExpansion",
    "expansion_point", "expected_entropy", "entropy_interval",
    "expected_mi", "mi_expansion", "mi_interval", "crude_mi_interval",
    "plugin_mi",
]

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class IdmConfig:
    """IDM prior weight ``s``, expansion-point rule and credibility level."""

    s: float = 1.0
    tstar_rule: Literal["uniform", "empirical"] = "uniform"
    alpha: float = 0.95

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s!r}")
        if self.tstar_rule not in ("uniform", "empirical"):
            raise ValueError(f"unknown tstar_rule {self.tstar_rule!r}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    kind: Literal["outer", "inner", "credible", "crude"] = "outer"

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval bounds out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval | float", slack: float = 0.0) -> bool:
        if isinstance(other, Interval):
            return self.lo - slack <= other.lo and other.hi <= self.hi + slack
        return self.lo - slack <= other <= self.hi + slack

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]


@dataclass(frozen=True)
class ExpansionPoint:
    tstar: np.ndarray
    ustar: np.ndarray


def _counts(table) -> np.ndarray:
    if isinstance(table, ContingencyTable):
        return table.counts
    return ContingencyTable(table).counts


def expansion_point(counts, s: float, rule: str = "uniform") -> ExpansionPoint:
    """t* and the induced u* for a count array of any shape."""
    c = np.asarray(counts, dtype=np.float64)
    n = c.sum()
    if rule == "uniform":
        tstar = np.full(c.shape, 1.0 / c.size)
    elif rule == "empirical":
        if n == 0:
            raise DataError("empirical expansion point needs at least one observation")
        tstar = c / n
    else:
        raise ValueError(f"unknown tstar_rule {rule!r}")
    return ExpansionPoint(tstar, (c + s * tstar) / (n + s))


def _check_simplex(t, shape) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if t.shape != shape:
        raise ValueError(f"t has shape {t.shape}, table has shape {shape}")
    if (t < -SIMPLEX_TOL).any() or abs(t.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError("t must lie on the probability simplex")
    return np.clip(t, 0.0, None)


def _u(c, t, s):
    return (c + s * t) / (c.sum() + s)


def _H(u, total):
    return float(_h_raw(0, u, total).sum())


def expected_entropy(counts, t, s: float) -> float:
    """Posterior expected entropy sum_i h(u_i) for prior mean ``t``."""
    c = _counts(counts).astype(np.float64)
    if c.ndim != 1:
        raise ValueError("expected_entropy takes a one-variable table")
    t = _check_simplex(t, c.shape)
    return _H(_u(c, t, s), c.sum() + s)


def _vertex(shape, flat_index):
    t = np.zeros(int(np.prod(shape)))
    t[flat_index] = 1.0
    return t.reshape(shape)


def entropy_interval(counts, cfg: IdmConfig = IdmConfig()) -> tuple[Interval, Interval]:
    """Outer and inner bounds on [min_t E_t[H], max_t E_t[H]].

    The upper end expands to first order (the remainder is nonpositive);
    the lower end adds the remainder bound 1/2 sigma^2 sum_i h''(n_i/(n+s)).
    Inner witnesses put the whole prior mass on the least (upper) or most
    (lower) frequent category, ties to the smallest index.
    """
    c = _counts(counts).astype(np.float64).ravel()
    if c.size == 1:
        return Interval(0.0, 0.0, "outer"), Interval(0.0, 0.0, "inner")
    s = cfg.s
    total = c.sum() + s
    sigma = s / total
    xp = expansion_point(c, s, cfg.tstar_rule)
    h0 = _H(xp.ustar, total)
    hp = _h_raw(1, xp.ustar, total)
    offset = float(np.dot(xp.tstar, hp))
    h1_hi = sigma * (hp.max() - offset)
    h1_lo = sigma * (hp.min() - offset)
    rem_lb = 0.5 * sigma ** 2 * float(_h_raw(2, c / total, total).sum())
    outer = Interval(h0 + h1_lo + rem_lb, h0 + h1_hi, "outer")
    upper = _H(_u(c, _vertex(c.shape, int(np.argmin(c))), s), total)
    lower = _H(_u(c, _vertex(c.shape, int(np.argmax(c))), s), total)
    inner = Interval(min(lower, upper), max(lower, upper), "inner")
    return outer, inner


def _mi_of_u(u, total):
    return _H(u.sum(axis=1), total) + _H(u.sum(axis=0), total) - _H(u, total)


def expected_mi(pair, t, s: float) -> float:
    """Posterior expected mutual information H(left) + H(right) - H(joint)."""
    c = _counts(pair).astype(np.float64)
    if c.ndim != 2:
        raise ValueError("expected_mi takes a two-variable table")
    t = _check_simplex(t, c.shape)
    return _mi_of_u(_u(c, t, s), c.sum() + s)


@dataclass(frozen=True)
class MIExpansion:
    """Terms of the first-order expansion of E_t[I] around t*.

    ``linear_lo``/``linear_hi`` are the extreme values of the linear term
    over the simplex; ``rem_lo``/``rem_hi`` bound the exact remainder.
    """

    i0: float
    linear_lo: float
    linear_hi: float
    rem_lo: float
    rem_hi: float
    argmin: tuple[int, int]
    argmax: tuple[int, int]
    degenerate: bool = False

    @property
    def lower(self) -> float:
        return self.i0 + self.linear_lo + self.rem_lo

    @property
    def upper(self) -> float:
        return self.i0 + self.linear_hi + self.rem_hi


def mi_expansion(pair, cfg: IdmConfig = IdmConfig()) -> MIExpansion:
    c = _counts(pair).astype(np.float64)
    if c.ndim != 2:
        raise ValueError("mi_expansion takes a two-variable table")
    if 1 in c.shape:
        # one variable is constant: I(u) is identically zero
        return MIExpansion(0.0, 0.0, 0.0, 0.0, 0.0, (0, 0), (0, 0), degenerate=True)
    s = cfg.s
    total = c.sum() + s
    sigma = s / total
    xp = expansion_point(c, s, cfg.tstar_rule)
    u = xp.ustar
    i0 = _mi_of_u(u, total)
    g = (_h_raw(1, u.sum(axis=1), total)[:, None]
         + _h_raw(1, u.sum(axis=0), total)[None, :]
         - _h_raw(1, u, total))
    offset = float((xp.tstar * g).sum())
    kmax, kmin = int(np.argmax(g)), int(np.argmin(g))
    half_s2 = 0.5 * sigma ** 2
    rem_lo = half_s2 * float(_h_raw(2, c.sum(axis=1) / total, total).sum()
                             + _h_raw(2, c.sum(axis=0) / total, total).sum())
    rem_hi = -half_s2 * float(_h_raw(2, c / total, total).sum())
    return MIExpansion(
        i0=i0,
        linear_lo=sigma * (g.flat[kmin] - offset),
        linear_hi=sigma * (g.flat[kmax] - offset),
        rem_lo=rem_lo,
        rem_hi=rem_hi,
        argmin=tuple(int(x) for x in np.unravel_index(kmin, c.shape)),
        argmax=tuple(int(x) for x in np.unravel_index(kmax, c.shape)),
    )


def mi_interval(pair, cfg: IdmConfig = IdmConfig()) -> tuple[Interval, Interval]:
    """Outer and inner bounds on [min_t E_t[I], max_t E_t[I]].

    The inner witnesses are the simplex vertices that extremize the linear
    term; when O(sigma^2) effects swap their order the pair is sorted, which
    keeps it inside the exact interval.
    """
    ex = mi_expansion(pair, cfg)
    if ex.degenerate:
        return Interval(0.0, 0.0, "outer"), Interval(0.0, 0.0, "inner")
    c = _counts(pair).astype(np.float64)
    total = c.sum() + cfg.s
    a = _mi_of_u(_u(c, _vertex(c.shape, np.ravel_multi_index(ex.argmin, c.shape)), cfg.s), total)
    b = _mi_of_u(_u(c, _vertex(c.shape, np.ravel_multi_index(ex.argmax, c.shape)), cfg.s), total)
    return Interval(ex.lower, ex.upper, "outer"), Interval(min(a, b), max(a, b), "inner")


def crude_mi_interval(pair, cfg: IdmConfig = IdmConfig()) -> Interval:
    """[H_left_lo + H_right_lo - H_joint_hi, H_left_hi + H_right_hi - H_joint_lo].

    Valid but possibly very loose, since the three entropies are bounded
    independently.
    """
    c = _counts(pair)
    left, _ = entropy_interval(c.sum(axis=1), cfg)
    right, _ = entropy_interval(c.sum(axis=0), cfg)
    joint, _ = entropy_interval(c.ravel(), cfg)
    return Interval(left.lo + right.lo - joint.hi, left.hi + right.hi - joint.lo, "crude")


def plugin_mi(p) -> float:
    """Mutual information of a joint probability matrix, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=np.float64)
    outer = p.sum(axis=1, keepdims=True) * p.sum(axis=0, keepdims=True)
    nz = p > 0
    return float(np.sum(p[nz] * np.log(p[nz] / outer[nz])))
