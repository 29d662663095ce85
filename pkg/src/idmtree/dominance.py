"""Certified dominance between edges and credible-limit variants.

Edge ``a`` dominates edge ``b`` when E_t[I^a] > E_t[I^b] for every prior
mean ``t`` of the IDM. Each test computes a lower bound (the *margin*) on
min_t (I^a - I^b) and reports dominance only when that bound is strictly
positive, so a true verdict is never an artefact of the approximation.

The credible variants subtract ``r * sqrt(Var)`` with ``alpha =
erf(r / sqrt(2))``. That step is a Gaussian approximation of the
posterior of I and is not guaranteed to be conservative for small n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Union

import numpy as np

from .data import ContingencyTable, DataError
from .idm import IdmConfig, Interval, _H, _counts, expansion_point, mi_expansion, mi_interval
from .special import _h_raw

__all__ = [
    "DominanceVerdict", "CredibleParams", "dominates_disjoint", "dominates_shared",
    "shared_margin", "mi_variance", "mi_diff_variance", "credible_interval",
    "dominates_credible",
]


@dataclass(frozen=True)
class DominanceVerdict:
    dominates: bool
    margin: float

    def __post_init__(self):
        if self.dominates and not self.margin > 0:
            raise ValueError("a dominance verdict needs a positive margin")

    @classmethod
    def from_margin(cls, margin: float) -> "DominanceVerdict":
        margin = float(margin)
        return cls(margin > 0, margin)

    def __bool__(self):
        return self.dominates


@dataclass(frozen=True)
class CredibleParams:
    """Gaussian quantile factor ``r`` and credibility ``alpha = erf(r/sqrt 2)``."""

    r: float
    alpha: float

    def __post_init__(self):
        if self.r < 0 or not 0 <= self.alpha < 1:
            raise ValueError("need r >= 0 and 0 <= alpha < 1")
        if abs(math.erf(self.r / math.sqrt(2)) - self.alpha) > 1e-6:
            raise ValueError(f"r={self.r} and alpha={self.alpha} are inconsistent")

    @classmethod
    def from_alpha(cls, alpha: float) -> "CredibleParams":
        if not 0 < alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
        return cls(NormalDist().inv_cdf((1.0 + alpha) / 2.0), alpha)

    @classmethod
    def from_r(cls, r: float) -> "CredibleParams":
        return cls(r, math.erf(r / math.sqrt(2)))


def _same_sample(*tables):
    sizes = {int(_counts(t).sum()) for t in tables}
    if len(sizes) > 1:
        raise DataError(f"tables come from different samples (n = {sorted(sizes)})")


def dominates_disjoint(pair_a, pair_b, cfg: IdmConfig = IdmConfig()) -> DominanceVerdict:
    """Dominance test for edges without a common vertex.

    margin = lower outer bound of I^a minus upper outer bound of I^b.
    """
    _same_sample(pair_a, pair_b)
    return DominanceVerdict.from_margin(mi_expansion(pair_a, cfg).lower
                                        - mi_expansion(pair_b, cfg).upper)


def shared_margin(triple, cfg: IdmConfig = IdmConfig()) -> float:
    """Lower bound on min_t (I^a - I^b) for a = (i, j), b = (j, k).

    ``triple`` is indexed (i, j, k). The linear term is minimized over the
    vertices of the joint simplex by nesting the minimizations: over i and
    over k for each j, then over j, which costs O(d_i d_j + d_j d_k).
    """
    c = _counts(triple).astype(np.float64)
    if c.ndim != 3:
        raise ValueError("shared_margin takes a three-variable table")
    s = cfg.s
    total = c.sum() + s
    sigma = s / total
    xp = expansion_point(c, s, cfg.tstar_rule)
    u = xp.ustar
    u_i, u_j, u_k = u.sum(axis=(1, 2)), u.sum(axis=(0, 2)), u.sum(axis=(0, 1))
    u_ij, u_jk = u.sum(axis=2), u.sum(axis=0)
    i0_a = _H(u_i, total) + _H(u_j, total) - _H(u_ij, total)
    i0_b = _H(u_j, total) + _H(u_k, total) - _H(u_jk, total)
    # I^a - I^b = H_i - H_ij - H_k + H_jk; coefficient of t_ijk is A_ij + B_jk
    a_ij = _h_raw(1, u_i, total)[:, None] - _h_raw(1, u_ij, total)
    b_jk = _h_raw(1, u_jk, total) - _h_raw(1, u_k, total)[None, :]
    linear_min = float(np.min(a_ij.min(axis=0) + b_jk.min(axis=1)))
    offset = float((xp.tstar.sum(axis=2) * a_ij).sum() + (xp.tstar.sum(axis=0) * b_jk).sum())
    half_s2 = 0.5 * sigma ** 2
    rem_a_lo = half_s2 * float(_h_raw(2, c.sum(axis=(1, 2)) / total, total).sum()
                               + _h_raw(2, c.sum(axis=(0, 2)) / total, total).sum())
    rem_b_hi = -half_s2 * float(_h_raw(2, c.sum(axis=0) / total, total).sum())
    return i0_a - i0_b + sigma * (linear_min - offset) + rem_a_lo - rem_b_hi


def dominates_shared(triple, cfg: IdmConfig = IdmConfig()) -> DominanceVerdict:
    """Does edge (i, j) dominate edge (j, k), jointly over the triple's IDM?"""
    return DominanceVerdict.from_margin(shared_margin(triple, cfg))


def _log_ratio(u):
    outer = u.sum(axis=1, keepdims=True) * u.sum(axis=0, keepdims=True)
    out = np.zeros_like(u)
    nz = u > 0
    out[nz] = np.log(u[nz] / outer[nz])
    return out


def _posterior_mean(c, t, s):
    t = np.asarray(t, dtype=np.float64)
    if t.shape != c.shape or abs(t.sum() - 1.0) > 1e-9 or (t < -1e-9).any():
        raise ValueError("t must be a probability array shaped like the table")
    return (c + s * t) / (c.sum() + s)


def mi_variance(pair, t, s: float) -> float:
    """Leading 1/(n+s) term of the posterior variance of I at prior mean t."""
    c = _counts(pair).astype(np.float64)
    u = _posterior_mean(c, t, s)
    log_r = _log_ratio(u)
    mean = float((u * log_r).sum())
    return max(float((u * log_r ** 2).sum()) - mean ** 2, 0.0) / (c.sum() + s)


def mi_diff_variance(triple, t, s: float) -> float:
    """Leading term of Var[I^b - I^a] for a = (i, j), b = (j, k) of a triple."""
    c = _counts(triple).astype(np.float64)
    if c.ndim != 3:
        raise ValueError("mi_diff_variance takes a three-variable table")
    u = _posterior_mean(c, t, s)
    ua, ub = u.sum(axis=2), u.sum(axis=0)
    la, lb = _log_ratio(ua), _log_ratio(ub)
    mean_a, mean_b = float((ua * la).sum()), float((ub * lb).sum())
    var_a = float((ua * la ** 2).sum()) - mean_a ** 2
    var_b = float((ub * lb ** 2).sum()) - mean_b ** 2
    cov = float((u * la[:, :, None] * lb[None, :, :]).sum()) - mean_a * mean_b
    return max(var_a + var_b - 2.0 * cov, 0.0) / (c.sum() + s)


def _tstar(table, cfg):
    return expansion_point(_counts(table), cfg.s, cfg.tstar_rule).tstar


def credible_interval(pair, cfg: IdmConfig = IdmConfig()) -> Interval:
    """Outer expectation interval widened by r * sqrt(Var at t*) on both sides."""
    outer, _ = mi_interval(pair, cfg)
    r = CredibleParams.from_alpha(cfg.alpha).r
    spread = r * math.sqrt(mi_variance(pair, _tstar(pair, cfg), cfg.s))
    return Interval(outer.lo - spread, outer.hi + spread, "credible")


Edges = Union[ContingencyTable, tuple]


def dominates_credible(edges: Edges, cfg: IdmConfig, cp: CredibleParams) -> DominanceVerdict:
    """Credible-limit dominance for a shared triple or a pair of disjoint tables.

    A three-variable table is treated as a = (i, j) over b = (j, k) and uses
    the joint variance of the difference. For a tuple of two pair tables the
    joint of all four variables is not available, so the variance of the
    difference is replaced by its upper bound (sqrt Var_a + sqrt Var_b)^2.
    """
    if not isinstance(edges, tuple):
        c = _counts(edges)
        if c.ndim != 3:
            raise ValueError("expected a three-variable table or two pair tables")
        margin = shared_margin(c, cfg)
        sd = math.sqrt(mi_diff_variance(c, _tstar(c, cfg), cfg.s))
    else:
        pair_a, pair_b = edges
        margin = dominates_disjoint(pair_a, pair_b, cfg).margin
        sd = (math.sqrt(mi_variance(pair_a, _tstar(pair_a, cfg), cfg.s))
              + math.sqrt(mi_variance(pair_b, _tstar(pair_b, cfg), cfg.s)))
    return DominanceVerdict.from_margin(margin - cp.r * sd)
