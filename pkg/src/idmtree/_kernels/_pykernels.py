"""Numpy implementations of the hot kernels.

Same call signatures as the compiled ``_ckernels`` module. Inputs are
assumed validated by the callers in :mod:`idmtree.special` and
:mod:`idmtree.graph`.
"""
import numpy as np

NAME = "python"

# Asymptotic expansion is used once the argument has been shifted to >= this.
SHIFT_THRESHOLD = 10.0

# B_2, B_4, ..., B_20
BERNOULLI = np.array([
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0,
])


def _asymptotic(order, z):
    zi2 = 1.0 / (z * z)
    acc = np.zeros_like(z)
    power = zi2.copy()
    for k, b in enumerate(BERNOULLI, start=1):
        if order == 0:
            acc += b / (2 * k) * power
        elif order == 1:
            acc += b * power
        else:
            acc += (2 * k + 1) * b * power
        power = power * zi2
    if order == 0:
        return np.log(z) - 0.5 / z - acc
    if order == 1:
        return (1.0 + 0.5 / z + acc) / z
    return -(1.0 + 1.0 / z + acc) * zi2


def polygamma(order, z):
    """psi^(order)(z) for a float64 array of positive arguments."""
    z = np.array(z, dtype=np.float64, copy=True)
    shift = np.zeros_like(z)
    low = z < SHIFT_THRESHOLD
    while low.any():
        zl = z[low]
        if order == 0:
            shift[low] -= 1.0 / zl
        elif order == 1:
            shift[low] += 1.0 / (zl * zl)
        else:
            shift[low] -= 2.0 / (zl * zl * zl)
        z[low] = zl + 1.0
        low = z < SHIFT_THRESHOLD
    return _asymptotic(order, z) + shift


def h_family(order, u, total):
    """h, h' or h'' at the points ``u`` for ``total = n + s``."""
    u = np.asarray(u, dtype=np.float64)
    x = total * u + 1.0
    if order == 0:
        return u * (polygamma(0, np.array([total + 1.0]))[0] - polygamma(0, x))
    if order == 1:
        return (polygamma(0, np.array([total + 1.0]))[0] - polygamma(0, x)
                - u * total * polygamma(1, x))
    return -2.0 * total * polygamma(1, x) - u * total * total * polygamma(2, x)


def strong_exact_mask(dom, ea, eb, m):
    """Edges whose endpoints disconnect once they and every edge they dominate are dropped.

    ``dom[e, f]`` is true when edge ``e`` dominates edge ``f``; ``ea``/``eb``
    hold the endpoints of each edge index.
    """
    n_edges = len(ea)
    out = np.zeros(n_edges, dtype=bool)
    full = ~np.eye(m, dtype=bool)
    for e in range(n_edges):
        removed = dom[e].copy()
        removed[e] = True
        adj = full.copy()
        adj[ea[removed], eb[removed]] = False
        adj[eb[removed], ea[removed]] = False
        reached = np.zeros(m, dtype=bool)
        reached[ea[e]] = True
        frontier = reached.copy()
        while frontier.any():
            nxt = adj[frontier].any(axis=0) & ~reached
            reached |= nxt
            frontier = nxt
            if reached[eb[e]]:
                break
        out[e] = not reached[eb[e]]
    return out
