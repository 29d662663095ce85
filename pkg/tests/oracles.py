"""Independent reference computations for the test suite.

Nothing here calls the production kernels: digamma values come from
closed forms or scipy, extrema from brute-force simplex grids, strong
edges from spanning-tree enumeration, variances from Monte Carlo.
"""
import itertools
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import digamma

EULER_GAMMA = 0.57721566490153286060651209008240243
ZETA3 = 1.20205690315959428539973816151144999


# -- closed forms for psi, psi', psi'' -------------------------------------

def psi_int(order, k):
    """psi^(order)(k + 1) for integer k >= 0."""
    if order == 0:
        return -EULER_GAMMA + math.fsum(1.0 / i for i in range(1, k + 1))
    if order == 1:
        tail = float(sum(Fraction(1, i * i) for i in range(1, k + 1)))
        return math.pi ** 2 / 6 - tail
    tail = float(sum(Fraction(1, i ** 3) for i in range(1, k + 1)))
    return -2 * ZETA3 + 2 * tail


def psi_half(order, k):
    """psi^(order)(k + 1/2) for integer k >= 0."""
    base = {0: -EULER_GAMMA - 2 * math.log(2), 1: math.pi ** 2 / 2, 2: -14 * ZETA3}[order]
    terms = [Fraction(2, 2 * i - 1) for i in range(1, k + 1)]  # 1/(i - 1/2)
    if order == 0:
        return base + float(sum(terms))
    if order == 1:
        return base - float(sum(t * t for t in terms))
    return base + 2 * float(sum(t ** 3 for t in terms))


# -- h and expectations via scipy -----------------------------------------

def h_ref(u, total):
    u = np.asarray(u, dtype=float)
    return u * (digamma(total + 1) - digamma(total * u + 1))


def entropy_ref(counts, T, s):
    """E_t[H] for each row of T (shape (P, d))."""
    c = np.asarray(counts, dtype=float).ravel()
    N = c.sum() + s
    U = (c[None, :] + s * T) / N
    return h_ref(U, N).sum(axis=1)


def mi_ref(counts, T, s):
    """E_t[I] for each row of T (shape (P, di*dj))."""
    c = np.asarray(counts, dtype=float)
    di, dj = c.shape
    N = c.sum() + s
    U = (c.ravel()[None, :] + s * T) / N
    U3 = U.reshape(-1, di, dj)
    return (h_ref(U3.sum(axis=2), N).sum(axis=1) + h_ref(U3.sum(axis=1), N).sum(axis=1)
            - h_ref(U, N).sum(axis=1))


def mi_diff_ref(counts, T, s):
    """E_t[I(i,j)] - E_t[I(j,k)] for each row of T over a (di, dj, dk) triple."""
    c = np.asarray(counts, dtype=float)
    N = c.sum() + s
    U = ((c.ravel()[None, :] + s * T) / N).reshape((-1,) + c.shape)

    def H(x):
        return h_ref(x.reshape(len(x), -1), N).sum(axis=1)

    ia = H(U.sum(axis=(2, 3))) + H(U.sum(axis=(1, 3))) - H(U.sum(axis=3))
    ib = H(U.sum(axis=(1, 3))) + H(U.sum(axis=(1, 2))) - H(U.sum(axis=1))
    return ia - ib


# -- simplex point sets ---------------------------------------------------

@lru_cache(maxsize=None)
def simplex_grid(dim, resolution):
    """All points of the (dim-1)-simplex with coordinates on a 1/R lattice."""
    R = int(round(1 / resolution))
    pts = []
    for bars in itertools.combinations(range(R + dim - 1), dim - 1):
        prev, row = -1, []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(R + dim - 2 - prev)
        pts.append(row)
    out = np.array(pts, dtype=float) / R
    out.setflags(write=False)
    return out


def simplex_vertex_edges(dim, steps=100):
    """Vertices of the simplex plus points along every edge between two vertices."""
    eye = np.eye(dim)
    pts = [eye]
    lam = np.linspace(0, 1, steps + 1)[:, None]
    for a, b in itertools.combinations(range(dim), 2):
        pts.append(lam * eye[a] + (1 - lam) * eye[b])
    return np.vstack(pts)


# -- spanning trees -------------------------------------------------------

def _is_tree(m, edges):
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len(edges) == m - 1


@lru_cache(maxsize=None)
def spanning_trees(m):
    edges = list(itertools.combinations(range(m), 2))
    return [frozenset(t) for t in itertools.combinations(edges, m - 1) if _is_tree(m, t)]


def max_spanning_trees(m, weight):
    """All maximum spanning trees for an exact (int/Fraction) weight dict."""
    trees = spanning_trees(m)
    totals = [sum(weight[e] for e in t) for t in trees]
    best = max(totals)
    return [t for t, w in zip(trees, totals) if w == best]


def strong_by_grid(m, intervals, points=5):
    """Intersection of all maximum spanning trees over a per-edge weight grid.

    Full Cartesian enumeration in exact integer units; practical for m <= 4.
    """
    edges = list(itertools.combinations(range(m), 2))
    ends = [[Fraction(x).limit_denominator(1000) for x in intervals[e]] for e in edges]
    scale = (points - 1) * math.lcm(*(f.denominator for pair in ends for f in pair))
    grids = []
    for lo, hi in ends:
        lo, hi = int(lo * scale), int(hi * scale)
        grids.append([lo + (hi - lo) * k // (points - 1) for k in range(points)])
    trees = spanning_trees(m)
    incidence = np.array([[e in t for e in edges] for t in trees], dtype=np.int64)
    weights = np.array(list(itertools.product(*grids)), dtype=np.int64)
    totals = weights @ incidence.T
    optimal = totals == totals.max(axis=1, keepdims=True)
    hit = optimal.any(axis=0)
    common = set(edges)
    for t, used in zip(trees, hit):
        if used:
            common &= t
    return frozenset(common)


def strong_by_tree_enumeration(m, intervals):
    """Same intersection as :func:`strong_by_grid`, via one weighting per tree.

    A tree is maximal for some weighting in the box iff it is maximal when its
    own edges sit at their upper ends and all other edges at their lower ends
    (sum comparison against every other tree); both ends are grid points.
    """
    edges = list(itertools.combinations(range(m), 2))
    box = {e: tuple(Fraction(x).limit_denominator(1000) for x in intervals[e]) for e in edges}
    trees = spanning_trees(m)
    common = set(edges)
    for t in trees:
        w = {e: box[e][1] if e in t else box[e][0] for e in edges}
        total = sum(w[e] for e in t)
        if all(total >= sum(w[e] for e in other) for other in trees):
            common &= t
    return frozenset(common)


# -- Monte Carlo posterior moments ----------------------------------------

def _mi_rows(p):
    outer = p.sum(axis=2, keepdims=True) * p.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(p / outer), 0.0)
    return terms.sum(axis=(1, 2))


def mc_mi_variance(counts, t, s, draws=100_000, seed=0):
    c = np.asarray(counts, dtype=float)
    alpha = (c + s * np.asarray(t)).ravel()
    p = np.random.default_rng(seed).dirichlet(alpha, size=draws).reshape((draws,) + c.shape)
    return float(np.var(_mi_rows(p)))


def mc_mi_diff_variance(counts, t, s, draws=100_000, seed=0):
    c = np.asarray(counts, dtype=float)
    alpha = (c + s * np.asarray(t)).ravel()
    p = np.random.default_rng(seed).dirichlet(alpha, size=draws).reshape((draws,) + c.shape)
    return float(np.var(_mi_rows(p.sum(axis=1)) - _mi_rows(p.sum(axis=3))))


# -- lattice-tabulated oracle for triples ----------------------------------

@lru_cache(maxsize=None)
def _lattice(dim, R):
    g = np.rint(simplex_grid(dim, 1.0 / R) * R).astype(np.int64)
    g.setflags(write=False)
    return g


def mi_diff_lattice(counts, resolution, s):
    """E_t[I(i,j)] - E_t[I(j,k)] at every point of the t-lattice with step ``resolution``.

    Every marginal of u is (integer count + s * integer / R) / N, so h is
    tabulated once over (count, lattice step) and gathered.
    """
    c = np.asarray(counts, dtype=np.int64)
    R = int(round(1 / resolution))
    n = int(c.sum())
    N = n + s
    table = h_ref((np.arange(n + 1)[:, None] + s * np.arange(R + 1)[None, :] / R) / N, N)
    K = _lattice(c.size, R).reshape((-1,) + c.shape)

    def H(axes):
        cc = c.sum(axis=axes) if axes else c
        kk = K.sum(axis=tuple(a + 1 for a in axes)) if axes else K
        return table[cc[None], kk].reshape(len(K), -1).sum(axis=1)

    return H((1, 2)) - H((2,)) - H((0, 1)) + H((0,))
