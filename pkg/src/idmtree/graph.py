"""Set-based weighted graphs and strong-edge detection.

A complete graph on ``m`` nodes carries a *set* of admissible weights per
edge. Edge ``e`` dominates ``f`` when it outweighs ``f`` under every
admissible weighting. An edge is strong (in every maximum spanning tree)
iff each simple cycle through it contains an edge it dominates, i.e. iff
its endpoints are disconnected once the edge and everything it dominates
are removed.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .data import Dataset, pair_counts, triple_counts
from .dominance import (
    CredibleParams,
    DominanceVerdict,
    dominates_credible,
    dominates_disjoint,
    dominates_shared,
)
from .idm import IdmConfig, Interval, crude_mi_interval, mi_interval, plugin_mi

__all__ = [
    "Edge", "OracleError", "Forest", "Tree", "SetWeightedGraph", "IntervalOracle",
    "IdmOracle", "detect_strong_exact", "detect_strong_approx", "chow_liu_weights",
    "chow_liu_tree", "threshold_forest", "build_graph", "forest_to_json", "forest_to_dot",
]

Edge = tuple[int, int]


class OracleError(RuntimeError):
    """The dominance oracle is not a strict partial order on the edges."""


def _edge(a: int, b: int) -> Edge:
    if a == b:
        raise ValueError(f"self-edge ({a}, {a}) is not part of the graph")
    return (a, b) if a < b else (b, a)


class _DisjointSet:
    def __init__(self, m):
        self.parent = list(range(m))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass(frozen=True)
class Forest:
    """Acyclic set of undirected edges over nodes 0..m-1."""

    m: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = frozenset(_edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        dsu = _DisjointSet(self.m)
        for a, b in sorted(norm):
            if not (0 <= a < self.m and 0 <= b < self.m):
                raise ValueError(f"edge {(a, b)} has an endpoint outside [0, {self.m})")
            if not dsu.union(a, b):
                raise ValueError(f"edge set contains a cycle through {(a, b)}")

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __contains__(self, e):
        return _edge(*e) in self.edges


@dataclass(frozen=True)
class Tree(Forest):
    """Spanning tree: m - 1 edges, connected and acyclic."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) != self.m - 1:
            raise ValueError(f"a spanning tree on {self.m} nodes has {self.m - 1} edges, got {len(self.edges)}")


class SetWeightedGraph:
    """Complete graph whose edge order is a partial order given by an oracle.

    ``oracle(e, f)`` returns a :class:`DominanceVerdict` for "e dominates f".
    Verdicts are memoized per ordered pair; ``dict.setdefault`` keeps the
    memo write-once when several threads evaluate edges concurrently.
    """

    def __init__(self, names: Sequence[str], oracle: Callable[[Edge, Edge], DominanceVerdict]):
        if len(names) < 2:
            raise ValueError("a graph needs at least two nodes")
        self.names = list(names)
        self.m = len(self.names)
        self.oracle = oracle
        self.edges: list[Edge] = list(itertools.combinations(range(self.m), 2))
        self.index = {e: k for k, e in enumerate(self.edges)}
        self._memo: dict[tuple[Edge, Edge], DominanceVerdict] = {}

    @classmethod
    def from_intervals(cls, names: Sequence[str], intervals: Mapping[Edge, tuple[float, float]]):
        """Interval mode: e dominates f iff lo(e) > hi(f)."""
        return cls(names, IntervalOracle(len(names), intervals))

    def verdict(self, e: Edge, f: Edge) -> DominanceVerdict:
        e, f = _edge(*e), _edge(*f)
        key = (e, f)
        hit = self._memo.get(key)
        if hit is None:
            hit = DominanceVerdict(False, 0.0) if e == f else self.oracle(e, f)
            hit = self._memo.setdefault(key, hit)
        return hit

    def dominates(self, e: Edge, f: Edge) -> bool:
        return self.verdict(e, f).dominates

    def dominance_matrix(self) -> np.ndarray:
        """Boolean matrix D[k, l] = edge k dominates edge l, checked for consistency."""
        bulk = getattr(self.oracle, "matrix", None)
        if bulk is not None:
            dom = np.asarray(bulk(self.edges), dtype=bool)
        else:
            n_edges = len(self.edges)
            dom = np.zeros((n_edges, n_edges), dtype=bool)
            for k, e in enumerate(self.edges):
                for l, f in enumerate(self.edges):
                    if k != l:
                        dom[k, l] = self.dominates(e, f)
        if dom.diagonal().any():
            raise OracleError("oracle reports an edge dominating itself")
        both = np.argwhere(dom & dom.T)
        if len(both):
            k, l = both[0]
            raise OracleError(f"edges {self.edges[k]} and {self.edges[l]} dominate each other")
        return dom

    def endpoints(self):
        ea = np.array([e[0] for e in self.edges], dtype=np.int64)
        eb = np.array([e[1] for e in self.edges], dtype=np.int64)
        return ea, eb


class IntervalOracle:
    """Dominance for separately specified weight intervals."""

    def __init__(self, m: int, intervals: Mapping[Edge, tuple[float, float]]):
        self.intervals: dict[Edge, tuple[float, float]] = {}
        for e, (lo, hi) in intervals.items():
            if lo > hi:
                raise ValueError(f"interval for {e} has lo > hi")
            self.intervals[_edge(*e)] = (float(lo), float(hi))
        missing = [e for e in itertools.combinations(range(m), 2) if e not in self.intervals]
        if missing:
            raise ValueError(f"no interval given for edges {missing}")

    def __call__(self, e: Edge, f: Edge) -> DominanceVerdict:
        return DominanceVerdict.from_margin(self.intervals[e][0] - self.intervals[f][1])

    def matrix(self, edges: Sequence[Edge]) -> np.ndarray:
        lo = np.array([self.intervals[e][0] for e in edges])
        hi = np.array([self.intervals[e][1] for e in edges])
        dom = lo[:, None] > hi[None, :]
        np.fill_diagonal(dom, False)
        return dom


class IdmOracle:
    """Dominance from IDM bounds on a dataset.

    Edges sharing a vertex are compared through the joint IDM of their three
    variables; disjoint edges through their separate outer intervals.
    """

    def __init__(self, ds: Dataset, cfg: IdmConfig, credible: Optional[CredibleParams] = None):
        self.ds = ds
        self.cfg = cfg
        self.credible = credible
        self._pairs: dict[Edge, object] = {}

    def pair(self, e: Edge):
        tab = self._pairs.get(e)
        if tab is None:
            tab = self._pairs.setdefault(e, pair_counts(self.ds, *e))
        return tab

    def __call__(self, e: Edge, f: Edge) -> DominanceVerdict:
        shared = set(e) & set(f)
        if not shared:
            if self.credible is not None:
                return dominates_credible((self.pair(e), self.pair(f)), self.cfg, self.credible)
            return dominates_disjoint(self.pair(e), self.pair(f), self.cfg)
        (j,) = shared
        i = e[0] if e[1] == j else e[1]
        k = f[0] if f[1] == j else f[1]
        triple = triple_counts(self.ds, i, j, k)
        if self.credible is not None:
            return dominates_credible(triple, self.cfg, self.credible)
        return dominates_shared(triple, self.cfg)


def build_graph(ds: Dataset, cfg: IdmConfig = IdmConfig(),
                credible: Optional[CredibleParams] = None) -> SetWeightedGraph:
    """Set-based weighted graph over the dataset's variables with IDM dominance."""
    if ds.m < 2:
        raise ValueError("need at least two variables")
    return SetWeightedGraph(ds.names, IdmOracle(ds, cfg, credible))


def detect_strong_exact(g: SetWeightedGraph) -> Forest:
    """All edges whose every simple cycle holds an edge they dominate."""
    dom = g.dominance_matrix()
    ea, eb = g.endpoints()
    mask = _kernels.active.strong_exact_mask(np.ascontiguousarray(dom), ea, eb, g.m)
    return Forest(g.m, frozenset(e for e, keep in zip(g.edges, mask) if keep))


def _dominant(g: SetWeightedGraph, edges: Sequence[Edge]) -> Optional[Edge]:
    # first pass keeps the only possible winner, second pass confirms it
    cand = None
    for e in edges:
        if cand is None:
            cand = e
        elif g.dominates(cand, e):
            continue
        elif g.dominates(e, cand):
            cand = e
        else:
            cand = None
    if cand is None:
        return None
    for e in edges:
        if e != cand and not g.dominates(cand, e):
            return None
    return cand


def detect_strong_approx(g: SetWeightedGraph) -> Forest:
    """Greedy subset of the strong edges in O(m^3) dominance tests.

    Seeds with each node's incident edge that dominates the node's other
    incident edges, then grows every resulting subtree by the frontier edge
    that dominates all other frontier edges, while one exists.
    """
    m = g.m
    found: set[Edge] = set()
    dsu = _DisjointSet(m)
    for v in range(m):
        best = _dominant(g, [_edge(v, w) for w in range(m) if w != v])
        if best is not None and best not in found:
            found.add(best)
            dsu.union(*best)

    considered: set[int] = set()
    while True:
        roots = sorted({dsu.find(x) for e in found for x in e} - considered)
        if not roots:
            break
        current = roots[0]
        while True:
            root = dsu.find(current)
            inside = [x for x in range(m) if dsu.find(x) == root]
            outside = [x for x in range(m) if dsu.find(x) != root]
            frontier = sorted(_edge(a, b) for a in inside for b in outside)
            best = _dominant(g, frontier) if frontier else None
            if best is None:
                break
            found.add(best)
            dsu.union(*best)
        considered.add(dsu.find(current))
    return Forest(m, frozenset(found))


def chow_liu_weights(ds: Dataset) -> dict[Edge, float]:
    """Empirical mutual information for every variable pair."""
    return {
        (a, b): plugin_mi(pair_counts(ds, a, b).counts / ds.n)
        for a, b in itertools.combinations(range(ds.m), 2)
    }


def chow_liu_tree(ds: Dataset) -> Tree:
    """Maximum spanning tree on empirical MI (Kruskal, ties lexicographic)."""
    if ds.m < 2 or ds.n < 1:
        raise ValueError("need at least two variables and one observation")
    weights = chow_liu_weights(ds)
    dsu = _DisjointSet(ds.m)
    chosen = []
    for e in sorted(weights, key=lambda e: (-weights[e], e)):
        if dsu.union(*e):
            chosen.append(e)
    return Tree(ds.m, frozenset(chosen))


def threshold_forest(f: Forest, upper_mi: Mapping[Edge, float], epsilon: float) -> Forest:
    """Drop every edge whose upper MI bound does not exceed ``epsilon``."""
    keep = []
    for e in f:
        if e not in upper_mi and (e[1], e[0]) not in upper_mi:
            raise KeyError(f"no upper MI bound for edge {e}")
        value = upper_mi[e] if e in upper_mi else upper_mi[(e[1], e[0])]
        if value > epsilon:
            keep.append(e)
    return Forest(f.m, frozenset(keep))


def edge_bounds(ds: Dataset, cfg: IdmConfig, credible: Optional[CredibleParams] = None):
    """Outer, inner and (optionally) credible MI intervals for every pair."""
    from .dominance import credible_interval

    out = {}
    for e in itertools.combinations(range(ds.m), 2):
        tab = pair_counts(ds, *e)
        outer, inner = mi_interval(tab, cfg)
        row = {"outer": outer, "inner": inner, "crude": crude_mi_interval(tab, cfg)}
        if credible is not None:
            row["credible"] = credible_interval(tab, IdmConfig(cfg.s, cfg.tstar_rule, credible.alpha))
        out[e] = row
    return out


def forest_to_json(forest: Forest, names: Sequence[str], *, algorithm: str,
                   bounds: Optional[Mapping[Edge, Mapping[str, Interval]]] = None,
                   graph: Optional[SetWeightedGraph] = None, params: Optional[dict] = None) -> str:
    """Deterministic JSON document for a learned forest or tree."""
    edges = []
    for a, b in forest:
        item = {"source": names[a], "target": names[b]}
        if bounds is not None:
            for kind, iv in bounds[(a, b)].items():
                item[kind] = iv.as_list()
        if graph is not None:
            dominated = []
            for f in graph.edges:
                if f != (a, b) and (((a, b), f) in graph._memo):
                    v = graph._memo[((a, b), f)]
                    if v.dominates:
                        dominated.append({"source": names[f[0]], "target": names[f[1]],
                                          "margin": v.margin})
            item["dominates"] = dominated
        edges.append(item)
    doc = {"algorithm": algorithm, "nodes": list(names), "edges": edges}
    if params:
        doc["params"] = params
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt2(x: float) -> str:
    return f"{x:.2g}"


def forest_to_dot(forest: Forest, names: Sequence[str],
                  bounds: Optional[Mapping[Edge, Mapping[str, Interval]]] = None) -> str:
    """Graphviz source: strong edges solid, labelled with their outer MI interval."""
    def q(s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["graph forest {"]
    lines += [f"  {q(n)};" for n in names]
    for a, b in forest:
        attrs = ["style=solid"]
        if bounds is not None:
            iv = bounds[(a, b)]["outer"]
            attrs.append(f'label="[{_fmt2(iv.lo)}, {_fmt2(iv.hi)}]"')
        lines.append(f"  {q(names[a])} -- {q(names[b])} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
