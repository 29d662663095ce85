"""Tree-shaped binary Bayesian networks, ancestral sampling and the
strong-edge vs. Chow-Liu comparison harness."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .data import Dataset
from .graph import Edge, build_graph, chow_liu_tree, detect_strong_exact
from .idm import IdmConfig

__all__ = [
    "NetworkError", "BayesNet", "load_network", "default_network", "sample",
    "score", "CellResult", "ExperimentReport", "run_experiment",
]


class NetworkError(ValueError):
    """Invalid network specification."""


@dataclass(frozen=True)
class BayesNet:
    """Binary variables on a directed tree.

    ``cpt[v] = (P(yes | parent yes), P(yes | parent no))``; the root stores
    its marginal in the first slot and ``None`` in the second.
    """

    names: tuple[str, ...]
    parent: tuple[Optional[int], ...]
    cpt: tuple[tuple[float, Optional[float]], ...]

    def __post_init__(self):
        m = len(self.names)
        if m == 0 or len(self.parent) != m or len(self.cpt) != m:
            raise NetworkError("names, parents and CPTs must have equal nonzero length")
        if len(set(self.names)) != m:
            raise NetworkError("duplicate variable names")
        roots = [v for v, p in enumerate(self.parent) if p is None]
        if len(roots) != 1:
            raise NetworkError(f"a tree has exactly one root, found {len(roots)}")
        for v, (p_yes, p_no) in enumerate(self.cpt):
            probs = [p_yes] if self.parent[v] is None else [p_yes, p_no]
            if any(p is None or not 0.0 <= p <= 1.0 for p in probs):
                raise NetworkError(f"probabilities of {self.names[v]!r} must lie in [0, 1]")
        self.order()  # raises on cycles

    @property
    def m(self) -> int:
        return len(self.names)

    def order(self) -> list[int]:
        """Topological order (parents first)."""
        children: dict[int, list[int]] = {}
        for v, p in enumerate(self.parent):
            if p is not None:
                if not 0 <= p < self.m:
                    raise NetworkError(f"parent index {p} out of range")
                children.setdefault(p, []).append(v)
        out, stack = [], [self.parent.index(None)]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(children.get(v, [])))
        if len(out) != self.m:
            raise NetworkError("parent links contain a cycle")
        return out

    def skeleton(self) -> frozenset[Edge]:
        """Undirected edge set of the true structure."""
        return frozenset((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if p is not None)

    def joint(self) -> np.ndarray:
        """Exact probability of every yes/no assignment, shape (2,)*m, index 1 = yes."""
        grid = np.array(np.meshgrid(*[[0, 1]] * self.m, indexing="ij")).reshape(self.m, -1).T
        prob = np.ones(len(grid))
        for v in range(self.m):
            p_yes, p_no = self.cpt[v]
            if self.parent[v] is None:
                py = np.full(len(grid), p_yes)
            else:
                py = np.where(grid[:, self.parent[v]] == 1, p_yes, p_no)
            prob *= np.where(grid[:, v] == 1, py, 1.0 - py)
        return prob.reshape((2,) * self.m)


def load_network(spec) -> BayesNet:
    """Build a network from a JSON path, JSON text or an already parsed mapping."""
    if isinstance(spec, (str, Path)) and not str(spec).lstrip().startswith("{"):
        with open(spec, encoding="utf-8") as fh:
            spec = json.load(fh)
    elif isinstance(spec, str):
        spec = json.loads(spec)
    try:
        rows = spec["variables"]
        names = [r["name"] for r in rows]
        pos = {n: k for k, n in enumerate(names)}
        parent = []
        for r in rows:
            if r["parent"] is None:
                parent.append(None)
            elif r["parent"] not in pos:
                raise NetworkError(f"unknown parent {r['parent']!r}")
            else:
                parent.append(pos[r["parent"]])
        cpt = [(r["p_yes_given_parent_yes"], r.get("p_yes_given_parent_no")) for r in rows]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network spec: {exc}") from None
    return BayesNet(tuple(names), tuple(parent), tuple(cpt))


def default_network() -> BayesNet:
    text = resources.files("idmtree").joinpath("resources/environment_network.json").read_text("utf-8")
    return load_network(json.loads(text))


def sample(bn: BayesNet, n: int, seed: int) -> Dataset:
    """Ancestral sample of ``n`` rows with labels 'yes'/'no'.

    The first k rows of a sample of size n equal the sample of size k for
    the same seed, so growing sample sizes read one stream.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    draws = np.random.Generator(np.random.PCG64(seed)).random((n, bn.m))
    yes = np.zeros((n, bn.m), dtype=bool)
    for v in bn.order():
        p_yes, p_no = bn.cpt[v]
        p = p_yes if bn.parent[v] is None else np.where(yes[:, bn.parent[v]], p_yes, p_no)
        yes[:, v] = draws[:, v] < p
    labels = np.where(yes, "yes", "no").tolist()
    return Dataset.from_labels(bn.names, labels)


def score(edges, truth) -> tuple[float, float]:
    """(precision, recall) of an undirected edge set; precision of nothing is 1."""
    edges = {(min(e), max(e)) for e in edges}
    hit = len(edges & set(truth))
    precision = hit / len(edges) if edges else 1.0
    recall = hit / len(truth) if truth else 1.0
    return precision, recall


@dataclass(frozen=True)
class CellResult:
    seed: int
    size: int
    strong: tuple[Edge, ...]
    chow_liu: tuple[Edge, ...]
    strong_precision: float
    strong_recall: float
    chow_liu_precision: float
    chow_liu_recall: float


@dataclass
class ExperimentReport:
    nodes: list[str]
    truth: list[Edge]
    sizes: list[int]
    seeds: list[int]
    params: dict
    cells: list[CellResult] = field(default_factory=list)

    def mean(self, size: int, metric: str) -> float:
        vals = [getattr(c, metric) for c in self.cells if c.size == size]
        return float(np.mean(vals))

    def summary(self) -> list[dict]:
        metrics = ("strong_precision", "strong_recall", "chow_liu_precision", "chow_liu_recall")
        return [{"size": n, **{k: self.mean(n, k) for k in metrics}} for n in self.sizes]

    def to_json(self) -> str:
        doc = {
            "nodes": self.nodes,
            "truth": [list(e) for e in self.truth],
            "sizes": self.sizes,
            "seeds": self.seeds,
            "params": self.params,
            "cells": [
                {
                    "seed": c.seed, "size": c.size,
                    "strong": [list(e) for e in c.strong],
                    "chow_liu": [list(e) for e in c.chow_liu],
                    "strong_precision": c.strong_precision, "strong_recall": c.strong_recall,
                    "chow_liu_precision": c.chow_liu_precision, "chow_liu_recall": c.chow_liu_recall,
                }
                for c in self.cells
            ],
            "summary": self.summary(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        head = f"{'n':>6} {'strong P':>9} {'strong R':>9} {'C-L P':>9} {'C-L R':>9}"
        lines = [f"seeds: {len(self.seeds)}  s={self.params['s']}  tstar={self.params['tstar']}", head]
        for row in self.summary():
            lines.append(f"{row['size']:>6} {row['strong_precision']:>9.3f} {row['strong_recall']:>9.3f} "
                         f"{row['chow_liu_precision']:>9.3f} {row['chow_liu_recall']:>9.3f}")
        return "\n".join(lines) + "\n"


def _run_seed(bn: BayesNet, sizes: Sequence[int], seed: int, cfg: IdmConfig) -> list[CellResult]:
    truth = bn.skeleton()
    full = sample(bn, max(sizes), seed)
    cells = []
    for size in sizes:
        ds = full.head(size)
        strong = detect_strong_exact(build_graph(ds, cfg))
        tree = chow_liu_tree(ds)
        sp, sr = score(strong.edges, truth)
        cp, cr = score(tree.edges, truth)
        cells.append(CellResult(seed, size, tuple(strong), tuple(tree), sp, sr, cp, cr))
    return cells


def run_experiment(bn: BayesNet, sizes: Sequence[int], seeds: Sequence[int],
                   cfg: IdmConfig = IdmConfig(), workers: int = 1) -> ExperimentReport:
    """Strong-edge and Chow-Liu structures on growing prefixes of each seed's sample.

    Seeds run independently; with ``workers > 1`` they go to a process pool
    and are merged back in seed order, so the report does not depend on
    scheduling.
    """
    sizes, seeds = [int(n) for n in sizes], [int(s) for s in seeds]
    if not sizes or not seeds:
        raise ValueError("need at least one sample size and one seed")
    if min(sizes) < 1:
        raise ValueError("sample sizes must be positive")
    report = ExperimentReport(
        nodes=list(bn.names), truth=sorted(bn.skeleton()), sizes=sizes, seeds=seeds,
        params={"s": cfg.s, "tstar": cfg.tstar_rule},
    )
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_run_seed, [bn] * len(seeds), [sizes] * len(seeds), seeds,
                                   [cfg] * len(seeds)))
    else:
        chunks = [_run_seed(bn, sizes, seed, cfg) for seed in seeds]
    for chunk in chunks:
        report.cells.extend(chunk)
    return report
