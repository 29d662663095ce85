"""Command-line interface: ``learn``, ``bounds`` and ``simulate``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .data import DataError, read_csv
from .dominance import CredibleParams
from .experiment import NetworkError, default_network, load_network, run_experiment
from .graph import (
    OracleError,
    build_graph,
    chow_liu_tree,
    detect_strong_approx,
    detect_strong_exact,
    edge_bounds,
    forest_to_dot,
    forest_to_json,
    threshold_forest,
)
from .idm import IdmConfig

PROG = "idmtree"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    dot: Optional[str] = None
    summary: Optional[str] = None
    network: Optional[str] = None
    algorithm: str = "exact"
    s: float = 1.0
    tstar: str = "uniform"
    alpha: Optional[float] = None
    epsilon: Optional[float] = None
    seed: int = 0
    n_seeds: int = 1
    sizes: tuple[int, ...] = (20, 30, 40, 50, 70)
    workers: int = 1

    def validate(self):
        if self.command in ("learn", "bounds") and not self.input:
            raise UsageError(f"{self.command} needs --input")
        if self.s <= 0:
            raise UsageError("--s must be positive")
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise UsageError("--alpha must lie in (0, 1)")
        if self.command == "learn" and self.algorithm == "chowliu" \
                and self.alpha is not None and self.epsilon is None:
            raise UsageError("--alpha only affects chowliu through --epsilon thresholding")
        if self.command == "simulate":
            if self.n_seeds < 1 or not self.sizes or min(self.sizes) < 1:
                raise UsageError("--n-seeds and --sizes must be positive")
            if self.alpha is not None or self.epsilon is not None:
                raise UsageError("simulate does not take --alpha or --epsilon")

    def idm(self) -> IdmConfig:
        return IdmConfig(self.s, self.tstar, self.alpha if self.alpha is not None else 0.95)

    def credible(self) -> Optional[CredibleParams]:
        return None if self.alpha is None else CredibleParams.from_alpha(self.alpha)


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from None


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Robust tree/forest structure learning under the IDM.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def idm_flags(p):
        p.add_argument("--s", type=float, default=1.0, help="IDM prior weight (default 1)")
        p.add_argument("--tstar", choices=["uniform", "empirical"], default="uniform",
                       help="expansion point for the bounds (default uniform)")

    learn = sub.add_parser("learn", help="learn a forest (or Chow-Liu tree) from a CSV file")
    learn.add_argument("--input", "-i", required=True)
    learn.add_argument("--output", "-o", default="-", help="forest JSON (default stdout)")
    learn.add_argument("--dot", help="also write Graphviz DOT here")
    learn.add_argument("--algorithm", choices=["exact", "approx", "chowliu"], default="exact")
    idm_flags(learn)
    learn.add_argument("--alpha", type=float, help="credibility level; enables credible dominance")
    learn.add_argument("--epsilon", type=float, help="drop edges whose upper MI bound is <= epsilon")

    bounds = sub.add_parser("bounds", help="per-pair MI intervals as CSV")
    bounds.add_argument("--input", "-i", required=True)
    bounds.add_argument("--output", "-o", default="-")
    idm_flags(bounds)
    bounds.add_argument("--alpha", type=float, help="also report credible intervals")

    sim = sub.add_parser("simulate", help="strong edges vs Chow-Liu on samples from a network")
    sim.add_argument("--network", help="network spec JSON (default: bundled example network)")
    sim.add_argument("--sizes", type=_sizes, default=(20, 30, 40, 50, 70))
    sim.add_argument("--seed", type=int, default=0, help="first seed")
    sim.add_argument("--n-seeds", type=int, default=1, help="number of consecutive seeds")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--output", "-o", default="-", help="report JSON (default stdout)")
    sim.add_argument("--summary", help="also write a plain-text summary table here")
    idm_flags(sim)
    return parser


def parse(argv: Sequence[str]) -> RunConfig:
    ns = vars(make_parser().parse_args(argv))
    cfg = RunConfig(**{k: v for k, v in ns.items() if k in RunConfig.__dataclass_fields__})
    cfg.validate()
    return cfg


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def learn(cfg: RunConfig) -> None:
    ds = read_csv(cfg.input)
    if ds.m < 2:
        raise DataError("need at least two variables to learn a structure")
    idm, credible = cfg.idm(), cfg.credible()
    bounds = edge_bounds(ds, idm, credible)
    graph = None
    if cfg.algorithm == "chowliu":
        forest = chow_liu_tree(ds)
    else:
        graph = build_graph(ds, idm, credible)
        forest = detect_strong_exact(graph) if cfg.algorithm == "exact" else detect_strong_approx(graph)
    if cfg.epsilon is not None:
        kind = "credible" if credible is not None else "outer"
        forest = threshold_forest(forest, {e: b[kind].hi for e, b in bounds.items()}, cfg.epsilon)
    params = {"s": cfg.s, "tstar": cfg.tstar, "alpha": cfg.alpha, "epsilon": cfg.epsilon}
    _write(cfg.output, forest_to_json(forest, ds.names, algorithm=cfg.algorithm,
                                      bounds=bounds, graph=graph, params=params))
    if cfg.dot:
        _write(cfg.dot, forest_to_dot(forest, ds.names, bounds))


def bounds(cfg: RunConfig) -> None:
    ds = read_csv(cfg.input)
    credible = cfg.credible()
    table = edge_bounds(ds, cfg.idm(), credible)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["source", "target", "outer_lo", "outer_hi", "inner_lo", "inner_hi"]
    if credible is not None:
        header += ["credible_lo", "credible_hi"]
    w.writerow(header)
    for (a, b), row in table.items():
        rec = [ds.names[a], ds.names[b], *row["outer"].as_list(), *row["inner"].as_list()]
        if credible is not None:
            rec += row["credible"].as_list()
        w.writerow([x if isinstance(x, str) else repr(float(x)) for x in rec])
    _write(cfg.output, buf.getvalue())


def simulate(cfg: RunConfig) -> None:
    bn = load_network(cfg.network) if cfg.network else default_network()
    seeds = range(cfg.seed, cfg.seed + cfg.n_seeds)
    report = run_experiment(bn, cfg.sizes, seeds, cfg.idm(), workers=cfg.workers)
    _write(cfg.output, report.to_json())
    if cfg.summary:
        _write(cfg.summary, report.to_text())


COMMANDS = {"learn": learn, "bounds": bounds, "simulate": simulate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse(sys.argv[1:] if argv is None else list(argv))
        COMMANDS[cfg.command](cfg)
    except (UsageError, DataError, NetworkError, OracleError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"{PROG}: error: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
