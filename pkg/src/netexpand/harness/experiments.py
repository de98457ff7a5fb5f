"""Experiment drivers: statistics tables, signatures, steps-to-coverage tables, greedy vs XS curves."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .. import __version__
from ..expansion import ExpansionSignature, build_signature, greedy_apx
from ..graph import Graph, GraphStats, complete_graph, compute_stats, generate_ba, generate_er, load_edge_list
from ..search import STRATEGIES, normalize_strategy, run_search, steps_to_coverage
from .datasets import load_dataset

DEFAULT_TARGETS = (0.20, 0.35, 0.50)
DEFAULT_TRIALS = 30
DEFAULT_SEED = 42


def parse_generator(text: str, seed: int = DEFAULT_SEED) -> Graph:
    """Build a graph from inline syntax: ``er:n=..,p=..``, ``ba:n=..,m=..`` or ``complete:n=..``.

    An explicit ``seed=..`` parameter overrides ``seed``.
    """
    kind, _, rest = text.partition(":")
    params: dict[str, str] = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {item!r} in {text!r}")
        params[key.strip()] = value.strip()
    s = int(params.pop("seed", seed))
    try:
        if kind == "er":
            g = generate_er(int(params.pop("n")), float(params.pop("p")), seed=s)
        elif kind == "ba":
            g = generate_ba(int(params.pop("n")), int(params.pop("m")), seed=s)
        elif kind == "complete":
            g = complete_graph(int(params.pop("n")))
        else:
            raise ValueError(f"unknown generator {kind!r}")
    except KeyError as exc:
        raise ValueError(f"generator {text!r} is missing parameter {exc.args[0]!r}") from None
    if params:
        raise ValueError(f"unused generator parameters {sorted(params)} in {text!r}")
    g.name = text
    return g


def resolve_network(spec: str, seed: int = DEFAULT_SEED, cache_dir: str | os.PathLike | None = None) -> Graph:
    """Registered dataset name, ``file:<path>`` edge list, or inline generator."""
    if spec.startswith("file:"):
        path = spec[5:]
        return load_edge_list(path, name=os.path.basename(path))
    if ":" in spec:
        return parse_generator(spec, seed)
    return load_dataset(spec, cache_dir)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _write(text: str, dest: str | os.PathLike | None) -> str:
    if dest is not None:
        with open(dest, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text


def write_sidecar(dest: str | os.PathLike, **meta) -> None:
    """JSON run metadata next to a CSV output (``<dest>.json``)."""
    meta = {"version": __version__, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"), **meta}
    with open(f"{dest}.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)


# ---------------------------------------------------------------- stats

STATS_HEADER = ["network", "N", "E", "D", "PL", "CC", "AD"]


def stats_csv(rows: Sequence[tuple[str, GraphStats]], dest: str | os.PathLike | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_HEADER)
    for name, s in rows:
        w.writerow([name, s.n, s.edges, _fmt(s.density), _fmt(s.characteristic_path_length),
                    _fmt(s.clustering_coefficient), _fmt(s.avg_degree)])
    return _write(buf.getvalue(), dest)


# ---------------------------------------------------------------- signature

def signature_for(g: Graph, fractions: Sequence[float] | None = None) -> ExpansionSignature:
    return build_signature(g, fractions) if fractions else build_signature(g)


# ---------------------------------------------------------------- search table

@dataclass
class Cell:
    network: str
    strategy: str
    target: float
    mean_steps: float
    stderr: float
    trials: int
    unreached_count: int


@dataclass
class ExperimentReport:
    cells: list[Cell] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    HEADER = ("network", "strategy", "target", "mean_steps", "stderr", "trials", "unreached_count")

    def cell(self, network: str, strategy: str, target: float) -> Cell:
        for c in self.cells:
            if c.network == network and c.strategy == strategy and math.isclose(c.target, target):
                return c
        raise KeyError((network, strategy, target))

    def to_csv(self, dest: str | os.PathLike | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        for c in self.cells:
            w.writerow([c.network, c.strategy, f"{c.target:.2f}", _fmt(c.mean_steps), _fmt(c.stderr),
                        c.trials, c.unreached_count])
        return _write(buf.getvalue(), dest)

    def to_json(self) -> dict:
        return {"cells": [asdict(c) for c in self.cells], "failures": self.failures, "metadata": self.metadata}


def trial_source(g: Graph, seed: int, trial: int, nodes: np.ndarray | None = None) -> int:
    """Source node of one trial: uniform over the largest component, shared by all strategies."""
    pool = g.largest_component_nodes() if nodes is None else nodes
    return int(np.random.default_rng(np.random.SeedSequence([seed, trial])).choice(pool))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial, 1]))


def _one_trial(args) -> tuple[int, str, list[int | None]]:
    g, strategy, trial, seed, source, targets = args
    trace = run_search(g, strategy, source, target=max(targets), seed=trial_rng(seed, trial))
    return trial, strategy, [steps_to_coverage(trace, t) for t in targets]


def search_table_for_graph(
    g: Graph,
    network: str,
    strategies: Sequence[str] = STRATEGIES,
    targets: Sequence[float] = DEFAULT_TARGETS,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> list[Cell]:
    """Mean and standard error of steps-to-coverage for each strategy and target.

    Trial ``t`` starts every strategy from the same source. One run per
    (strategy, trial) goes to the largest target; smaller targets are read
    off its trace. Trials that never reach a target are counted in
    ``unreached_count`` and left out of the mean.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    strategies = [normalize_strategy(s) for s in strategies]
    targets = list(targets)
    lcc = g.largest_component_nodes()
    jobs = [(g, s, t, seed, trial_source(g, seed, t, lcc), targets) for t in range(trials) for s in strategies]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_one_trial(j) for j in jobs]
    results.sort(key=lambda r: (r[0], strategies.index(r[1])))

    cells = []
    for s in strategies:
        per_target = [[r[2][i] for r in results if r[1] == s] for i in range(len(targets))]
        for target, values in zip(targets, per_target):
            reached = np.array([v for v in values if v is not None], dtype=float)
            mean = float(reached.mean()) if len(reached) else float("nan")
            se = float(reached.std(ddof=1) / math.sqrt(len(reached))) if len(reached) > 1 else 0.0
            cells.append(Cell(network, s, target, mean, se, trials, len(values) - len(reached)))
    return cells


def search_table(
    networks: Sequence[str],
    strategies: Sequence[str] = STRATEGIES,
    targets: Sequence[float] = DEFAULT_TARGETS,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    cache_dir: str | os.PathLike | None = None,
    workers: int = 1,
) -> ExperimentReport:
    report = ExperimentReport(metadata={
        "version": __version__, "seed": seed, "trials": trials,
        "strategies": list(strategies), "targets": list(targets), "networks": list(networks),
    })
    for net in networks:
        try:
            g = resolve_network(net, seed, cache_dir)
        except Exception as exc:  # noqa: BLE001 - one bad network must not sink the others
            report.failures[net] = f"{type(exc).__name__}: {exc}"
            continue
        report.cells.extend(search_table_for_graph(g, net, strategies, targets, trials, seed, workers))
    return report


# ---------------------------------------------------------------- greedy vs XS

@dataclass
class CoverageComparison:
    network: str
    greedy: np.ndarray
    xs_mean: np.ndarray

    def to_csv(self, dest: str | os.PathLike | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "greedy_coverage", "xs_coverage"])
        for i, (a, b) in enumerate(zip(self.greedy, self.xs_mean), start=1):
            w.writerow([i, _fmt(a), _fmt(b)])
        return _write(buf.getvalue(), dest)


def greedy_vs_xs(g: Graph, network: str = "", steps: int = 1000, trials: int = DEFAULT_TRIALS,
                 seed: int = DEFAULT_SEED) -> CoverageComparison:
    """Coverage ``|N(S) ∪ S| / |V|`` of the greedy sample of size ``i`` next to mean XS coverage after ``i`` steps."""
    n = g.node_count
    k = min(steps, n - 1)
    run = greedy_apx(g, k, "max")
    greedy = run.covered_sizes() / n
    if k < steps:
        greedy = np.concatenate([greedy, np.full(steps - k, greedy[-1])])
    lcc = g.largest_component_nodes()
    xs = np.zeros(steps)
    for t in range(trials):
        trace = run_search(g, "XS", trial_source(g, seed, t, lcc), target=None, max_steps=steps,
                           seed=trial_rng(seed, t))
        cov = np.asarray(trace.covered, dtype=float)
        if len(cov) < steps:
            cov = np.concatenate([cov, np.full(steps - len(cov), trace.final_coverage * n)])
        xs += cov / n
    return CoverageComparison(network or g.name, greedy, xs / trials)
