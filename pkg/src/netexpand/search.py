"""Decentralized search simulation: expansion, degree, random-walk and BFS query forwarding.

Every strategy starts with the query at a single source node. A *step* is
one hop of one copy of the query. Progress is measured by coverage: the
visited nodes plus their neighbors, ``N(S) ∪ S``.

The single-copy strategies (XS, DS, RW) never move to a visited node while
the current holder has an unvisited neighbor. When every neighbor is already
visited, the query hops to one of them chosen uniformly at random; such hops
cost a step but discover nothing.
"""

from __future__ import annotations

import csv
import io
import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expansion import FrontierState
from .graph import Graph

STRATEGIES = ("XS", "DS", "RW", "BFS")


class SearchError(RuntimeError):
    pass


class DeadEndError(SearchError):
    """The query holder has no neighbors at all."""


class ExhaustedError(SearchError):
    """BFS has no holder left with an undelivered neighbor."""


def coverage_threshold(fraction: float, n: int) -> int:
    """Smallest covered-node count reaching ``fraction`` of ``n`` nodes."""
    return max(0, math.ceil(round(fraction * n, 9)))


class SearchState:
    """Mutable state of one search run.

    ``cover`` holds the visited set ``S`` (in visit order) together with the
    coverage ``N(S) ∪ S``. ``current`` is the holder for single-copy
    strategies; ``frontier`` is the FIFO queue of BFS holders.
    """

    def __init__(self, g: Graph, source: int, rng: np.random.Generator | int | None = None,
                 track_gains: bool = True):
        if not 0 <= source < g.node_count:
            raise ValueError(f"source {source} not in graph")
        self.graph = g
        self.adj = g.adjacency
        self.rng = np.random.default_rng(rng)
        self.cover = FrontierState(g, track_gains=track_gains)
        self.cover.add(source)
        self.source = source
        self.current = source
        self.frontier: deque[int] = deque([source])
        self._cursor = 0
        self.steps = 0

    @property
    def visited(self) -> list[int]:
        return self.cover.order

    @property
    def visited_count(self) -> int:
        return len(self.cover.order)

    @property
    def covered_count(self) -> int:
        return self.cover.covered_count

    def _pick(self, items: list[int]) -> int:
        if len(items) == 1:
            return items[0]
        return items[int(self.rng.integers(len(items)))]


def _single_copy_step(st: SearchState, choose: Callable[[SearchState, list[int]], list[int]]) -> SearchState:
    nbrs = st.adj[st.current]
    if not nbrs:
        raise DeadEndError(f"node {st.current} has no neighbors")
    in_sample = st.cover.in_sample
    fresh = [v for v in nbrs if not in_sample[v]]
    if fresh:
        v = st._pick(choose(st, fresh))
        st.cover.add(v)
    else:
        v = st._pick(nbrs)
    st.current = v
    st.steps += 1
    return st


def _best(candidates: list[int], score: list[int]) -> list[int]:
    top = max(score[v] for v in candidates)
    return [v for v in candidates if score[v] == top]


def step_xs(g: Graph, st: SearchState) -> SearchState:
    """Hop to the unvisited neighbor with the most not-yet-covered neighbors."""
    if st.cover.gain is None:
        raise ValueError("expansion search needs a state built with track_gains=True")
    return _single_copy_step(st, lambda s, cand: _best(cand, s.cover.gain))


def step_ds(g: Graph, st: SearchState) -> SearchState:
    """Hop to the unvisited neighbor of highest degree."""
    deg = g.degree_list
    return _single_copy_step(st, lambda s, cand: _best(cand, deg))


def step_rw(g: Graph, st: SearchState) -> SearchState:
    """Self-avoiding random walk step."""
    return _single_copy_step(st, lambda s, cand: cand)


def step_bfs(g: Graph, st: SearchState) -> SearchState:
    """Forward one copy of the query.

    The head holder of the FIFO frontier sends the query to its next neighbor
    (ascending id) that has not received it yet. Holders with nothing left to
    send leave the frontier without costing a step.
    """
    adj = st.adj
    received = st.cover.in_sample
    while st.frontier:
        nbrs = adj[st.frontier[0]]
        i = st._cursor
        while i < len(nbrs) and received[nbrs[i]]:
            i += 1
        if i < len(nbrs):
            v = nbrs[i]
            st._cursor = i + 1
            st.cover.add(v)
            st.frontier.append(v)
            st.current = v
            st.steps += 1
            return st
        st.frontier.popleft()
        st._cursor = 0
    raise ExhaustedError("no query holder can forward further")


STEP_FUNCTIONS: dict[str, Callable[[Graph, SearchState], SearchState]] = {
    "XS": step_xs,
    "DS": step_ds,
    "RW": step_rw,
    "BFS": step_bfs,
}


def normalize_strategy(name: str) -> str:
    key = name.upper()
    if key not in STEP_FUNCTIONS:
        raise ValueError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return key


@dataclass
class SearchTrace:
    """Per-step record of one search run.

    Entry ``i`` of each list describes the state after step ``i + 1``.
    ``initial_covered`` is the coverage before any hop (the source and its
    neighbors).
    """

    strategy: str
    source: int
    node_count: int
    initial_covered: int
    nodes: list[int] = field(default_factory=list)
    visited: list[int] = field(default_factory=list)
    covered: list[int] = field(default_factory=list)
    termination: str = ""

    @property
    def steps(self) -> int:
        return len(self.nodes)

    @property
    def coverage_fraction(self) -> np.ndarray:
        return np.asarray(self.covered, dtype=float) / self.node_count

    @property
    def final_coverage(self) -> float:
        return (self.covered[-1] if self.covered else self.initial_covered) / self.node_count

    def coverage_after(self, steps: int) -> float:
        """Coverage fraction after ``steps`` hops (held constant past the end of the run)."""
        if steps <= 0 or not self.covered:
            return self.initial_covered / self.node_count
        return self.covered[min(steps, len(self.covered)) - 1] / self.node_count

    def to_csv(self, dest: str | os.PathLike | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "node", "visited", "covered", "coverage_fraction"])
        n = self.node_count
        for i, (v, s, c) in enumerate(zip(self.nodes, self.visited, self.covered), start=1):
            w.writerow([i, v, s, c, f"{c / n:.6f}"])
        text = buf.getvalue()
        if dest is not None:
            with open(dest, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
        return text


def run_search(
    g: Graph,
    strategy: str,
    source: int,
    target: float | None = 1.0,
    max_steps: int | None = None,
    seed: int | np.random.Generator | np.random.SeedSequence | None = None,
    target_node: int | None = None,
) -> SearchTrace:
    """Run one search from ``source`` until a stop condition holds.

    Stops when coverage reaches ``target`` (a fraction of all nodes), when
    ``target_node`` is covered, after ``max_steps`` hops, or when coverage can
    no longer grow because the source's whole component is covered (budget-only
    runs keep hopping until the budget is spent or BFS runs dry). The
    reason is recorded in ``SearchTrace.termination``: ``"target"``,
    ``"target_node"``, ``"budget"`` or ``"exhausted"``.
    """
    strategy = normalize_strategy(strategy)
    if target is None and max_steps is None and target_node is None:
        raise ValueError("need a coverage target, a target node or a step budget")
    if target is not None and not 0 < target <= 1:
        raise ValueError("target coverage must lie in (0, 1]")
    if max_steps is not None and max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    n = g.node_count
    rng = np.random.default_rng(seed)
    st = SearchState(g, source, rng, track_gains=strategy == "XS")
    step = STEP_FUNCTIONS[strategy]
    need = coverage_threshold(target, n) if target is not None else n + 1
    reachable = int(g.component_sizes[g.component_labels[source]])
    covered_flags = st.cover.is_covered

    trace = SearchTrace(strategy=strategy, source=source, node_count=n, initial_covered=st.covered_count)
    while True:
        if st.covered_count >= need:
            trace.termination = "target"
            break
        if target_node is not None and covered_flags[target_node]:
            trace.termination = "target_node"
            break
        if max_steps is not None and st.steps >= max_steps:
            trace.termination = "budget"
            break
        if st.covered_count == reachable and (target is not None or target_node is not None):
            trace.termination = "exhausted"
            break
        try:
            step(g, st)
        except (ExhaustedError, DeadEndError):
            trace.termination = "exhausted"
            break
        trace.nodes.append(st.current)
        trace.visited.append(st.visited_count)
        trace.covered.append(st.covered_count)
    return trace


def steps_to_coverage(trace: SearchTrace, fraction: float) -> int | None:
    """First step at which coverage reaches ``fraction``; 0 if the start already does, None if never."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    need = coverage_threshold(fraction, trace.node_count)
    if trace.initial_covered >= need:
        return 0
    for i, c in enumerate(trace.covered, start=1):
        if c >= need:
            return i
    return None
