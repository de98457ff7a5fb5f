"""Expansion of node samples, greedy maximum/minimum expansion, and expansion signatures.

A *sample* is a proper subset ``S`` of the nodes. Its neighborhood ``N(S)``
is the set of nodes outside ``S`` adjacent to some member of ``S``; the
*expansion* is ``|N(S)| / |S|`` and the *expansion quality* is
``|N(S)| / |V - S|``. All ratios are returned as exact ``Fraction`` values.
"""

from __future__ import annotations

import csv
import heapq
import io
import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np

from .graph import Graph


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured combination budget."""


Mode = Literal["max", "min"]

DEFAULT_BUDGET = 2_000_000
DEFAULT_FRACTIONS = tuple(round(0.01 * i, 2) for i in range(1, 51))


def _check_sample(g: Graph, s: Iterable[int]) -> set[int]:
    sample = set(int(v) for v in s)
    if not sample:
        raise ValueError("sample must be nonempty")
    if any(v < 0 or v >= g.node_count for v in sample):
        raise ValueError("sample contains ids outside the graph")
    if len(sample) == g.node_count:
        raise ValueError("sample must be a proper subset of the nodes")
    return sample


def neighborhood(g: Graph, s: Iterable[int]) -> set[int]:
    """``N(S)``: nodes outside ``S`` with at least one neighbor in ``S``."""
    sample = set(s)
    adj = g.adjacency
    out: set[int] = set()
    for v in sample:
        out.update(adj[v])
    return out - sample


def expansion(g: Graph, s: Iterable[int]) -> Fraction:
    sample = _check_sample(g, s)
    return Fraction(len(neighborhood(g, sample)), len(sample))


def expansion_quality(g: Graph, s: Iterable[int]) -> Fraction:
    """``|N(S)| / |V - S|``; equals 1 exactly when ``S`` dominates the graph."""
    sample = _check_sample(g, s)
    return Fraction(len(neighborhood(g, sample)), g.node_count - len(sample))


class FrontierState:
    """Sample ``S`` with its neighborhood and coverage ``N(S) ∪ S`` kept up to date.

    With ``track_gains`` enabled, ``gain[v]`` holds ``|N({v}) - (N(S) ∪ S)|``
    for every node, i.e. how many not-yet-covered neighbors ``v`` has. Each
    newly covered node decrements the gain of its neighbors, so maintaining
    the whole array costs O(|E|) over any insertion sequence.
    """

    def __init__(self, g: Graph, track_gains: bool = True):
        self.graph = g
        self.adj = g.adjacency
        n = g.node_count
        self.order: list[int] = []
        self.in_sample = bytearray(n)
        self.is_covered = bytearray(n)
        self.covered_count = 0
        self.gain: list[int] | None = g.degrees.tolist() if track_gains else None

    def __len__(self) -> int:
        return len(self.order)

    @property
    def sample(self) -> set[int]:
        return set(self.order)

    @property
    def covered(self) -> set[int]:
        return {v for v, c in enumerate(self.is_covered) if c}

    @property
    def neighborhood(self) -> set[int]:
        return {v for v, c in enumerate(self.is_covered) if c and not self.in_sample[v]}

    @property
    def neighborhood_count(self) -> int:
        return self.covered_count - len(self.order)

    def _cover(self, u: int, fresh: list[int]) -> None:
        self.is_covered[u] = 1
        self.covered_count += 1
        fresh.append(u)
        gain = self.gain
        if gain is not None:
            for w in self.adj[u]:
                gain[w] -= 1

    def add(self, v: int) -> list[int]:
        """Insert ``v`` into the sample and return the nodes it newly covers."""
        if self.in_sample[v]:
            raise ValueError(f"node {v} already in sample")
        self.in_sample[v] = 1
        self.order.append(v)
        fresh: list[int] = []
        if not self.is_covered[v]:
            self._cover(v, fresh)
        covered = self.is_covered
        for w in self.adj[v]:
            if not covered[w]:
                self._cover(w, fresh)
        return fresh

    def expansion(self) -> Fraction:
        return Fraction(self.neighborhood_count, len(self.order))

    def quality(self) -> Fraction:
        return Fraction(self.neighborhood_count, self.graph.node_count - len(self.order))


@dataclass
class GreedyRun:
    """Result of one greedy pass.

    ``order`` lists the chosen nodes in selection order and
    ``neighborhood_sizes[i]`` is ``|N(S)|`` for the first ``i + 1`` of them,
    so a single pass answers every prefix size.
    """

    graph_size: int
    mode: Mode
    order: list[int]
    neighborhood_sizes: np.ndarray

    @property
    def sample(self) -> set[int]:
        return set(self.order)

    def covered_sizes(self) -> np.ndarray:
        return self.neighborhood_sizes + np.arange(1, len(self.order) + 1)

    def expansion(self, k: int) -> Fraction:
        return Fraction(int(self.neighborhood_sizes[k - 1]), k)

    def quality(self, k: int) -> Fraction:
        return Fraction(int(self.neighborhood_sizes[k - 1]), self.graph_size - k)

    @property
    def trajectory(self) -> list[tuple[int, Fraction, Fraction]]:
        return [(k, self.expansion(k), self.quality(k)) for k in range(1, len(self.order) + 1)]


def greedy_apx(
    g: Graph,
    k: int,
    mode: Mode = "max",
    tie_break: Literal["lowest", "random"] = "lowest",
    seed: int | None = None,
) -> GreedyRun:
    """Grow a sample of exactly ``k`` nodes by greedy marginal neighborhood gain.

    Each step adds the node outside ``S`` whose count of uncovered neighbors
    ``|N({v}) - (N(S) ∪ S)|`` is largest (``mode="max"``) or smallest
    (``mode="min"``). With ``S`` empty that count is the degree, so the first
    pick is the max-degree (resp. min-degree) node. Ties go to the lowest id,
    or to a seeded random priority with ``tie_break="random"``.

    For ``mode="max"`` the covered set ``N(S) ∪ S`` is within ``1 - 1/e`` of
    the best achievable by any ``k`` nodes.
    """
    n = g.node_count
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < {n}, got {k}")
    if mode not in ("max", "min"):
        raise ValueError(f"unknown mode {mode!r}")
    if tie_break == "random":
        prio = np.random.default_rng(seed).permutation(n).tolist()
    elif tie_break == "lowest":
        prio = list(range(n))
    else:
        raise ValueError(f"unknown tie_break {tie_break!r}")

    sign = -1 if mode == "max" else 1
    state = FrontierState(g)
    gain = state.gain
    assert gain is not None
    adj = g.adjacency
    in_sample = state.in_sample
    covered = state.is_covered

    def key(v: int) -> tuple[int, int, int, int]:
        # second slot: on equal gain, max mode prefers nodes that are still
        # uncovered themselves (keeps quality non-decreasing), min mode the reverse
        return (sign * gain[v], -sign * covered[v], prio[v], v)

    heap = [key(v) for v in range(n)]
    heapq.heapify(heap)
    sizes = np.empty(k, dtype=np.int64)
    touched: set[int] = set()
    for i in range(k):
        # entries are re-pushed whenever a key changes; stale ones are skipped
        while True:
            entry = heapq.heappop(heap)
            v = entry[3]
            if not in_sample[v] and entry == key(v):
                break
        fresh = state.add(v)
        touched.clear()
        touched.update(fresh)
        for u in fresh:
            touched.update(adj[u])
        for w in touched:
            if not in_sample[w]:
                heapq.heappush(heap, key(w))
        sizes[i] = state.neighborhood_count
    return GreedyRun(graph_size=n, mode=mode, order=state.order, neighborhood_sizes=sizes)


def brute_force_max_expansion(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> tuple[set[int], Fraction]:
    """Exact maximum-expansion sample of size ``k`` by exhaustive enumeration.

    Ties resolve to the lexicographically smallest sample. Refuses with
    :class:`BudgetExceeded` when C(n, k) exceeds ``budget``.
    """
    n = g.node_count
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < {n}, got {k}")
    count = math.comb(n, k)
    if count > budget:
        raise BudgetExceeded(f"C({n}, {k}) = {count} combinations exceeds budget {budget}")
    masks = [sum(1 << w for w in nbrs) for nbrs in g.adjacency]
    best_size, best = -1, ()
    for combo in itertools.combinations(range(n), k):
        union = 0
        smask = 0
        for v in combo:
            union |= masks[v]
            smask |= 1 << v
        size = (union & ~smask).bit_count()
        if size > best_size:
            best_size, best = size, combo
    return set(best), Fraction(best_size, k)


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class SignaturePoint:
    k: int
    fraction: float
    max_expansion: Fraction
    max_quality: Fraction
    min_expansion: Fraction
    min_quality: Fraction


@dataclass
class ExpansionSignature:
    graph_id: str
    node_count: int
    points: list[SignaturePoint] = field(default_factory=list)

    def saturation_fraction(self) -> float | None:
        """Smallest sample fraction whose greedy-max sample dominates the graph."""
        for p in self.points:
            if p.max_quality == 1:
                return p.fraction
        return None

    def to_csv(self, dest: str | os.PathLike | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "fraction", "max_expansion", "max_quality", "min_expansion", "min_quality"])
        for p in self.points:
            w.writerow([p.k, f"{p.fraction:.6f}", f"{float(p.max_expansion):.6f}", f"{float(p.max_quality):.6f}",
                        f"{float(p.min_expansion):.6f}", f"{float(p.min_quality):.6f}"])
        text = buf.getvalue()
        if dest is not None:
            with open(dest, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
        return text


def sample_sizes(n: int, fractions: Sequence[float]) -> list[int]:
    """Map fractions to distinct sample sizes ``ceil(f * n)`` clipped to ``[1, n - 1]``."""
    ks: list[int] = []
    for f in fractions:
        k = min(max(1, math.ceil(round(f * n, 9))), n - 1)
        if not ks or k > ks[-1]:
            ks.append(k)
    return ks


def build_signature(g: Graph, fractions: Sequence[float] = DEFAULT_FRACTIONS, graph_id: str | None = None) -> ExpansionSignature:
    """Greedy max/min expansion quality at each requested sample-size fraction.

    One greedy-max and one greedy-min pass up to the largest size serve all
    points.
    """
    if not fractions:
        raise ValueError("fractions must be nonempty")
    if any(not 0 < f < 1 for f in fractions):
        raise ValueError("fractions must lie strictly between 0 and 1")
    if list(fractions) != sorted(fractions):
        raise ValueError("fractions must be sorted ascending")
    n = g.node_count
    if n < 2:
        raise ValueError("graph needs at least two nodes")
    ks = sample_sizes(n, fractions)
    hi = greedy_apx(g, ks[-1], "max")
    lo = greedy_apx(g, ks[-1], "min")
    sig = ExpansionSignature(graph_id=graph_id if graph_id is not None else g.name, node_count=n)
    for k in ks:
        sig.points.append(SignaturePoint(
            k=k,
            fraction=k / n,
            max_expansion=hi.expansion(k),
            max_quality=hi.quality(k),
            min_expansion=lo.expansion(k),
            min_quality=lo.quality(k),
        ))
    return sig
