"""Immutable undirected graphs, edge-list I/O, random generators and summary statistics."""

from __future__ import annotations

import gzip
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class GraphError(ValueError):
    """Invalid graph construction arguments or a broken graph invariant."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: cannot parse {line.strip()!r} as an integer node pair")
        self.lineno = lineno


class Graph:
    """Undirected simple graph over dense node ids ``0..n-1``.

    Stored in CSR form: the neighbors of ``v`` are
    ``indices[indptr[v]:indptr[v + 1]]``, sorted ascending. Instances are
    treated as immutable; the arrays are flagged read-only.
    """

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, name: str = ""):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.name = name

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray, name: str = "") -> Graph:
        """Build a graph on ``n`` nodes, symmetrizing and dropping loops/duplicates."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError(f"edge endpoint outside [0, {n})")
        arr = arr[arr[:, 0] != arr[:, 1]]
        both = np.concatenate([arr, arr[:, ::-1]])
        keys = np.unique(both[:, 0] * n + both[:, 1])
        src, dst = np.divmod(keys, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst, name=name)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def __len__(self) -> int:
        return self.node_count

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Graph({label}n={self.node_count}, m={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(self.indices, other.indices)

    __hash__ = None  # type: ignore[assignment]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def degree_list(self) -> list[int]:
        return self.degrees.tolist()

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists, for per-element loops."""
        flat = self.indices.tolist()
        bounds = self.indptr.tolist()
        return [flat[bounds[v]:bounds[v + 1]] for v in range(self.node_count)]

    def edges(self) -> np.ndarray:
        """Each undirected edge once as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        src = np.repeat(np.arange(self.node_count), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def to_scipy(self) -> sparse.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        n = self.node_count
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    @cached_property
    def component_labels(self) -> np.ndarray:
        _, labels = csgraph.connected_components(self.to_scipy(), directed=False)
        return labels

    @cached_property
    def component_sizes(self) -> np.ndarray:
        return np.bincount(self.component_labels)

    def largest_component_nodes(self) -> np.ndarray:
        """Sorted node ids of the largest connected component (lowest label on ties)."""
        if self.node_count == 0:
            return np.empty(0, dtype=np.int64)
        biggest = int(np.argmax(self.component_sizes))
        return np.flatnonzero(self.component_labels == biggest)

    def subgraph(self, nodes: Iterable[int], name: str | None = None) -> Graph:
        """Induced subgraph, relabelled densely in ascending order of the original ids."""
        keep = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes, dtype=np.int64))
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        e = self.edges()
        e = remap[e]
        e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
        return Graph.from_edges(len(keep), e, name=self.name if name is None else name)


def validate(g: Graph) -> None:
    """Raise :class:`GraphError` unless ``g`` is a symmetric simple graph on dense ids."""
    n = g.node_count
    if g.indptr[0] != 0 or np.any(np.diff(g.indptr) < 0) or g.indptr[-1] != len(g.indices):
        raise GraphError("malformed indptr")
    if len(g.indices) % 2:
        raise GraphError("odd number of adjacency entries")
    if len(g.indices) and (g.indices.min() < 0 or g.indices.max() >= n):
        raise GraphError("neighbor id out of range")
    src = np.repeat(np.arange(n), g.degrees)
    if np.any(src == g.indices):
        raise GraphError("self-loop present")
    # strictly increasing within each row: no duplicates, sorted
    same_row = src[1:] == src[:-1]
    if np.any(g.indices[1:][same_row] <= g.indices[:-1][same_row]):
        raise GraphError("adjacency list not strictly sorted")
    fwd = src * n + g.indices
    rev = np.sort(g.indices * n + src)
    if not np.array_equal(fwd, rev):
        raise GraphError("adjacency is not symmetric")
    if g.edge_count * 2 != int(g.degrees.sum()):
        raise GraphError("edge_count disagrees with degree sum")


# ---------------------------------------------------------------- edge lists

def _read_bytes(source: str | os.PathLike | IO[bytes] | bytes) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data


def load_edge_list(source: str | os.PathLike | IO[bytes] | bytes, name: str = "") -> Graph:
    """Read a SNAP-style whitespace-separated edge list.

    Lines starting with ``#`` (or ``%``) are comments. Node ids are remapped
    densely in order of first appearance, every edge is symmetrized, and
    self-loops and duplicate edges are dropped. Gzip input is detected from
    its magic bytes. Extra columns after the node pair are ignored.
    """
    data = _read_bytes(source)
    ids: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped[:1] in (b"#", b"%"):
            continue
        parts = stripped.split()
        try:
            a, b = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise EdgeListParseError(lineno, raw.decode("ascii", errors="replace")) from None
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        edges.append((u, v))
    if not ids:
        raise GraphError("edge list is empty")
    return Graph.from_edges(len(ids), np.array(edges, dtype=np.int64), name=name)


def write_edge_list(g: Graph, dest: str | os.PathLike | IO[str]) -> None:
    """Write each edge once as ``u v`` with ``u < v``, lexicographically sorted."""
    text = "".join(f"{u} {v}\n" for u, v in g.edges().tolist())
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        dest.write(text)


# ---------------------------------------------------------------- generators

def _pair_from_index(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the row-major index of the pair ``(i, j)``, ``i < j``, among C(n, 2) pairs."""
    k = k.astype(np.int64)
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * k)) / 2).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    # guard floating error at row boundaries
    over = start > k
    i[over] -= 1
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    under = nxt <= k
    i[under] += 1
    start = i * n - i * (i + 1) // 2
    j = k - start + i + 1
    return i, j


def generate_er(n: int, p: float, seed: int | np.random.Generator | None = None) -> Graph:
    """Erdős–Rényi G(n, p): every pair is an edge independently with probability ``p``.

    Pairs are enumerated in row-major order and selected with geometric skips,
    so the cost is proportional to the number of edges rather than n².
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    name = f"er:n={n},p={p}"
    if p == 0.0 or total == 0:
        return Graph.from_edges(n, np.empty((0, 2), dtype=np.int64), name=name)
    chunks = []
    pos = -1
    batch = max(1024, int(total * p * 1.1) + 64)
    while pos < total:
        # clip so tiny p cannot overflow the running sum
        gaps = np.minimum(rng.geometric(p, size=batch), total + 1)
        steps = pos + np.cumsum(gaps)
        chunks.append(steps[steps < total])
        pos = int(steps[-1])
    picked = np.concatenate(chunks)
    i, j = _pair_from_index(picked, n)
    return Graph.from_edges(n, np.column_stack([i, j]), name=name)


def generate_ba(n: int, m: int, seed: int | np.random.Generator | None = None) -> Graph:
    """Barabási–Albert preferential attachment.

    Growth starts from a clique on ``m + 1`` nodes. Each later node links to
    ``m`` distinct earlier nodes drawn with probability proportional to their
    current degree; duplicate draws are rejected and redrawn.
    """
    if m < 1 or n <= m:
        raise GraphError(f"need n > m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    # each node appears once per incident edge end
    ends: list[int] = [x for e in edges for x in e]
    # draw in blocks to amortize generator overhead
    pool = rng.random(4096).tolist()
    cursor = 0
    for new in range(m + 1, n):
        chosen: list[int] = []
        while len(chosen) < m:
            if cursor == len(pool):
                pool = rng.random(4096).tolist()
                cursor = 0
            t = ends[int(pool[cursor] * len(ends))]
            cursor += 1
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            edges.append((t, new))
            ends.append(t)
            ends.append(new)
    return Graph.from_edges(n, np.array(edges, dtype=np.int64), name=f"ba:n={n},m={m}")


def complete_graph(n: int) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2), name=f"complete:n={n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, np.array([(i, i + 1) for i in range(n - 1)], dtype=np.int64).reshape(-1, 2),
                            name=f"path:n={n}")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, np.array([(i, (i + 1) % n) for i in range(n)], dtype=np.int64), name=f"cycle:n={n}")


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and leaves ``1..leaves``."""
    return Graph.from_edges(leaves + 1, np.array([(0, i) for i in range(1, leaves + 1)], dtype=np.int64),
                            name=f"star:leaves={leaves}")


# ---------------------------------------------------------------- statistics

@dataclass(frozen=True)
class GraphStats:
    n: int
    edges: int
    density: float
    avg_degree: float
    clustering_coefficient: float
    characteristic_path_length: float


def local_clustering(g: Graph, chunk: int = 2048) -> np.ndarray:
    """Local clustering coefficient per node; 0 for nodes of degree below 2."""
    a = g.to_scipy().astype(np.int64)
    tri = np.zeros(g.node_count)
    for lo in range(0, g.node_count, chunk):
        rows = a[lo:lo + chunk]
        # closed 2-paths from each row back into its own neighborhood
        tri[lo:lo + chunk] = np.asarray((rows @ a).multiply(rows).sum(axis=1)).ravel() / 2
    deg = g.degrees.astype(float)
    pairs = deg * (deg - 1) / 2
    out = np.zeros(g.node_count)
    np.divide(tri, pairs, out=out, where=deg >= 2)
    return out


def characteristic_path_length(g: Graph, samples: int, seed: int | np.random.Generator | None = None) -> float:
    """Mean BFS distance from sampled sources to every other node of the largest component.

    If ``samples`` covers the whole component, all nodes are used and the
    value is exact.
    """
    lcc = g.largest_component_nodes()
    if len(lcc) < 2:
        return 0.0
    sub = g.subgraph(lcc)
    if samples >= len(lcc):
        sources = np.arange(len(lcc))
    else:
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(len(lcc), size=samples, replace=False))
    mat = sub.to_scipy()
    total = 0.0
    for lo in range(0, len(sources), 64):
        dist = csgraph.shortest_path(mat, method="D", unweighted=True, indices=sources[lo:lo + 64])
        total += float(dist.sum())
    return total / (len(sources) * (len(lcc) - 1))


def compute_stats(g: Graph, path_length_sample: int = 100, seed: int | np.random.Generator | None = 0) -> GraphStats:
    if g.node_count == 0:
        raise GraphError("graph is empty")
    if path_length_sample < 1:
        raise GraphError("path_length_sample must be >= 1")
    n, m = g.node_count, g.edge_count
    density = m / math.comb(n, 2) if n > 1 else 0.0
    return GraphStats(
        n=n,
        edges=m,
        density=density,
        avg_degree=2 * m / n,
        clustering_coefficient=float(local_clustering(g).mean()),
        characteristic_path_length=characteristic_path_length(g, path_length_sample, seed),
    )
