"""Registry of public network datasets with a checksum-verified download cache."""

from __future__ import annotations

import hashlib
import io
import os
import re
import shutil
import tempfile
import urllib.error
import urllib.request
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..graph import Graph, GraphError, load_edge_list

CACHE_ENV = "NETEXPAND_CACHE"


class DatasetError(RuntimeError):
    pass


class DownloadError(DatasetError):
    """Transient failure fetching a dataset; retrying may succeed."""

    retriable = True


class IntegrityError(DatasetError):
    """Downloaded or cached bytes do not match the registered checksum."""


@dataclass(frozen=True)
class DatasetSpec:
    """Where a network lives and how to turn the file into a :class:`Graph`.

    ``format`` is ``"edgelist"`` (SNAP style, optionally gzipped) or
    ``"gml"``. ``member`` names the file to read inside a zip archive.
    ``checksum`` is a SHA-256 hex digest of the downloaded file; when it is
    None the cache is trusted as is. With ``largest_component`` set the
    loaded graph is restricted to its largest connected component.
    """

    name: str
    url: str
    format: str = "edgelist"
    checksum: str | None = None
    member: str | None = None
    largest_component: bool = True
    note: str = ""

    @property
    def filename(self) -> str:
        return self.url.rstrip("/").rsplit("/", 1)[-1]


_SNAP = "https://snap.stanford.edu/data/"
_NEWMAN = "https://websites.umich.edu/~mejn/netdata/"

REGISTRY: dict[str, DatasetSpec] = {
    s.name: s
    for s in [
        DatasetSpec("celegans", _NEWMAN + "celegansneural.zip", format="gml", member="celegansneural.gml",
                    note="Watts-Strogatz neural network as redistributed by M. Newman; directed, symmetrized"),
        DatasetSpec("power", _NEWMAN + "power.zip", format="gml", member="power.gml",
                    note="Western US power grid (Watts-Strogatz) as redistributed by M. Newman"),
        DatasetSpec("condmat", _SNAP + "ca-CondMat.txt.gz"),
        DatasetSpec("enron", _SNAP + "email-Enron.txt.gz"),
        DatasetSpec("hepph", _SNAP + "cit-HepPh.txt.gz", note="directed citations, symmetrized"),
        DatasetSpec("gnutella", _SNAP + "p2p-Gnutella31.txt.gz", note="directed, symmetrized"),
        DatasetSpec("epinions", _SNAP + "soc-Epinions1.txt.gz", note="directed trust links, symmetrized"),
        DatasetSpec("slashdot", _SNAP + "soc-Slashdot0902.txt.gz", note="directed, symmetrized"),
        DatasetSpec("netscience", _NEWMAN + "netscience.zip", format="gml", member="netscience.gml",
                    note="network-theory co-authorship; used only for search traces"),
    ]
}


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "netexpand"


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _quarantine(path: Path) -> Path:
    bad = path.with_name(path.name + ".corrupt")
    os.replace(path, bad)
    return bad


def fetch_dataset(spec: DatasetSpec, cache_dir: str | os.PathLike | None = None, timeout: float = 60.0) -> Path:
    """Return a local path to the dataset file, downloading it if needed.

    A cached file is reused without network access when it exists and (if a
    checksum is registered) matches. A mismatching file is renamed with a
    ``.corrupt`` suffix and :class:`IntegrityError` is raised.
    """
    root = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = root / spec.filename
    if path.exists():
        if spec.checksum is None or sha256_file(path) == spec.checksum:
            return path
        bad = _quarantine(path)
        raise IntegrityError(f"cached {path} does not match checksum for {spec.name}; moved to {bad}")

    fd, tmp = tempfile.mkstemp(dir=root, prefix=f".{spec.filename}.", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as out, urllib.request.urlopen(spec.url, timeout=timeout) as resp:
            shutil.copyfileobj(resp, out)
    except (urllib.error.URLError, OSError, TimeoutError) as exc:
        Path(tmp).unlink(missing_ok=True)
        raise DownloadError(f"failed to download {spec.url}: {exc}") from exc
    if spec.checksum is not None and sha256_file(tmp) != spec.checksum:
        bad = _quarantine(Path(tmp).rename(path))
        raise IntegrityError(f"download of {spec.url} does not match checksum; moved to {bad}")
    os.replace(tmp, path)
    return path


_GML_NODE = re.compile(rb"\bnode\s*\[\s*id\s+(-?\d+)")
_GML_EDGE = re.compile(rb"\bedge\s*\[[^\]]*?\bsource\s+(-?\d+)\s+target\s+(-?\d+)", re.S)


def parse_gml(data: bytes, name: str = "") -> Graph:
    """Minimal GML reader: node ids and edge endpoints only, all other attributes ignored.

    Declared nodes keep their order of declaration, so isolated nodes survive.
    """
    ids: dict[int, int] = {}
    for m in _GML_NODE.finditer(data):
        ids.setdefault(int(m.group(1)), len(ids))
    edges = []
    for m in _GML_EDGE.finditer(data):
        a, b = int(m.group(1)), int(m.group(2))
        edges.append((ids.setdefault(a, len(ids)), ids.setdefault(b, len(ids))))
    if not ids:
        raise GraphError("GML document declares no nodes")
    return Graph.from_edges(len(ids), np.array(edges, dtype=np.int64).reshape(-1, 2), name=name)


def read_dataset_file(spec: DatasetSpec, path: str | os.PathLike) -> Graph:
    raw = Path(path).read_bytes()
    if raw[:4] == b"PK\x03\x04":
        with zipfile.ZipFile(io.BytesIO(raw)) as zf:
            member = spec.member or zf.namelist()[0]
            raw = zf.read(member)
    if spec.format == "gml":
        g = parse_gml(raw, name=spec.name)
    elif spec.format == "edgelist":
        g = load_edge_list(raw, name=spec.name)
    else:
        raise DatasetError(f"unknown dataset format {spec.format!r}")
    if spec.largest_component:
        g = g.subgraph(g.largest_component_nodes(), name=spec.name)
    return g


def load_dataset(name: str, cache_dir: str | os.PathLike | None = None) -> Graph:
    try:
        spec = REGISTRY[name]
    except KeyError:
        raise DatasetError(f"unknown dataset {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
    return read_dataset_file(spec, fetch_dataset(spec, cache_dir))
