"""File formats: edge lists, vectors, chain files and the precomputation cache.

Edge list: one ``u v`` pair per line (``v <= u``), ``#`` starts a comment,
and an optional ``vertices: a b c`` line declares extra (isolated) vertices.
Tokens that look like integers are read as ints.

Cache layout (all integers little-endian)::

    magic    8 bytes  b"FMOBCACH"
    version  u32
    reserved u32
    key      32 bytes  sha256 of the canonical edge list
    digest   32 bytes  sha256 of the payload
    payload  sections, each: name_len u16, name, kind u8, length u64, data

``kind`` is 0 for an int64 array and 1 for UTF-8 JSON.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable

import numpy as np

from .chains import ChainDecomposition, decompose_explicit
from .dag import Dag, build_dag
from .errors import CacheError
from .niv import NivMap
from .parallel import AntichainPartition

CACHE_MAGIC = b"FMOBCACH"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sII32s32s")


def parse_token(tok: str) -> Hashable:
    try:
        return int(tok)
    except ValueError:
        return tok


# --------------------------------------------------------------------------
# edge lists


def read_edge_list(path) -> Dag:
    vertices: list = []
    edges: list = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("vertices:"):
                vertices.extend(parse_token(t) for t in line[len("vertices:"):].split())
                continue
            toks = line.split()
            if len(toks) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            edges.append((parse_token(toks[0]), parse_token(toks[1])))
    return build_dag(edges, vertices)


def write_edge_list(d: Dag, path) -> None:
    """Write ``d`` with original labels; isolated vertices go in the header."""
    deg = np.diff(d.indptr) + np.bincount(d.indices, minlength=d.n)
    isolated = np.flatnonzero(deg == 0)
    labels = d.labels
    with open(path, "w") as fh:
        fh.write(f"# n={d.n} edges={d.num_edges}\n")
        if len(isolated):
            fh.write("vertices: " + " ".join(str(labels[i]) for i in isolated.tolist()) + "\n")
        src = np.repeat(np.arange(d.n), np.diff(d.indptr))
        if isinstance(labels, np.ndarray):
            pairs = np.column_stack([labels[src], labels[d.indices]])
            np.savetxt(fh, pairs, fmt="%d")
        else:
            for u, v in zip(src.tolist(), d.indices.tolist()):
                fh.write(f"{labels[u]} {labels[v]}\n")


def edge_list_key(d: Dag) -> bytes:
    """Content hash of the edge set (order and duplicates do not matter)."""
    h = hashlib.sha256()
    h.update(np.int64(d.n).tobytes())
    h.update(np.ascontiguousarray(d.indptr, dtype="<i8").tobytes())
    h.update(np.ascontiguousarray(d.indices, dtype="<i8").tobytes())
    h.update(json.dumps(_labels_list(d.labels)).encode())
    return h.digest()


def _labels_list(labels) -> list:
    if isinstance(labels, np.ndarray):
        return labels.tolist()
    return list(labels)


# --------------------------------------------------------------------------
# vectors


def read_vector(path, fmt: str = "text") -> np.ndarray:
    if fmt == "binary":
        return np.load(path, allow_pickle=False)
    with open(path) as fh:
        toks = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    try:
        return np.array([int(t) for t in toks], dtype=np.int64)
    except ValueError:
        return np.array([float(t) for t in toks], dtype=np.float64)


def write_vector(y: np.ndarray, path, fmt: str = "text") -> None:
    if fmt == "binary":
        with open(path, "wb") as fh:
            np.save(fh, y, allow_pickle=False)
        return
    with open(path, "w") as fh:
        fh.writelines(f"{v!r}\n" if isinstance(v, float) else f"{v}\n" for v in y.tolist())


# --------------------------------------------------------------------------
# chain files


def read_chains(path, d: Dag) -> ChainDecomposition:
    chains = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].split()
            if line:
                chains.append([d.index_of(parse_token(t)) for t in line])
    return decompose_explicit(d, chains)


def write_chains(cd: ChainDecomposition, d: Dag, path) -> None:
    with open(path, "w") as fh:
        for c in cd.chains:
            fh.write(" ".join(str(d.labels[i]) for i in c.tolist()) + "\n")


# --------------------------------------------------------------------------
# cache


@dataclass(frozen=True, eq=False)
class Precomputed:
    """Everything the transforms need, as stored in a cache file."""

    dag: Dag
    chains: ChainDecomposition
    niv: NivMap
    levels: AntichainPartition
    key: bytes


def _pack_sections(sections: dict) -> bytes:
    out = bytearray()
    for name, value in sections.items():
        nb = name.encode()
        if isinstance(value, np.ndarray):
            data = np.ascontiguousarray(value, dtype="<i8").tobytes()
            kind = 0
        else:
            data = json.dumps(value).encode()
            kind = 1
        out += struct.pack("<H", len(nb)) + nb + struct.pack("<BQ", kind, len(data)) + data
    return bytes(out)


def _unpack_sections(buf: bytes) -> dict:
    out = {}
    pos = 0
    try:
        while pos < len(buf):
            (nl,) = struct.unpack_from("<H", buf, pos)
            pos += 2
            name = buf[pos : pos + nl].decode()
            pos += nl
            kind, length = struct.unpack_from("<BQ", buf, pos)
            pos += 9
            data = buf[pos : pos + length]
            if len(data) != length:
                raise CacheError("truncated cache section")
            pos += length
            out[name] = np.frombuffer(data, dtype="<i8").astype(np.int64) if kind == 0 else json.loads(data)
    except (struct.error, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CacheError(f"malformed cache payload: {exc}") from exc
    return out


def save_cache(path, pre: Precomputed) -> None:
    d, cd, nm, ap = pre.dag, pre.chains, pre.niv, pre.levels
    payload = _pack_sections({
        "meta": {"n": d.n, "k": cd.k},
        "labels": _labels_list(d.labels),
        "dag_indptr": d.indptr,
        "dag_indices": d.indices,
        "next": cd.next,
        "chain_id": cd.chain_id,
        "niv_indptr": nm.indptr,
        "niv_chain": nm.chain,
        "niv_vertex": nm.vertex,
        "level_offsets": ap.offsets,
        "level_vertices": ap.vertices,
    })
    header = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, 0, pre.key, hashlib.sha256(payload).digest())
    Path(path).write_bytes(header + payload)


def load_cache(path, expected_key: bytes | None = None) -> Precomputed:
    """Read a cache file; raises :class:`CacheError` on any corruption or key mismatch."""
    buf = Path(path).read_bytes()
    if len(buf) < _HEADER.size:
        raise CacheError("cache file too short")
    magic, version, _, key, digest = _HEADER.unpack_from(buf)
    if magic != CACHE_MAGIC:
        raise CacheError("not a fastmobius cache (bad magic)")
    if version != CACHE_VERSION:
        raise CacheError(f"unsupported cache version {version}")
    payload = buf[_HEADER.size :]
    if hashlib.sha256(payload).digest() != digest:
        raise CacheError("cache hash mismatch: payload corrupted")
    if expected_key is not None and key != expected_key:
        raise CacheError("cache hash mismatch: cache belongs to a different edge list")
    s = _unpack_sections(payload)
    n, k = s["meta"]["n"], s["meta"]["k"]
    labels = s["labels"]
    if all(isinstance(v, int) for v in labels):
        labels = np.array(labels, dtype=np.int64)
        labels.flags.writeable = False
    else:
        labels = tuple(labels)
    d = Dag(n, s["dag_indptr"], s["dag_indices"], labels)
    chain_id = s["chain_id"]
    order = np.argsort(chain_id, kind="stable")
    bounds = np.searchsorted(chain_id[order], np.arange(k + 1))
    chains = []
    for j in range(k):
        c = order[bounds[j] : bounds[j + 1]].copy()
        c.flags.writeable = False
        chains.append(c)
    cd = ChainDecomposition(s["next"], chain_id, tuple(chains))
    nm = NivMap(n, k, s["niv_indptr"], s["niv_chain"], s["niv_vertex"])
    ap = AntichainPartition(s["level_offsets"], s["level_vertices"])
    if edge_list_key(d) != key:
        raise CacheError("cache hash mismatch: stored DAG does not match its key")
    return Precomputed(d, cd, nm, ap, key)


def precompute(d: Dag, chains: Iterable | None = None, *, minimal: bool = True) -> Precomputed:
    """Decomposition, niv map and antichain levels for ``d``."""
    from .chains import decompose
    from .niv import compute_niv
    from .parallel import antichain_partition

    cd = decompose(d, minimal=minimal) if chains is None else decompose_explicit(d, chains)
    return Precomputed(d, cd, compute_niv(d, cd), antichain_partition(d), edge_list_key(d))
