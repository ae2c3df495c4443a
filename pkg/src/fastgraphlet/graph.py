"""Graph ingestion and the immutable CSR adjacency used by every kernel."""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import GraphParseError, StructuralError

log = logging.getLogger(__name__)

INDEX_DTYPE = np.int64


@dataclass
class EdgeCollection:
    """Raw (u, v) pairs as read from a file, before any sanitization.

    ``declared_n`` is set only by formats that carry a vertex count; ids are
    then treated as positions ``0..declared_n-1``. Without it, ids are labels
    and are compacted to ``0..k-1`` in sorted order when the graph is built.
    """

    edges: np.ndarray
    declared_n: int | None = None
    origin: str = "edgelist"
    symmetric: bool = False

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=INDEX_DTYPE).reshape(-1, 2)

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class SanitizeOptions:
    symmetrize: bool = False
    drop_self_loops: bool = True
    dedupe: bool = True


@dataclass(frozen=True)
class BuildReport:
    self_loops_dropped: int = 0
    duplicates_merged: int = 0
    symmetrized_entries: int = 0


@dataclass(frozen=True, eq=False)
class SparseAdjacency:
    """Symmetric 0/1 adjacency in CSR form with sorted rows and empty diagonal."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray
    report: BuildReport = field(default_factory=BuildReport)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.labels):
            arr.flags.writeable = False

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def d_max(self) -> int:
        return int(np.diff(self.indptr).max()) if self.n else 0

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        r = self.row(i)
        k = np.searchsorted(r, j)
        return bool(k < len(r) and r[k] == j)

    def edge_pairs(self) -> np.ndarray:
        """Each undirected edge once, as (i, j) with i < j, in row order."""
        src = np.repeat(np.arange(self.n, dtype=INDEX_DTYPE), np.diff(self.indptr))
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def __eq__(self, other):
        if not isinstance(other, SparseAdjacency):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    def to_edge_list(self) -> str:
        """Emit the graph as an edge list in the input's own labels."""
        pairs = self.labels[self.edge_pairs()]
        return "".join(f"{u} {v}\n" for u, v in pairs.tolist())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SparseAdjacency":
        """Build from 0-based undirected pairs; convenience for tests and scripts."""
        ec = EdgeCollection(np.array(list(edges), dtype=INDEX_DTYPE), declared_n=n, origin="pairs")
        return build_adjacency(ec, SanitizeOptions(symmetrize=True), labels_from_one=False)


def _int_token(tok: str, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise GraphParseError(f"non-integer vertex id {tok!r}", lineno) from None
    if v < 0:
        raise GraphParseError(f"negative vertex id {v}", lineno)
    return v


def parse_edge_list(text: str | TextIO) -> EdgeCollection:
    """Parse whitespace-separated ``u v`` lines; ``#`` and ``%`` start comments.

    Extra columns (weights, timestamps) after the first two are ignored.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    pairs = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        toks = s.split()
        if len(toks) < 2:
            raise GraphParseError("expected two vertex ids", lineno)
        pairs.append((_int_token(toks[0], lineno), _int_token(toks[1], lineno)))
    return EdgeCollection(np.array(pairs, dtype=INDEX_DTYPE), declared_n=None, origin="edgelist")


def parse_matrix_market(text: str | TextIO) -> EdgeCollection:
    """Parse a Matrix Market coordinate file into 0-based pairs."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    lines = enumerate(stream, start=1)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphParseError("empty Matrix Market input", 1) from None
    toks = header.lower().split()
    if len(toks) < 5 or toks[0] != "%%matrixmarket" or toks[1] != "matrix":
        raise GraphParseError("missing %%MatrixMarket matrix header", lineno)
    fmt, fld, sym = toks[2], toks[3], toks[4]
    if fmt != "coordinate":
        raise GraphParseError(f"unsupported format {fmt!r}; only coordinate is accepted", lineno)
    if fld not in ("pattern", "real", "integer"):
        raise GraphParseError(f"unsupported field {fld!r}", lineno)
    if sym not in ("general", "symmetric"):
        raise GraphParseError(f"unsupported symmetry {sym!r}", lineno)

    size = None
    for lineno, line in lines:
        s = line.strip()
        if s and not s.startswith("%"):
            size = s.split()
            break
    if size is None or len(size) != 3:
        raise GraphParseError("missing size line 'rows cols nnz'", lineno)
    nrows, ncols, nnz = (_int_token(t, lineno) for t in size)
    if nrows != ncols:
        raise GraphParseError(f"adjacency must be square, got {nrows}x{ncols}", lineno)

    pairs = []
    for lineno, line in lines:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        toks = s.split()
        if len(toks) < 2:
            raise GraphParseError("expected row and column index", lineno)
        i, j = _int_token(toks[0], lineno), _int_token(toks[1], lineno)
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise GraphParseError(f"entry ({i}, {j}) outside declared {nrows}x{ncols}", lineno)
        pairs.append((i - 1, j - 1))
    if len(pairs) != nnz:
        raise GraphParseError(f"header declares {nnz} entries, found {len(pairs)}", lineno)
    return EdgeCollection(
        np.array(pairs, dtype=INDEX_DTYPE), declared_n=nrows, origin="mtx", symmetric=sym == "symmetric"
    )


def read_graph(path: str | Path, fmt: str = "auto") -> EdgeCollection:
    path = Path(path)
    with open(path) as fh:
        text = fh.read()
    if fmt == "auto":
        fmt = "mtx" if path.suffix == ".mtx" or text.lstrip().lower().startswith("%%matrixmarket") else "edgelist"
    if fmt == "mtx":
        return parse_matrix_market(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def build_adjacency(
    ec: EdgeCollection, opt: SanitizeOptions = SanitizeOptions(), labels_from_one: bool | None = None
) -> SparseAdjacency:
    """Sanitize an edge collection into a SparseAdjacency.

    Edge-list ids are labels: the distinct ids (self-loop endpoints included)
    are sorted and renumbered 0..k-1. Formats with a declared vertex count keep
    ids as positions, with ``n = max(declared_n, 1 + max id)``.
    """
    edges = ec.edges
    if ec.declared_n is None:
        labels, inv = np.unique(edges.ravel(), return_inverse=True)
        edges = inv.reshape(-1, 2).astype(INDEX_DTYPE)
        n = len(labels)
    else:
        n = max(ec.declared_n, int(edges.max()) + 1 if len(edges) else 0)
        if labels_from_one is None:
            labels_from_one = ec.origin == "mtx"
        labels = np.arange(n, dtype=INDEX_DTYPE) + (1 if labels_from_one else 0)

    loops = edges[:, 0] == edges[:, 1]
    n_loops = int(loops.sum())
    if n_loops:
        if not opt.drop_self_loops:
            v = int(edges[loops][0, 0])
            raise StructuralError(f"self-loop at vertex {labels[v]} and drop_self_loops is off")
        log.warning("dropped %d self-loop(s)", n_loops)
        edges = edges[~loops]

    w = max(n, 1)
    keys = edges[:, 0] * w + edges[:, 1]
    ukeys = np.unique(keys)
    n_dup = len(keys) - len(ukeys)
    if n_dup:
        if not opt.dedupe:
            raise StructuralError(f"{n_dup} duplicate edge entries and dedupe is off")
        log.info("merged %d duplicate edge entries", n_dup)

    src, dst = ukeys // w, ukeys % w
    rkeys = np.unique(dst * w + src)
    added = 0
    if ec.symmetric or opt.symmetrize:
        allkeys = np.union1d(ukeys, rkeys)
        added = len(allkeys) - len(ukeys)
        ukeys = allkeys
    elif not np.array_equal(ukeys, rkeys):
        missing = np.setdiff1d(rkeys, ukeys)[0]
        u, v = int(missing // w), int(missing % w)
        raise StructuralError(
            f"edge ({labels[v]}, {labels[u]}) has no reverse ({labels[u]}, {labels[v]}); "
            "pass symmetrize to take the union"
        )

    # sorted keys give row-major order with sorted columns
    src, dst = ukeys // w, ukeys % w
    indptr = np.zeros(n + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    report = BuildReport(self_loops_dropped=n_loops, duplicates_merged=n_dup, symmetrized_entries=added)
    return SparseAdjacency(n, indptr, dst.astype(INDEX_DTYPE), np.asarray(labels, dtype=INDEX_DTYPE), report)


def degree_vector(g: SparseAdjacency) -> tuple[np.ndarray, int]:
    """Return (degrees, d_max)."""
    deg = np.diff(g.indptr)
    return deg, int(deg.max()) if g.n else 0
