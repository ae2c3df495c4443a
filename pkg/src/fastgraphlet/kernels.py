"""Raw graphlet frequency kernels.

Every kernel walks the CSR adjacency row by row. Products such as A^2, P2,
C4,2, D4 and T are never stored: one row (or one edge) is built in a
SparseRowAccumulator, reduced into the output vector and cleared again.
Only the per-edge triangle counts C3 (as sparse as A) live across kernels.

Vertex ranges are split into contiguous, nnz-balanced chunks. Each chunk
owns its scratch and writes disjoint output rows, so results do not depend
on the worker count.
"""

from __future__ import annotations

import logging
import os
import time
import tracemalloc
from dataclasses import dataclass, field

import numba
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the TBB probe, which warns on older TBB builds
    try:
        from numba.np.ufunc import omppool  # noqa: F401

        numba.config.THREADING_LAYER = "omp"
    except ImportError:
        pass
from numba import njit, prange

from .dictionary import C3, D4, P2, P2_ROWS, P3, T, Dictionary, resolve_dependencies
from .errors import FrequencyOverflowError
from .fields import RawFrequencyField
from .graph import SparseAdjacency

log = logging.getLogger(__name__)

INT64_MAX = np.iinfo(np.int64).max
_INT_LIMIT = INT64_MAX
# Below this degree every intermediate is < 2**60 and no check is needed.
_OVERFLOW_SAFE_DMAX = 1 << 20


# ---------------------------------------------------------------------------
# sparse row accumulator


@njit(cache=True, inline="always")
def _spa_add(values, touched, nt, j, x):
    if values[j] == 0:
        touched[nt] = j
        nt += 1
    values[j] += x
    return nt


@njit(cache=True, inline="always")
def _spa_reset(values, touched, nt):
    for t in range(nt):
        values[touched[t]] = 0
    return 0


class SparseRowAccumulator:
    """Dense scratch row plus a stack of the indices currently nonzero.

    ``reset`` clears only the touched entries, so its cost follows the
    row's fill rather than n. Only positive increments are supported.
    """

    def __init__(self, n: int):
        self.values = np.zeros(n, dtype=np.int64)
        self.touched = np.zeros(n, dtype=np.int64)
        self.size = 0
        self.touches = 0

    def add(self, j: int, x: int = 1):
        if x <= 0:
            raise ValueError("accumulator increments must be positive")
        self.size = _spa_add(self.values, self.touched, self.size, j, x)
        self.touches += 1

    def __getitem__(self, j):
        return int(self.values[j])

    def indices(self) -> np.ndarray:
        return self.touched[:self.size].copy()

    def items(self):
        idx = self.touched[:self.size]
        return dict(zip(idx.tolist(), self.values[idx].tolist()))

    def reset(self):
        self.size = _spa_reset(self.values, self.touched, self.size)


# ---------------------------------------------------------------------------
# instrumentation


@dataclass
class Allocation:
    name: str
    words: int
    shape: tuple
    scale: str


class Workspace:
    """Ledger of auxiliary arrays, to audit peak memory per transform.

    ``scale`` declares the size class of each array: ``"n"`` (a vertex vector),
    ``"m"`` (one value per stored edge), ``"worker_n"`` (one vertex vector per
    worker) or ``"output"``. Arrays whose size exceeds their declared class
    raise immediately, so nothing quadratic can slip in.
    """

    def __init__(self, n: int, m: int, workers: int):
        self.n, self.m, self.workers = n, m, workers
        self.live: dict[str, Allocation] = {}
        self.history: list[Allocation] = []
        self.peak_words = 0
        self.peak_by_scale: dict[str, int] = {}

    def _limit(self, scale):
        return {
            "n": self.n + 1,
            "m": 2 * self.m,
            "worker_n": self.workers * max(self.n, 1),
            "output": self.n * 16,
        }[scale]

    def alloc(self, name, shape, scale, dtype=np.int64):
        shape = tuple(np.atleast_1d(shape).tolist())
        words = int(np.prod(shape))
        if words > self._limit(scale):
            raise MemoryError(f"{name}: {shape} exceeds the {scale!r} size class")
        arr = np.zeros(shape, dtype=dtype)
        self.track(name, arr, scale)
        return arr

    def track(self, name, arr, scale):
        a = Allocation(name, int(arr.size), tuple(arr.shape), scale)
        self.live[name] = a
        self.history.append(a)
        total = sum(x.words for x in self.live.values() if x.scale != "output")
        if total > self.peak_words:
            self.peak_words = total
            by = {}
            for x in self.live.values():
                by[x.scale] = by.get(x.scale, 0) + x.words
            self.peak_by_scale = by
        return arr

    def free(self, *names):
        for name in names:
            self.live.pop(name, None)

    def constants(self) -> tuple[float, float]:
        """(c1, c2) such that peak auxiliary words = c1*m + c2*n."""
        by = self.peak_by_scale
        c1 = by.get("m", 0) / self.m if self.m else 0.0
        c2 = (by.get("n", 0) + by.get("worker_n", 0)) / self.n if self.n else 0.0
        return c1, c2


@dataclass
class TransformStats:
    timings: dict = field(default_factory=dict)
    p2_touches: int = 0
    p2_touch_bound: int = 0
    workers: int = 1
    peak_aux_words: int = 0
    mem_c1: float = 0.0
    mem_c2: float = 0.0
    traced_peak_bytes: int | None = None
    allocations: list = field(default_factory=list)

    def report(self) -> str:
        lines = [f"workers: {self.workers}"]
        for k, v in self.timings.items():
            lines.append(f"time {k:>10s}: {v * 1e3:9.3f} ms")
        if self.p2_touch_bound:
            lines.append(f"P2-row accumulator touches: {self.p2_touches} (bound 2*dmax*m = {self.p2_touch_bound})")
        lines.append(
            f"peak auxiliary words: {self.peak_aux_words} = {self.mem_c1:.2f}*m + {self.mem_c2:.2f}*n"
        )
        if self.traced_peak_bytes is not None:
            lines.append(f"traced peak bytes: {self.traced_peak_bytes}")
        return "\n".join(lines)


class _Timer:
    def __init__(self, stats, name):
        self.stats, self.name = stats, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        if self.stats is not None:
            self.stats.timings[self.name] = self.stats.timings.get(self.name, 0.0) + time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# worker configuration


def resolve_workers(threads=None) -> int:
    """Worker count from an int, ``"auto"``, or ``$FASTGRAPHLET_THREADS``."""
    if threads is None:
        threads = os.environ.get("FASTGRAPHLET_THREADS", "1")
    if threads == "auto":
        return os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def row_partition(indptr: np.ndarray, parts: int) -> np.ndarray:
    """Chunk boundaries with roughly equal nonzeros per chunk."""
    n = len(indptr) - 1
    targets = np.linspace(0, indptr[-1], parts + 1)
    bounds = np.searchsorted(indptr, targets, side="left").astype(np.int64)
    bounds[0], bounds[-1] = 0, n
    return np.maximum.accumulate(np.minimum(bounds, n))


def _set_threads(workers):
    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True, parallel=True)
def _spmv(indptr, indices, x, bounds, out):
    for c in prange(len(bounds) - 1):
        for i in range(bounds[c], bounds[c + 1]):
            s = 0
            for p in range(indptr[i], indptr[i + 1]):
                s += x[indices[p]]
            out[i] = s


@njit(cache=True, parallel=True)
def _weighted_spmv(indptr, indices, data, x, bounds, out):
    for c in prange(len(bounds) - 1):
        for i in range(bounds[c], bounds[c + 1]):
            s = 0
            for p in range(indptr[i], indptr[i + 1]):
                s += data[p] * x[indices[p]]
            out[i] = s


@njit(cache=True, parallel=True)
def _c3_kernel(indptr, indices, bounds, mark, data, c3):
    for c in prange(len(bounds) - 1):
        mk = mark[c]
        for i in range(bounds[c], bounds[c + 1]):
            lo, hi = indptr[i], indptr[i + 1]
            for p in range(lo, hi):
                mk[indices[p]] = 1
            s = 0
            for p in range(lo, hi):
                j = indices[p]
                cnt = 0
                for q in range(indptr[j], indptr[j + 1]):
                    cnt += mk[indices[q]]
                data[p] = cnt
                s += cnt
            c3[i] = s // 2
            for p in range(lo, hi):
                mk[indices[p]] = 0


@njit(cache=True, parallel=True)
def _p2_rows_kernel(indptr, indices, bounds, values, touched, c4, d14, touches):
    for c in prange(len(bounds) - 1):
        vals = values[c]
        tch = touched[c]
        count = 0
        for i in range(bounds[c], bounds[c + 1]):
            nt = 0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                for q in range(indptr[j], indptr[j + 1]):
                    k = indices[q]
                    if k != i:
                        nt = _spa_add(vals, tch, nt, k, 1)
                        count += 1
            s4 = 0
            for t in range(nt):
                x = vals[tch[t]]
                s4 += x * (x - 1) // 2
            s14 = 0
            for p in range(indptr[i], indptr[i + 1]):
                x = vals[indices[p]]
                s14 += x * (x - 1) // 2
            c4[i] = s4
            d14[i] = s14
            nt = _spa_reset(vals, tch, nt)
        touches[c] = count


@njit(cache=True, parallel=True)
def _d4_kernel(indptr, indices, data, bounds, mark, out):
    for c in prange(len(bounds) - 1):
        mk = mark[c]
        for i in range(bounds[c], bounds[c + 1]):
            lo, hi = indptr[i], indptr[i + 1]
            for p in range(lo, hi):
                mk[indices[p]] = 1
            s = 0
            for p in range(lo, hi):
                j = indices[p]
                for q in range(indptr[j], indptr[j + 1]):
                    if mk[indices[q]] and data[q] > 1:
                        s += data[q] - 1
            out[i] = s // 2
            for p in range(lo, hi):
                mk[indices[p]] = 0


@njit(cache=True, inline="always")
def _adjacent(indptr, indices, u, v):
    lo, hi = indptr[u], indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        w = indices[mid]
        if w < v:
            lo = mid + 1
        elif w > v:
            hi = mid
        else:
            return True
    return False


@njit(cache=True, parallel=True)
def _t_kernel(indptr, indices, bounds, mark, qbuf, partial):
    for c in prange(len(bounds) - 1):
        mk = mark[c]
        q = qbuf[c]
        acc = partial[c]
        for i in range(bounds[c], bounds[c + 1]):
            lo, hi = indptr[i], indptr[i + 1]
            for p in range(lo, hi):
                mk[indices[p]] = 1
            for p in range(lo, hi):
                j = indices[p]
                if j < i:
                    continue
                nq = 0
                if indptr[j + 1] - indptr[j] < hi - lo:
                    for r in range(indptr[j], indptr[j + 1]):
                        k = indices[r]
                        if mk[k]:
                            q[nq] = k
                            nq += 1
                else:
                    for r in range(lo, hi):
                        k = indices[r]
                        if _adjacent(indptr, indices, j, k):
                            q[nq] = k
                            nq += 1
                t = 0
                for a in range(nq):
                    for b in range(a + 1, nq):
                        if _adjacent(indptr, indices, q[a], q[b]):
                            t += 2
                acc[i] += t
                acc[j] += t
            for p in range(lo, hi):
                mk[indices[p]] = 0


# ---------------------------------------------------------------------------
# auxiliary containers


@dataclass(eq=False)
class SparseCountMatrix:
    """Counts stored on the sparsity pattern of A (shares A's index arrays)."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @property
    def n(self):
        return len(self.indptr) - 1

    def row_sums(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        return np.bincount(src, weights=self.data, minlength=self.n).astype(np.int64)

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int64)
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        out[src, self.indices] = self.data
        return out


@dataclass
class AuxiliaryVectors:
    p1: np.ndarray | None = None
    p2: np.ndarray | None = None
    p3: np.ndarray | None = None
    c2: np.ndarray | None = None
    c3: np.ndarray | None = None
    c4: np.ndarray | None = None


def _rect(x):
    return np.maximum(x, 0)


def _ctx(g, workers, ws):
    if ws is None:
        ws = Workspace(g.n, g.m, workers)
    return row_partition(g.indptr, workers), ws


# ---------------------------------------------------------------------------
# public kernels


def compute_p2(g: SparseAdjacency, p1: np.ndarray, workers: int = 1, ws: Workspace | None = None) -> np.ndarray:
    """2-paths with an end at each vertex, ``A p1 - p1``."""
    bounds, ws = _ctx(g, workers, ws)
    out = ws.alloc("p2", g.n, "n")
    _spmv(g.indptr, g.indices, p1, bounds, out)
    out -= p1
    return _rect(out)


def compute_c3_C3(g: SparseAdjacency, workers: int = 1, ws: Workspace | None = None):
    """Per-vertex triangle counts and per-edge triangle counts (C3 on A's pattern)."""
    bounds, ws = _ctx(g, workers, ws)
    mark = ws.alloc("mark", (workers, g.n), "worker_n", dtype=np.int8)
    data = ws.alloc("C3", len(g.indices), "m")
    c3 = ws.alloc("c3", g.n, "n")
    _c3_kernel(g.indptr, g.indices, bounds, mark, data, c3)
    ws.free("mark")
    return c3, SparseCountMatrix(g.indptr, g.indices, data)


def compute_p3(g, p1, p2, c3, workers: int = 1, ws: Workspace | None = None) -> np.ndarray:
    """3-paths with an end at each vertex, ``A p2 - p1(p1-1) - 2 c3``."""
    bounds, ws = _ctx(g, workers, ws)
    out = ws.alloc("p3", g.n, "n")
    _spmv(g.indptr, g.indices, p2, bounds, out)
    out -= p1 * _rect(p1 - 1)
    out -= 2 * c3
    return _rect(out)


def compute_c4_d14(g: SparseAdjacency, workers: int = 1, ws: Workspace | None = None, stats: TransformStats | None = None):
    """4-cycles through each vertex and on-cord diamond counts, in one P2-row pass."""
    bounds, ws = _ctx(g, workers, ws)
    values = ws.alloc("spa_values", (workers, g.n), "worker_n")
    touched = ws.alloc("spa_touched", (workers, g.n), "worker_n")
    c4 = ws.alloc("c4", g.n, "n")
    d14 = ws.alloc("d14", g.n, "n")
    touches = np.zeros(workers, dtype=np.int64)
    _p2_rows_kernel(g.indptr, g.indices, bounds, values, touched, c4, d14, touches)
    ws.free("spa_values", "spa_touched")
    if stats is not None:
        stats.p2_touches += int(touches.sum())
    return c4, d14


def compute_d7(g, p1, workers: int = 1, ws: Workspace | None = None) -> np.ndarray:
    bounds, ws = _ctx(g, workers, ws)
    half_forks = _rect(p1 - 1) * _rect(p1 - 2) // 2
    out = ws.alloc("d7", g.n, "n")
    _spmv(g.indptr, g.indices, half_forks, bounds, out)
    return out


def compute_d8(p1: np.ndarray) -> np.ndarray:
    """binomial(p1, 3); the middle product is always divisible by 3."""
    return (p1 * _rect(p1 - 1) // 2) * _rect(p1 - 2) // 3


def compute_d9_d10_d11(g, p1, c3, C3: SparseCountMatrix, workers: int = 1, ws: Workspace | None = None):
    bounds, ws = _ctx(g, workers, ws)
    d9 = ws.alloc("d9", g.n, "n")
    _spmv(g.indptr, g.indices, c3, bounds, d9)
    d9 = _rect(d9 - 2 * c3)
    d10 = ws.alloc("d10", g.n, "n")
    _weighted_spmv(g.indptr, g.indices, C3.data, _rect(p1 - 2), bounds, d10)
    d11 = _rect(p1 - 2) * c3
    return d9, d10, d11


def compute_d13(g, C3: SparseCountMatrix, workers: int = 1, ws: Workspace | None = None) -> np.ndarray:
    """Off-cord diamonds: half the row sums of ``A * (A (C3 - A))``, built row by row."""
    bounds, ws = _ctx(g, workers, ws)
    mark = ws.alloc("mark", (workers, g.n), "worker_n", dtype=np.int8)
    out = ws.alloc("d13", g.n, "n")
    _d4_kernel(g.indptr, g.indices, C3.data, bounds, mark, out)
    ws.free("mark")
    return out


def compute_d15(g: SparseAdjacency, workers: int = 1, ws: Workspace | None = None) -> np.ndarray:
    """4-cliques through each vertex from common-neighbour sets of each edge."""
    bounds, ws = _ctx(g, workers, ws)
    mark = ws.alloc("mark", (workers, g.n), "worker_n", dtype=np.int8)
    qbuf = ws.alloc("qbuf", (workers, g.n), "worker_n")
    partial = ws.alloc("t_partial", (workers, g.n), "worker_n")
    _t_kernel(g.indptr, g.indices, bounds, mark, qbuf, partial)
    out = partial.sum(axis=0) // 6
    ws.free("mark", "qbuf", "t_partial")
    return out


# ---------------------------------------------------------------------------
# overflow guard


def check_overflow(g: SparseAdjacency, d: Dictionary, p1, c3=None, C3=None, limit=None):
    """Raise FrequencyOverflowError if a selected count or its intermediates may leave int64.

    Floating-point shadows of each formula are compared against ``limit``;
    the 4-cycle, diamond and clique counts are bounded by the 3-path shadow.
    """
    if limit is None:
        limit = _INT_LIMIT
    f = p1.astype(np.float64)
    A = lambda x: _spmv_float(g, x)  # noqa: E731
    shadows = {}
    sel = set(d.selected)
    if sel & {2, 5, 6, 12, 13, 14, 15}:
        fp2 = A(f)
        shadows[2] = fp2
        shadows[6] = fp2 * f
        big = A(fp2)
        for k in (5, 12, 13, 14, 15):
            shadows[k] = big
    shadows[3] = f * f
    shadows[7] = A(f * f)
    shadows[8] = f * f * f / 2
    if c3 is not None:
        fc3 = c3.astype(np.float64)
        shadows[4] = fc3
        shadows[9] = A(fc3)
        shadows[11] = f * fc3
    if C3 is not None:
        shadows[10] = _spmv_float(g, f, C3.data.astype(np.float64))
    for k in d.selected:
        if k in shadows:
            over = np.flatnonzero(shadows[k] > limit)
            if len(over):
                v = int(over[0])
                raise FrequencyOverflowError(k, v, float(shadows[k][v]))


def _spmv_float(g, x, data=None):
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    vals = x[g.indices] if data is None else data * x[g.indices]
    return np.bincount(src, weights=vals, minlength=g.n)


# ---------------------------------------------------------------------------
# driver


def raw_frequencies(
    g: SparseAdjacency,
    dictionary: Dictionary | None = None,
    threads=None,
    stats: TransformStats | None = None,
    trace_memory: bool = False,
) -> RawFrequencyField:
    """Raw frequencies of every selected graphlet at every vertex.

    Only the auxiliary quantities needed by ``dictionary`` are computed, in
    the fixed order p1, C3/c3, p2, p3, P2-row pass, D4 pass, T pass.
    """
    d = dictionary or Dictionary.full()
    workers = resolve_workers(threads)
    _set_threads(workers)
    if trace_memory:
        tracemalloc.start()
        tracemalloc.reset_peak()
    try:
        out = _raw_frequencies(g, d, workers, stats)
    finally:
        if trace_memory:
            _, peak = tracemalloc.get_traced_memory()
            tracemalloc.stop()
            if stats is not None:
                stats.traced_peak_bytes = peak
    return out


def _raw_frequencies(g, d, workers, stats):
    plan = resolve_dependencies(d)
    sel = set(d.selected)
    ws = Workspace(g.n, g.m, workers)
    table = ws.alloc("output", (g.n, len(d)), "output")
    cols = {k: a for a, k in enumerate(d.selected)}

    def put(k, vec):
        if k in cols:
            table[:, cols[k]] = vec

    with _Timer(stats, "p1"):
        p1 = np.diff(g.indptr).astype(np.int64)
        ws.track("p1", p1, "n")
        d_max = int(p1.max()) if g.n else 0
    if d_max >= _OVERFLOW_SAFE_DMAX:
        check_overflow(g, d, p1)

    put(0, 1)
    put(1, p1)
    put(3, p1 * _rect(p1 - 1) // 2)
    if 7 in sel:
        with _Timer(stats, "d7"):
            put(7, compute_d7(g, p1, workers, ws))
    put(8, compute_d8(p1))

    c3 = C3m = p2 = None
    if C3 in plan:
        with _Timer(stats, "c3"):
            c3, C3m = compute_c3_C3(g, workers, ws)
        if d_max >= _OVERFLOW_SAFE_DMAX:
            check_overflow(g, d, p1, c3, C3m)
        put(4, c3)
        if sel & {9, 10, 11}:
            with _Timer(stats, "dippers"):
                d9, d10, d11 = compute_d9_d10_d11(g, p1, c3, C3m, workers, ws)
            put(9, d9)
            put(10, d10)
            put(11, d11)
    if P2 in plan:
        with _Timer(stats, "p2"):
            p2 = compute_p2(g, p1, workers, ws)
        put(2, p2)
        if 6 in sel:
            put(6, _rect(p2 * _rect(p1 - 1) - 2 * c3))
    if P3 in plan:
        with _Timer(stats, "p3"):
            put(5, compute_p3(g, p1, p2, c3, workers, ws))
    ws.free("p2", "p3", "d7", "d9", "d10")
    if P2_ROWS in plan:
        with _Timer(stats, "p2_rows"):
            c4, d14 = compute_c4_d14(g, workers, ws, stats)
        put(12, c4)
        put(14, d14)
        ws.free("c4", "d14")
    if D4 in plan:
        with _Timer(stats, "d4"):
            put(13, compute_d13(g, C3m, workers, ws))
        ws.free("d13")
    ws.free("C3", "c3")
    del C3m
    if T in plan:
        with _Timer(stats, "t"):
            put(15, compute_d15(g, workers, ws))

    if stats is not None:
        stats.workers = workers
        stats.p2_touch_bound = 2 * d_max * g.m if P2_ROWS in plan else 0
        stats.peak_aux_words = ws.peak_words
        stats.mem_c1, stats.mem_c2 = ws.constants()
        stats.allocations = list(ws.history)
    return RawFrequencyField(table, d)
