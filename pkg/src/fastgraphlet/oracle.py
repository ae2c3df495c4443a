"""Brute-force reference counts for small graphs.

Connected vertex subsets of size <= 4 are enumerated explicitly. Each subset
is looked up in tables built once by exhausting every labelled graph on at
most 4 vertices:

* net: the induced subgraph, with each member vertex distinguished, is
  classified to a graphlet id by canonical form;
* raw: every spanning connected edge subset of the induced subgraph is a
  (not necessarily induced) copy of some graphlet, classified the same way.

Nothing here shares code with the fast kernels or the conversion matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import NamedTuple

import numpy as np

from .conversion import ConversionMatrix, full_u16
from .dictionary import GRAPHLETS, N_GRAPHLETS, Dictionary
from .errors import OracleCapError
from .fields import FrequencyField
from .graph import SparseAdjacency

DEFAULT_CAP = 200


class InducedPatternKey(NamedTuple):
    vertex_count: int
    canonical_code: int


def _pairs(k):
    return list(combinations(range(k), 2))


def _mask(k, edges):
    pos = {p: b for b, p in enumerate(_pairs(k))}
    m = 0
    for u, v in edges:
        m |= 1 << pos[(min(u, v), max(u, v))]
    return m


def _edges(k, mask):
    return [p for b, p in enumerate(_pairs(k)) if mask >> b & 1]


def _connected(k, mask):
    if k == 1:
        return True
    adj = {v: set() for v in range(k)}
    for u, v in _edges(k, mask):
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == k


def pattern_key(k: int, mask: int, v: int) -> InducedPatternKey:
    """Canonical form of a k-vertex graph with vertex ``v`` distinguished.

    Minimum edge bitmask over all relabelings that send ``v`` to 0.
    """
    edges = _edges(k, mask)
    rest = [u for u in range(k) if u != v]
    best = None
    for perm in permutations(range(1, k)):
        relabel = {v: 0, **dict(zip(rest, perm))}
        code = _mask(k, [(relabel[a], relabel[b]) for a, b in edges])
        if best is None or code < best:
            best = code
    return InducedPatternKey(k, best)


@lru_cache(maxsize=None)
def _key_to_id():
    out = {}
    for g in GRAPHLETS:
        key = pattern_key(g.vertex_count, _mask(g.vertex_count, g.edges), 0)
        if key in out:
            raise AssertionError(f"graphlets {out[key]} and {g.id} share a canonical form")
        out[key] = g.id
    return out


def classify(k: int, mask: int, v: int) -> int:
    """Graphlet id of a connected k-vertex graph seen from vertex ``v``."""
    return _key_to_id()[pattern_key(k, mask, v)]


@lru_cache(maxsize=None)
def lookup_tables(k: int):
    """For each edge mask on k vertices: (induced ids per position, raw contributions).

    Raw contributions are (position, graphlet id, count) triples.
    """
    nbits = len(_pairs(k))
    induced, raw = [], []
    for mask in range(1 << nbits):
        if not _connected(k, mask):
            induced.append(None)
            raw.append(())
            continue
        induced.append(tuple(classify(k, mask, v) for v in range(k)))
        counts = {}
        sub = mask
        while True:
            if _connected(k, sub):
                for v in range(k):
                    key = (v, classify(k, sub, v))
                    counts[key] = counts.get(key, 0) + 1
            if sub == 0:
                break
            sub = (sub - 1) & mask
        raw.append(tuple((v, gid, c) for (v, gid), c in sorted(counts.items())))
    return induced, raw


def connected_subsets(adj: list[set], kmax: int = 4):
    """Every connected vertex subset of size <= kmax exactly once (ESU scheme)."""
    n = len(adj)

    def extend(sub, nbhd, ext, root):
        yield sub
        if len(sub) == kmax:
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            new = {u for u in adj[w] if u > root and u not in sub and u not in nbhd}
            yield from extend(sub + (w,), nbhd | adj[w], ext | new, root)

    for v in range(n):
        yield from extend((v,), adj[v] | {v}, {u for u in adj[v] if u > v}, v)


def _adjacency_sets(g: SparseAdjacency):
    return [set(g.row(i).tolist()) for i in range(g.n)]


def _check_cap(g, cap):
    if g.n > cap:
        raise OracleCapError(f"oracle limited to {cap} vertices, graph has {g.n}")


def _enumerate(g: SparseAdjacency, cap: int):
    _check_cap(g, cap)
    adj = _adjacency_sets(g)
    net = np.zeros((g.n, N_GRAPHLETS), dtype=np.int64)
    raw = np.zeros((g.n, N_GRAPHLETS), dtype=np.int64)
    tables = {k: lookup_tables(k) for k in (2, 3, 4)}
    for sub in connected_subsets(adj, 4):
        k = len(sub)
        if k == 1:
            net[sub[0], 0] += 1
            raw[sub[0], 0] += 1
            continue
        s = sorted(sub)
        mask = 0
        for b, (a, c) in enumerate(_pairs(k)):
            if s[c] in adj[s[a]]:
                mask |= 1 << b
        induced, rawc = tables[k]
        for pos, gid in enumerate(induced[mask]):
            net[s[pos], gid] += 1
        for pos, gid, cnt in rawc[mask]:
            raw[s[pos], gid] += cnt
    return net, raw


def oracle_net(g: SparseAdjacency, cap: int = DEFAULT_CAP) -> FrequencyField:
    """Induced-subgraph counts per vertex for all 16 graphlets."""
    net, _ = _enumerate(g, cap)
    return FrequencyField(net, Dictionary.full())


def oracle_raw(g: SparseAdjacency, cap: int = DEFAULT_CAP) -> FrequencyField:
    """Counts of all (induced or not) graphlet copies per vertex."""
    _, raw = _enumerate(g, cap)
    return FrequencyField(raw, Dictionary.full())


def oracle_fields(g: SparseAdjacency, cap: int = DEFAULT_CAP):
    net, raw = _enumerate(g, cap)
    return FrequencyField(raw, Dictionary.full()), FrequencyField(net, Dictionary.full())


# ---------------------------------------------------------------------------
# cross check


@dataclass
class LegResult:
    name: str
    passed: bool
    mismatch: tuple | None = None  # (vertex, graphlet, expected, got)

    def __str__(self):
        if self.passed:
            return f"{self.name}: pass"
        v, k, exp, got = self.mismatch
        return f"{self.name}: FAIL at vertex {v}, graphlet {k}: expected {exp}, got {got}"


@dataclass
class CrossCheckReport:
    legs: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(leg.passed for leg in self.legs)

    def __str__(self):
        lines = [str(leg) for leg in self.legs]
        lines.append("all legs pass" if self.passed else "cross check FAILED")
        return "\n".join(lines)


def _compare(name, expected, got, ids):
    expected = np.asarray(expected)
    got = np.asarray(got)
    if expected.shape != got.shape:
        return LegResult(name, False, (-1, -1, expected.shape, got.shape))
    bad = np.argwhere(expected != got)
    if len(bad) == 0:
        return LegResult(name, True)
    v, a = (int(x) for x in bad[0])
    return LegResult(name, False, (v, ids[a], int(expected[v, a]), int(got[v, a])))


def expected_subdictionary_net(net_full: np.ndarray, ids) -> np.ndarray:
    """Net counts a sub-dictionary should report, from full induced counts.

    The sub-dictionary raw counts are ``U16[s, :] @ net``; solving the
    ``U16[s, s]`` system by plain integer back substitution gives the target.
    """
    U = full_u16().entries
    ids = list(ids)
    raw_s = net_full @ U[ids, :].T
    out = np.zeros_like(raw_s)
    for a in range(len(ids) - 1, -1, -1):
        acc = raw_s[:, a].copy()
        for b in range(a + 1, len(ids)):
            acc = acc - U[ids[a], ids[b]] * out[:, b]
        out[:, a] = acc
    return out


def cross_check(
    g: SparseAdjacency,
    fast_raw: FrequencyField,
    fast_net: FrequencyField,
    U: ConversionMatrix | None = None,
    cap: int = DEFAULT_CAP,
    induced: bool = False,
) -> CrossCheckReport:
    """Compare fast fields with the oracle along three independent legs.

    1. fast raw == oracle raw
    2. fast net == oracle net (for the selected dictionary; with ``induced``
       the plain induced counts, as produced by a family-complete run)
    3. U @ oracle net == oracle raw
    """
    U = U or full_u16()
    o_raw, o_net = oracle_fields(g, cap)
    ids = list(fast_raw.dictionary.selected)
    report = CrossCheckReport()
    report.legs.append(_compare("fast raw = oracle raw", o_raw.values[:, ids], fast_raw.values, ids))
    net_ids = list(fast_net.dictionary.selected)
    want = o_net.values[:, net_ids] if induced else expected_subdictionary_net(o_net.values, net_ids)
    report.legs.append(_compare("fast net = oracle net", want, fast_net.values, net_ids))
    uids = list(U.ids)
    report.legs.append(
        _compare("U * oracle net = oracle raw", o_raw.values[:, uids], U.apply(o_net.values[:, uids]), uids)
    )
    return report
