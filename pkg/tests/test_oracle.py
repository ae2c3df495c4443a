from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from conftest import WORKED_NET, WORKED_RAW, complete_graph, from_nx
from fastgraphlet import ConversionInconsistencyError, Dictionary, OracleCapError, SparseAdjacency, U16, full_u16, graphlet_transform
from fastgraphlet.dictionary import GRAPHLETS
from fastgraphlet.oracle import (
    _connected,
    _mask,
    classify,
    connected_subsets,
    cross_check,
    lookup_tables,
    oracle_fields,
    oracle_net,
    oracle_raw,
)


def test_worked_tables(worked):
    raw, net = oracle_fields(worked)
    assert np.array_equal(raw.values, WORKED_RAW)
    assert np.array_equal(net.values, WORKED_NET)


def test_k4_and_single_vertex():
    net = oracle_net(complete_graph(4)).values
    want = np.zeros(16, dtype=np.int64)
    want[[0, 1, 4, 15]] = [1, 3, 3, 1]
    assert all(np.array_equal(row, want) for row in net)
    single = SparseAdjacency.from_edges(1, [])
    assert oracle_net(single).values.tolist() == [[1] + [0] * 15]


def test_raw_paths():
    path = SparseAdjacency.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert oracle_raw(path).column(5).tolist() == [1, 0, 0, 1]
    assert oracle_raw(complete_graph(4)).column(2).tolist() == [6, 6, 6, 6]


def test_classification_complete():
    """Every connected graph on <= 4 vertices, from every vertex, has exactly one id."""
    for k in (2, 3, 4):
        seen = set()
        for mask in range(1 << (k * (k - 1) // 2)):
            if not _connected(k, mask):
                continue
            for v in range(k):
                seen.add(classify(k, mask, v))
        assert seen == {g.id for g in GRAPHLETS if g.vertex_count == k}


def test_templates_classify_to_themselves():
    for g in GRAPHLETS[1:]:
        m = _mask(g.vertex_count, g.edges)
        for v in g.incidence_orbit:
            assert classify(g.vertex_count, m, v) == g.id


def test_u16_recovered_from_templates():
    """Column l of U16 is the raw count vector of graphlet l's own template."""
    derived = np.zeros((16, 16), dtype=np.int64)
    derived[0, 0] = 1
    for g in GRAPHLETS[1:]:
        k = g.vertex_count
        _, raw = lookup_tables(k)
        for pos, gid, cnt in raw[_mask(k, g.edges)]:
            if pos == 0:
                derived[gid, g.id] += cnt
    assert np.array_equal(derived, U16)


def test_esu_matches_combinations():
    for seed in range(4):
        g = from_nx(nx.gnp_random_graph(14, 0.3, seed=seed))
        adj = [set(g.row(i).tolist()) for i in range(g.n)]
        got = sorted(tuple(sorted(s)) for s in connected_subsets(adj, 4))
        want = []
        for k in range(1, 5):
            for s in combinations(range(g.n), k):
                sub = nx.Graph()
                sub.add_nodes_from(s)
                sub.add_edges_from((a, b) for a, b in combinations(s, 2) if b in adj[a])
                if nx.is_connected(sub):
                    want.append(s)
        assert got == sorted(want)


def test_oracle_raw_dominates_net():
    for seed in range(5):
        g = from_nx(nx.gnp_random_graph(20, 0.3, seed=seed))
        raw, net = oracle_fields(g)
        assert (raw.values >= net.values).all()
        assert np.array_equal(full_u16().apply(net.values), raw.values)


def test_oracle_permutation_equivariant():
    rng = np.random.default_rng(0)
    G = nx.gnp_random_graph(15, 0.35, seed=4)
    g = from_nx(G)
    perm = rng.permutation(g.n)
    h = SparseAdjacency.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edge_pairs().tolist()])
    rg, ng = oracle_fields(g)
    rh, nh = oracle_fields(h)
    assert np.array_equal(rh.values[perm], rg.values)
    assert np.array_equal(nh.values[perm], ng.values)


def test_cap():
    g = SparseAdjacency.from_edges(10, [])
    with pytest.raises(OracleCapError):
        oracle_net(g, cap=5)


def test_cross_check_worked(worked):
    raw, net = graphlet_transform(worked)
    report = cross_check(worked, raw, net)
    assert report.passed
    assert "all legs pass" in str(report)


def test_cross_check_random():
    g = from_nx(nx.gnp_random_graph(25, 0.2, seed=7))
    assert cross_check(g, *graphlet_transform(g)).passed


def test_cross_check_subdictionary(worked):
    for spec in [(0, 1), (0, 1, 12), (0, 1, 2, 5, 9), (0, 1, 4, 15)]:
        raw, net = graphlet_transform(worked, Dictionary(spec))
        assert cross_check(worked, raw, net).passed, spec


def test_incomplete_family_can_go_negative(worked):
    # raw d7 - 2 d13 is negative at vertex index 3 once sigma9, 10, 14 are dropped
    with pytest.raises(ConversionInconsistencyError):
        graphlet_transform(worked, Dictionary((0, 1, 7, 13)))


def test_cross_check_negative_control(worked):
    raw, net = graphlet_transform(worked)
    bad = full_u16().with_entry(5, 15, 5)
    report = cross_check(worked, raw, net, U=bad)
    legs = {leg.name: leg for leg in report.legs}
    assert not report.passed
    assert legs["fast raw = oracle raw"].passed and legs["fast net = oracle net"].passed
    leg3 = legs["U * oracle net = oracle raw"]
    assert not leg3.passed
    v, k, exp, got = leg3.mismatch
    assert k == 5 and exp == WORKED_RAW[v, 5] and got == exp - 1
    assert "FAIL at vertex" in str(report)


def test_complete_family_gives_induced_counts():
    g = from_nx(nx.gnp_random_graph(18, 0.35, seed=11))
    o_net = oracle_net(g).values
    for spec in [(0, 1, 12), (0, 1, 7), (0, 1, 2, 6), (0, 1, 5, 11)]:
        raw, net = graphlet_transform(g, Dictionary(spec), complete_family=True)
        assert raw.dictionary.selected == spec
        assert np.array_equal(net.values, o_net[:, list(spec)])
