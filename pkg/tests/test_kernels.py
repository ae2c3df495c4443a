import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import WORKED_RAW, complete_graph, cycle_graph, from_nx, path_graph, star_graph
from fastgraphlet import (
    Dictionary,
    EdgeCollection,
    FrequencyOverflowError,
    SparseAdjacency,
    SparseRowAccumulator,
    TransformStats,
    build_adjacency,
    raw_frequencies,
)
from fastgraphlet import kernels
from fastgraphlet.kernels import (
    compute_c3_C3,
    compute_c4_d14,
    compute_d7,
    compute_d8,
    compute_d9_d10_d11,
    compute_d13,
    compute_d15,
    compute_p2,
    compute_p3,
    check_overflow,
    row_partition,
)


def p1_of(g):
    return np.diff(g.indptr).astype(np.int64)


def count_paths_from(g, length):
    """Loopless paths of the given length with an end at each vertex, by DFS."""
    out = np.zeros(g.n, dtype=np.int64)

    def walk(path):
        if len(path) == length + 1:
            out[path[0]] += 1
            return
        for w in g.row(path[-1]).tolist():
            if w not in path:
                walk(path + [w])

    for v in range(g.n):
        walk([v])
    return out


def triangle_graph():
    return complete_graph(3)


def diamond_graph():
    # cord 0-1, off-cord 2 and 3
    return SparseAdjacency.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])


def dipper_graph():
    # triangle 0,1,2 with pendant 3 at vertex 0
    return SparseAdjacency.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])


def random_graphs():
    for seed in range(6):
        yield from_nx(nx.gnp_random_graph(30, 0.2, seed=seed))
    yield from_nx(nx.random_regular_graph(4, 40, seed=3))
    yield from_nx(nx.barabasi_albert_graph(60, 3, seed=1))


# --- accumulator --------------------------------------------------------------


def test_accumulator_add_and_reset():
    acc = SparseRowAccumulator(10)
    for j, x in [(3, 1), (7, 2), (3, 4)]:
        acc.add(j, x)
    assert acc.items() == {3: 5, 7: 2}
    assert sorted(acc.indices().tolist()) == [3, 7]
    acc.reset()
    assert acc.size == 0 and not acc.values.any()
    assert acc.touches == 3


def test_accumulator_reset_touches_only_fill():
    acc = SparseRowAccumulator(5)
    acc.values[4] = 99  # sentinel outside the touched set survives a reset
    acc.add(1)
    acc.reset()
    assert acc.values.tolist() == [0, 0, 0, 0, 99]


def test_accumulator_rejects_nonpositive():
    with pytest.raises(ValueError):
        SparseRowAccumulator(3).add(0, 0)


# --- p2 / p3 ------------------------------------------------------------------


def test_p2_examples(worked):
    assert compute_p2(worked, p1_of(worked)).tolist() == [6, 9, 9, 8, 9, 3]
    g = path_graph(2)
    assert compute_p2(g, p1_of(g)).tolist() == [0, 0]
    g = path_graph(4)
    assert compute_p2(g, p1_of(g)).tolist() == [1, 1, 1, 1]


def test_p3_examples(worked):
    p1 = p1_of(worked)
    c3, _ = compute_c3_C3(worked)
    p2 = compute_p2(worked, p1)
    assert compute_p3(worked, p1, p2, c3).tolist() == [14, 12, 14, 12, 12, 8]
    for g, want in [(path_graph(4), [1, 0, 0, 1]), (triangle_graph(), [0, 0, 0])]:
        p1 = p1_of(g)
        c3, _ = compute_c3_C3(g)
        assert compute_p3(g, p1, compute_p2(g, p1), c3).tolist() == want


def test_paths_match_dfs():
    for g in random_graphs():
        p1 = p1_of(g)
        c3, _ = compute_c3_C3(g)
        p2 = compute_p2(g, p1)
        assert np.array_equal(p2, count_paths_from(g, 2))
        assert np.array_equal(compute_p3(g, p1, p2, c3), count_paths_from(g, 3))


# --- triangles ----------------------------------------------------------------


def test_c3_examples(worked):
    c3, C3 = compute_c3_C3(worked)
    assert c3.tolist() == [1, 4, 3, 3, 4, 0]
    tree = from_nx(nx.random_labeled_tree(12, seed=2))
    c3, C3 = compute_c3_C3(tree)
    assert not c3.any() and not C3.data.any()
    c3, C3 = compute_c3_C3(complete_graph(4))
    assert c3.tolist() == [3, 3, 3, 3]
    assert C3.data.tolist() == [2] * 12


def test_C3_is_masked_square():
    for g in random_graphs():
        A = sp.csr_matrix((np.ones(len(g.indices)), g.indices, g.indptr), shape=(g.n, g.n))
        ref = (A.multiply(A @ A)).toarray().astype(np.int64)
        c3, C3 = compute_c3_C3(g, workers=3)
        assert np.array_equal(C3.toarray(), ref)
        assert np.array_equal(C3.row_sums() // 2, c3)


# --- 4-cycles and the fused P2-row pass --------------------------------------


def test_c4_d14_examples(worked):
    c4, d14 = compute_c4_d14(worked)
    assert c4.tolist() == [2, 5, 4, 4, 5, 0]
    assert d14.tolist() == [0, 5, 3, 3, 5, 0]
    c4, d14 = compute_c4_d14(cycle_graph(4))
    assert c4.tolist() == [1, 1, 1, 1] and d14.tolist() == [0, 0, 0, 0]
    c4, d14 = compute_c4_d14(from_nx(nx.random_labeled_tree(15, seed=0)))
    assert not c4.any() and not d14.any()


def test_fused_pass_matches_materialized_P2():
    graphs = list(random_graphs()) + [from_nx(nx.gnp_random_graph(200, 0.05, seed=11))]
    for g in graphs:
        A = sp.csr_matrix((np.ones(len(g.indices), dtype=np.int64), g.indices, g.indptr), shape=(g.n, g.n))
        P2 = (A @ A).toarray()
        np.fill_diagonal(P2, 0)
        C42 = P2 * (P2 - 1)
        want_c4 = C42.sum(axis=1) // 2
        want_d14 = (A.toarray() * C42).sum(axis=1) // 2
        for workers in (1, 4):
            c4, d14 = compute_c4_d14(g, workers=workers)
            assert np.array_equal(c4, want_c4)
            assert np.array_equal(d14, want_d14)


def test_p2_touch_count():
    for g in random_graphs():
        stats = TransformStats()
        compute_c4_d14(g, stats=stats)
        deg = p1_of(g)
        assert stats.p2_touches == int((deg * (deg - 1)).sum())
        assert stats.p2_touches <= 2 * g.d_max * g.m


# --- claws and dippers --------------------------------------------------------


def test_d7_examples(worked):
    assert compute_d7(worked, p1_of(worked)).tolist() == [6, 7, 9, 7, 7, 3]
    g = star_graph(3)
    assert compute_d7(g, p1_of(g)).tolist() == [0, 1, 1, 1]
    g = triangle_graph()
    assert compute_d7(g, p1_of(g)).tolist() == [0, 0, 0]


def test_d8_examples(worked):
    assert compute_d8(p1_of(worked)).tolist() == [0, 4, 1, 4, 4, 0]
    assert compute_d8(np.array([2, 6, 0, 1])).tolist() == [0, 20, 0, 0]


def test_d8_large_degree_exact():
    from math import comb

    p = np.array([2_500, 10**5, 2 * 10**6], dtype=np.int64)
    assert compute_d8(p).tolist() == [comb(int(x), 3) for x in p]


def test_dippers_examples(worked):
    p1 = p1_of(worked)
    c3, C3 = compute_c3_C3(worked)
    d9, d10, d11 = compute_d9_d10_d11(worked, p1, c3, C3)
    assert d9.tolist() == [6, 3, 5, 5, 3, 3]
    assert d10.tolist() == [4, 12, 12, 10, 12, 0]
    assert d11.tolist() == [0, 8, 3, 6, 8, 0]

    g = triangle_graph()
    p1 = p1_of(g)
    c3, C3 = compute_c3_C3(g)
    for v in compute_d9_d10_d11(g, p1, c3, C3):
        assert not v.any()

    g = dipper_graph()
    p1 = p1_of(g)
    c3, C3 = compute_c3_C3(g)
    d9, d10, d11 = compute_d9_d10_d11(g, p1, c3, C3)
    assert d11.tolist() == [1, 0, 0, 0]
    assert d9.tolist() == [0, 0, 0, 1]
    assert d10.tolist() == [0, 1, 1, 0]


# --- diamonds and cliques -----------------------------------------------------


def test_d13_examples(worked):
    _, C3 = compute_c3_C3(worked)
    assert compute_d13(worked, C3).tolist() == [2, 3, 4, 4, 3, 0]
    g = cycle_graph(6)
    _, C3 = compute_c3_C3(g)
    assert not compute_d13(g, C3).any()
    g = diamond_graph()
    _, C3 = compute_c3_C3(g)
    assert compute_d13(g, C3).tolist() == [0, 0, 1, 1]


def test_d15_examples(worked):
    assert compute_d15(worked).tolist() == [0, 1, 1, 1, 1, 0]
    assert compute_d15(complete_graph(4)).tolist() == [1] * 4
    assert compute_d15(complete_graph(5)).tolist() == [4] * 5


def test_d15_counts_cliques():
    for g in random_graphs():
        G = nx.Graph(g.edge_pairs().tolist())
        G.add_nodes_from(range(g.n))
        want = np.zeros(g.n, dtype=np.int64)
        for clique in nx.enumerate_all_cliques(G):
            if len(clique) == 4:
                want[clique] += 1
        for workers in (1, 3):
            assert np.array_equal(compute_d15(g, workers=workers), want)


# --- driver -------------------------------------------------------------------


def test_raw_frequencies_worked(worked):
    raw = raw_frequencies(worked)
    assert np.array_equal(raw.values, WORKED_RAW)


def test_raw_frequencies_edgeless():
    g = build_adjacency(EdgeCollection(np.zeros((0, 2)), declared_n=4))
    raw = raw_frequencies(g)
    assert raw.column(0).tolist() == [1] * 4
    assert not raw.values[:, 1:].any()


def test_raw_frequencies_subdictionary(worked):
    raw = raw_frequencies(worked, Dictionary((0, 1, 4)))
    assert np.array_equal(raw.values, WORKED_RAW[:, [0, 1, 4]])


def test_subdictionary_runs_only_needed_kernels(worked):
    stats = TransformStats()
    raw_frequencies(worked, Dictionary((0, 1, 12)), stats=stats)
    assert set(stats.timings) == {"p1", "p2_rows"}


@pytest.mark.parametrize("threads", [1, 2, 3, 8])
def test_worker_count_does_not_change_result(threads):
    g = from_nx(nx.gnp_random_graph(120, 0.08, seed=5))
    assert np.array_equal(raw_frequencies(g, threads=threads).values, raw_frequencies(g, threads=1).values)


def test_row_partition_balanced():
    indptr = np.array([0, 5, 5, 6, 20, 21])
    b = row_partition(indptr, 3)
    assert b[0] == 0 and b[-1] == 5 and np.all(np.diff(b) >= 0)
    assert row_partition(np.array([0]), 4).tolist() == [0, 0, 0, 0, 0]


@st.composite
def graph_and_perm(draw):
    n = draw(st.integers(1, 14))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=45))
    perm = draw(st.permutations(range(n)))
    return n, [(u, v) for u, v in pairs if u != v], np.array(perm)


@given(graph_and_perm())
@settings(max_examples=80, deadline=None)
def test_permutation_equivariance(case):
    n, pairs, perm = case
    g = SparseAdjacency.from_edges(n, pairs)
    h = SparseAdjacency.from_edges(n, [(perm[u], perm[v]) for u, v in pairs])
    raw_g = raw_frequencies(g).values
    raw_h = raw_frequencies(h).values
    assert np.array_equal(raw_h[perm], raw_g)


@given(graph_and_perm())
@settings(max_examples=60, deadline=None)
def test_rectified_values_nonnegative_and_sums(case):
    n, pairs, _ = case
    g = SparseAdjacency.from_edges(n, pairs)
    raw = raw_frequencies(g)
    assert (raw.values >= 0).all()
    assert raw.column(1).sum() == 2 * g.m
    G = nx.Graph(g.edge_pairs().tolist())
    # nx.triangles counts per vertex, so its sum is already 3 * #triangles
    assert raw.column(4).sum() == sum(nx.triangles(G).values())


# --- overflow -----------------------------------------------------------------


def test_check_overflow_reports_graphlet_and_vertex(worked):
    p1 = p1_of(worked)
    check_overflow(worked, Dictionary.full(), p1)
    with pytest.raises(FrequencyOverflowError) as exc:
        check_overflow(worked, Dictionary.full(), p1, limit=10)
    # A p1 exceeds 10 first at vertex 2 (internal id 1): 2 + 3 + 4 + 4
    assert (exc.value.graphlet, exc.value.vertex) == (2, 1)


def test_overflow_propagates_from_driver(worked, monkeypatch):
    monkeypatch.setattr(kernels, "_OVERFLOW_SAFE_DMAX", 0)
    monkeypatch.setattr(kernels, "_INT_LIMIT", 20)
    with pytest.raises(FrequencyOverflowError) as exc:
        raw_frequencies(worked, Dictionary((0, 1, 8)))
    assert exc.value.graphlet == 8
    raw_frequencies(worked, Dictionary((0, 1, 4)))
