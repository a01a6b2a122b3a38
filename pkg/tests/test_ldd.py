import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntree.graph import DynGraph, ball, edge_key, sssp_exact
from dyntree.harness.generate import cycle_edges, dumbbell_edges, grid_edges
from dyntree.harness.oracles import cut_tolerance
from dyntree.ldd import Ldd, RecenterEvent, SplitEvent, ldd_delete, ldd_init, replay_partition
from dyntree.sampling import InvalidParameter, RngStream, radius

from strategies import decremental_cases


def make(n, edges, beta=0.2, a=1.0, seed=0, **kw):
    return ldd_init(DynGraph.from_edges(n, edges), beta, a, RngStream(seed, "ldd"), **kw)


def test_single_node():
    st_ = make(1, [])
    assert st_.partition() == {0: 0}
    assert st_.center_of(0) == 0
    assert st_.clusters[0].mu == 0


def test_parameters():
    g = DynGraph.from_edges(16, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
    st_ = ldd_init(g, 0.1, 1.0, RngStream(0))
    assert st_.p == pytest.approx(0.025)
    assert st_.rho == pytest.approx(3 * 40 * math.log(16))
    assert st_.rho == pytest.approx(332.71, abs=0.01)
    assert st_.guard == pytest.approx(6 * st_.rho)


@pytest.mark.parametrize("beta,a", [(0.0, 1), (1.0, 1), (-0.5, 1), (0.2, 0.5)])
def test_invalid_parameters(beta, a):
    with pytest.raises(InvalidParameter):
        make(3, [(0, 1, 1)], beta=beta, a=a)


def test_empty_graph_rejected():
    with pytest.raises(InvalidParameter):
        ldd_init(DynGraph(0), 0.2, 1.0, RngStream(0))


@given(st.floats(1e-6, 0.999999), st.integers(0, 40))
def test_p_stays_below_half(beta, m):
    # beta < 1 and 2 + log2 m0 >= 2, so the clamp never has to fire
    edges = [(0, i, 1) for i in range(1, m + 1)]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        st_ = make(m + 1, edges, beta=beta)
    assert st_.p < 0.5
    assert st_.p == pytest.approx(beta / (2 + math.log2(max(m, 1))))


def test_connected_small_diameter_is_one_cluster():
    st_ = make(8, cycle_edges(8))
    assert len(st_.clusters) == 1
    assert not st_.events


def test_intra_cluster_delete_keeps_partition():
    st_ = make(8, cycle_edges(8))
    before = st_.partition()
    ldd_delete(st_, 0, 1)
    assert st_.partition() == before
    st_.check(pairwise=True)


def test_dumbbell_bridge_splits():
    for seed in range(20):
        st_ = make(8, dumbbell_edges(4), seed=seed)
        assert len(st_.clusters) == 1
        ldd_delete(st_, 0, 4)
        assert st_.is_inter_cluster(0, 4)
        assert st_.n_splits >= 1
        left = {st_.cluster_of[v] for v in range(4)}
        right = {st_.cluster_of[v] for v in range(4, 8)}
        assert not (left & right)
        st_.check(pairwise=True)


def test_full_deletion_gives_singletons():
    edges = grid_edges(3, 3)
    st_ = make(9, edges, seed=4)
    for u, v, _ in edges:
        ldd_delete(st_, u, v)
        st_.check()
    assert len(st_.clusters) == 9
    assert sorted(st_.partition()) == list(range(9))
    assert len(set(st_.partition().values())) == 9


def test_forced_p_one_splits_singletons():
    edges = cycle_edges(6)
    st_ = make(6, edges, force_p=1.0)
    for u, v, _ in edges:
        ldd_delete(st_, u, v)
    splits = [e for e in st_.events if isinstance(e, SplitEvent)]
    assert splits
    assert all(len(e.child_nodes) == 1 for e in splits)


def test_recenter_rebuilds_edge_set():
    # a heavy ball forces a recenter; afterwards F excludes deleted edges
    found = False
    for seed in range(200):
        edges = dumbbell_edges(4) + [(8, 0, 1)]
        st_ = make(9, edges, seed=seed, force_p=0.05)
        st_.guard = 0.5  # any positive distance now violates
        for c in list(st_.clusters):
            st_._update(c)
        if any(isinstance(e, RecenterEvent) for e in st_.events):
            found = True
            for c in st_.clusters.values():
                for e in c.F:
                    assert st_.g.has_edge(*e)
            break
    assert found


def test_star_center_frequency():
    # K_{1,3}: the hub has degree 3 of total volume 6
    g = DynGraph.from_edges(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    N = 10**5
    hub = sum(1 for s in range(N) if Ldd(g, 0.2, 1.0, RngStream(s, "star")).center_of(0) == 0)
    assert abs(hub / N - 0.5) <= 0.01


def test_boundary_edges_recorded():
    st_ = make(8, dumbbell_edges(4), seed=1)
    ldd_delete(st_, 0, 4)
    for ev in st_.events:
        if isinstance(ev, SplitEvent):
            for u, v in ev.boundary_edges:
                assert (u in ev.child_nodes) != (v in ev.child_nodes)


def run_trace(n, edges, dels, seed, beta=0.2, a=1.0, force_p=None):
    st_ = make(n, edges, beta=beta, a=a, seed=seed, force_p=force_p)
    history = {v: [st_.cluster_of[v]] for v in range(n)}
    yield st_
    for u, v in dels:
        ldd_delete(st_, u, v)
        for x in range(n):
            if history[x][-1] != st_.cluster_of[x]:
                history[x].append(st_.cluster_of[x])
        yield st_
    # monotone refinement: ids only ever move to fresh clusters
    for seq in history.values():
        assert len(seq) == len(set(seq))
        assert seq == sorted(seq)


@settings(max_examples=60, deadline=None)
@given(decremental_cases(max_n=12, max_w=4), st.integers(0, 10**6),
       st.sampled_from([None, 0.3, 1.0]))
def test_invariants_on_random_traces(case, seed, force_p):
    n, edges, dels = case
    for st_ in run_trace(n, edges, dels, seed, force_p=force_p):
        st_.check(exact=True, pairwise=True)
        assert st_.max_depth <= 2 + math.log2(max(st_.m0, 1))
        assert replay_partition(range(n), st_.events) == st_.partition()
        for cid, c in st_.clusters.items():
            if len(c.nodes) > 1:
                d = sssp_exact(st_.g, c.center)
                assert max(d[v] for v in c.nodes) <= 6 * st_.rho


@settings(max_examples=30, deadline=None)
@given(decremental_cases(max_n=10, max_w=2), st.integers(0, 10**6))
def test_small_guard_splits_keep_invariants(case, seed):
    # a tiny diameter makes the guard fire often, exercising splits and recenters
    n, edges, dels = case
    st_ = Ldd(DynGraph.from_edges(n, edges), None, 1.0, RngStream(seed), diameter=2.0)
    st_.check(pairwise=True)
    for u, v in dels:
        st_.delete(u, v)
        st_.check(pairwise=True)
        assert replay_partition(range(n), st_.events) == st_.partition()


def test_recenters_per_cluster_bounded():
    # a = 2: recenters per cluster stay within a small multiple of a ln n
    n = 16
    edges = grid_edges(4, 4)
    worst = 0
    for seed in range(100):
        st_ = Ldd(DynGraph.from_edges(n, edges), None, 2.0, RngStream(seed), diameter=3.0)
        for u, v, _ in edges:
            st_.delete(u, v)
        worst = max([worst] + [c.recenters for c in st_.clusters.values()])
    assert worst <= 4 * 2.0 * math.log(n)


def ball_growing_cuts(n, edges, p, seed):
    """One run of the ball-growing process; returns the set of cut edges."""
    g = DynGraph.from_edges(n, edges)
    rng = RngStream(seed, "carve")
    alive = set(range(n))
    cut = set()
    while alive:
        c = min(alive)
        b = ball(g, c, radius(rng, p), within=lambda y: y in alive)
        for x in b:
            for y in g.adj[x]:
                if y in alive and y not in b:
                    cut.add(edge_key(x, y))
        alive -= b
    return cut


@pytest.mark.parametrize("p", [0.1, 0.2])
def test_ball_growing_cut_probability(p):
    # weights 1 and 2 on a cycle; each edge is cut with probability at most p w
    n = 8
    edges = [(i, (i + 1) % n, 1 + (i % 2)) for i in range(n)]
    N = 10**4
    counts = {edge_key(u, v): 0 for u, v, _ in edges}
    for s in range(N):
        for e in ball_growing_cuts(n, edges, p, s):
            counts[e] += 1
    for u, v, w in edges:
        freq = counts[edge_key(u, v)] / N
        assert freq <= cut_tolerance(p, w, N), (u, v, w, freq)
    # the process does cut: a radius-0 first ball always separates node 0
    assert counts[(0, 1)] > 0
