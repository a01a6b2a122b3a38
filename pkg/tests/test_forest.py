import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyntree.forest import EmbedForest, ForestError
from dyntree.graph import INF, DynGraph, sssp_exact


def small_tree():
    # r -> a (2) -> leaves 0 (1), 1 (1); r -> 2 (3)
    f = EmbedForest(record_feed=True)
    for x in ("r", "a"):
        f.add_node(x)
    for v in (0, 1, 2):
        f.add_node(v, leaf=True)
    f.link("a", "r", 2)
    f.link(0, "a", 1)
    f.link(1, "a", 1)
    f.link(2, "r", 3)
    return f


def test_paths_and_distances():
    f = small_tree()
    f.check()
    assert f.root_path(0) == [(0, 1), ("a", 2), ("r", 0.0)]
    assert f.tree_distance(0, 1) == 2
    assert f.tree_distance(0, 2) == 6
    assert f.tree_distance(2, 2) == 0
    assert f.tree_path_edges(0, 2) == [(0, "a"), ("a", "r"), (2, "r")]
    assert f.height() == 2
    assert f.roots() == ["r"]
    assert sorted(f.subtree_leaves("a")) == [0, 1]


def test_separate_trees():
    f = small_tree()
    f.add_node(9, leaf=True)
    assert f.tree_distance(0, 9) == INF
    assert f.tree_path_edges(0, 9) is None
    assert f.all_pairs([0, 9])[(9, 0)] == INF


def test_relink_and_changed_leaves():
    f = small_tree()
    f.pop_changed_leaves()
    assert f.pop_changed_leaves() == []
    f.relink(1, "r", 5)
    assert f.pop_changed_leaves() == [1]
    f.relink(1, "r", 5)
    assert f.pop_changed_leaves() == []
    f.relink("a", "r", 4)
    assert f.pop_changed_leaves() == [0]


def test_errors():
    f = small_tree()
    with pytest.raises(ForestError):
        f.add_node("a")
    with pytest.raises(ForestError):
        f.link(0, "r", 1)
    with pytest.raises(ForestError):
        f.remove_node("a")
    with pytest.raises(ForestError):
        f.link("zz", "r", 1)


def test_cycle_detected():
    f = small_tree()
    # the API refuses to close a loop, so corrupt the maps directly
    f.parent["r"] = "a"
    f.children["a"].add("r")
    f.weight["r"] = 1
    with pytest.raises(ForestError):
        f.check()


def test_feed_records_edits():
    f = small_tree()
    feed = f.drain_feed()
    assert ("link", "a", "r", 2) in feed
    f.cut(2)
    assert f.drain_feed() == [("cut", 2, "r")]
    assert f.drain_feed() == []


@st.composite
def random_trees(draw):
    n = draw(st.integers(1, 20))
    parents = [None] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    weights = [draw(st.integers(1, 9)) for _ in range(n)]
    return parents, weights


@given(random_trees())
def test_tree_distance_matches_dijkstra(tree):
    parents, weights = tree
    n = len(parents)
    f = EmbedForest()
    g = DynGraph(n)
    for v in range(n):
        f.add_node(v, leaf=True)
    for v in range(1, n):
        f.link(v, parents[v], weights[v])
        g.insert_edge(v, parents[v], weights[v])
    f.check()
    cache = {}
    for s in range(n):
        d = sssp_exact(g, s)
        for t in range(n):
            assert f.tree_distance(s, t) == d[t] == f.tree_distance(t, s)
            edges = f.tree_path_edges(s, t)
            assert sum(f.weight[c] for c, _ in edges) == d[t]
            assert f.tree_path_edges(s, t, cache) == edges
    ap = f.all_pairs(range(n))
    assert all(ap[(s, t)] == f.tree_distance(s, t) for s in range(n) for t in range(n))
