import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntree.buyatbulk import (
    Demand, DisconnectedDemand, InvalidDemand, InvalidPriceFn, PriceFn, bab_query, demand_subtree,
    edge_loads, tree_opt, tree_opt_bruteforce,
)
from dyntree.embed_full import DynamicEmbedding
from dyntree.forest import EmbedForest
from dyntree.graph import DynGraph
from dyntree.harness.generate import random_edges
from dyntree.harness.oracles import exhaustive_bab_opt

LINEAR = PriceFn("affine", (0.0, 1.0))


def example_tree():
    f = EmbedForest()
    f.add_node("r")
    f.add_node("u", leaf=True)
    f.add_node("v", leaf=True)
    f.link("u", "r", 2)
    f.link("v", "r", 3)
    return f


def random_tree(rng, n_nodes, n_leaves):
    """Random rooted tree: internal nodes 'x<i>' and leaves 0..n_leaves-1."""
    f = EmbedForest()
    internal = [f"x{i}" for i in range(max(1, n_nodes - n_leaves))]
    for i, x in enumerate(internal):
        f.add_node(x)
        if i:
            f.link(x, internal[rng.randrange(i)], rng.randint(1, 20))
    for v in range(n_leaves):
        f.add_node(v, leaf=True)
        f.link(v, rng.choice(internal), rng.choice([1, 0.5, 2.25, 7]))
    return f


def random_demands(rng, n_leaves, k):
    out = []
    for _ in range(k):
        s, t = rng.sample(range(n_leaves), 2)
        out.append(Demand(s, t, rng.choice([1, 2, 0.1, 3.7, 10])))
    return out


def test_worked_example():
    f = example_tree()
    assert tree_opt(f, [Demand("u", "v", 5)], PriceFn("affine", (1.0, 1.0))) == 30
    assert edge_loads(f, [Demand("u", "v", 5)]) == {"u": 5, "v": 5}


def test_empty_demands():
    f = example_tree()
    assert tree_opt(f, [], LINEAR) == 0
    emb = DynamicEmbedding(4, 2, 1.0, 0, max_weight=16)
    assert bab_query(emb, [], LINEAR) == 0


def test_demand_validation():
    with pytest.raises(InvalidDemand):
        Demand(1, 1, 2)
    with pytest.raises(InvalidDemand):
        Demand(1, 2, 0)
    f = example_tree()
    f.add_node("w", leaf=True)
    with pytest.raises(DisconnectedDemand):
        tree_opt(f, [Demand("u", "w", 1)], LINEAR)
    with pytest.raises(InvalidDemand):
        tree_opt(f, [Demand("u", "zz", 1)], LINEAR)


@pytest.mark.parametrize("text", [
    "affine:1,2", "power:2,0.5", "power:1,1", "minaffine:0,3;4,1;10,0.5",
])
def test_price_fn_round_trip(text):
    f = PriceFn.parse(text)
    assert PriceFn.parse(str(f)) == f
    assert f(0) == 0


@pytest.mark.parametrize("text", [
    "affine:-1,2", "power:1,1.5", "power:1,0", "minaffine:", "cubic:1,2", "affine:1", "affine:x,y",
])
def test_price_fn_rejected(text):
    with pytest.raises(InvalidPriceFn):
        PriceFn.parse(text)


def test_price_fn_values():
    assert PriceFn.parse("affine:1,2")(3) == 7
    assert PriceFn.parse("power:2,0.5")(4) == 4
    assert PriceFn.parse("minaffine:0,3;4,1")(1) == 3
    assert PriceFn.parse("minaffine:0,3;4,1")(5) == 9


def test_linear_identity():
    rng = random.Random(0)
    for _ in range(200):
        f = random_tree(rng, rng.randint(4, 60), rng.randint(2, 12))
        n_leaves = len(f.leaves)
        dems = random_demands(rng, n_leaves, rng.randint(1, 6))
        expect = math.fsum(d.dem * f.tree_distance(d.s, d.t) for d in dems)
        assert tree_opt(f, dems, LINEAR) == pytest.approx(expect, rel=1e-12)
        for d in dems:
            assert tree_opt(f, [d], LINEAR) == pytest.approx(d.dem * f.tree_distance(d.s, d.t))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["affine:1,1", "power:3,0.5", "minaffine:0,2;5,1"]))
def test_matches_bruteforce_and_subadditive(seed, fn):
    rng = random.Random(seed)
    f = random_tree(rng, rng.randint(3, 200), rng.randint(2, 30))
    if len(f.leaves) < 2:
        return
    price = PriceFn.parse(fn)
    dems = random_demands(rng, len(f.leaves), rng.randint(0, 10))
    got = tree_opt(f, dems, price)
    ref = tree_opt_bruteforce(f, dems, price)
    assert got == pytest.approx(ref, rel=1e-9, abs=1e-12)
    assert got <= math.fsum(tree_opt(f, [d], price) for d in dems) * (1 + 1e-12) + 1e-12


def test_subtree_preserves_optimum():
    rng = random.Random(4)
    for _ in range(100):
        f = random_tree(rng, rng.randint(4, 80), rng.randint(2, 15))
        dems = random_demands(rng, len(f.leaves), rng.randint(1, 5))
        terms = {x for d in dems for x in (d.s, d.t)}
        sub = demand_subtree(f, terms)
        sub.check()
        assert sub.leaves == terms
        price = PriceFn.parse("power:1,0.5")
        assert tree_opt(sub, dems, price) == pytest.approx(tree_opt(f, dems, price), rel=1e-12)


def test_query_on_embedding():
    rng = random.Random(2)
    n = 7
    edges = random_edges(n, 10, 8, rng)
    g = DynGraph.from_edges(n, edges, max_weight=8)
    price = PriceFn.parse("affine:1,1")
    ratios = []
    for seed in range(60):
        emb = DynamicEmbedding(n, 2, 1.0, seed, max_weight=8)
        for u, v, w in edges:
            emb.insert(u, v, w)
        dems = [Demand(0, 3, 2), Demand(1, 5, 1), Demand(2, 6, 3)]
        est = bab_query(emb, dems, price)
        assert est >= 0
        assert est == pytest.approx(tree_opt(emb.forest, dems, price))
        ratios.append(est / exhaustive_bab_opt(g, dems, price))
    print(f"buy-at-bulk estimate / OPT_G: mean {sum(ratios) / len(ratios):.3f}, "
          f"min {min(ratios):.3f}, max {max(ratios):.3f}")


def test_unknown_endpoint_rejected():
    emb = DynamicEmbedding(3, 2, 1.0, 0, max_weight=8)
    emb.insert(0, 1, 1)
    with pytest.raises(InvalidDemand):
        bab_query(emb, [Demand(0, 9, 1)], LINEAR)
