"""Decremental probabilistic tree embedding built from one decomposition per level.

Level ``i`` (1..L) runs a decremental decomposition whose clusters have center
distance at most ``Delta / 2**i``; level 0 holds the connected components and
level L+1 the vertices themselves.  The tree has one node per cluster per
level; a level-(i+1) node hangs below the level-i cluster of its
representative (smallest member) with weight ``Delta / 2**i``.

Whenever a cluster splits at level ``i``, the edges between the two parts are
deleted from every deeper level, which keeps deeper clusters nested inside
shallower ones.
"""

from __future__ import annotations

import math

from dyntree.forest import EmbedForest
from dyntree.graph import DynGraph, connected_component, edge_key
from dyntree.ldd import Ldd, SplitEvent
from dyntree.sampling import RngStream


def level_count(n: int, max_weight: float) -> int:
    """L = ceil(log2(n W)) with n W rounded up to an integer."""
    x = max(1, math.ceil(n * max_weight))
    return (x - 1).bit_length()


class DecrEmbedding:
    def __init__(
        self,
        g: DynGraph,
        a: float = 1.0,
        rng: RngStream | None = None,
        *,
        max_weight: float | None = None,
        tag: str = "",
        record_feed: bool = False,
        force_p: float | None = None,
    ):
        self.g = g.copy()
        self.a = float(a)
        self.rng = rng if rng is not None else RngStream(0)
        self.tag = tag
        n = g.n
        self.n = n
        self.m0 = g.m
        W = g.max_weight if max_weight is None else max_weight
        self.L = L = level_count(n, W)
        self.delta = float(2**L)
        self.forest = EmbedForest(record_feed)
        self.change_count: dict[int, int] = {v: 0 for v in g.nodes()}
        self.clamped: list[bool] = [False] * (L + 1)

        nodes = sorted(g.nodes())
        # per-level vertex -> cluster id, cluster members, representatives
        self.cl: list[dict[int, int]] = [{v: 0 for v in nodes} for _ in range(L + 1)]
        self.members: list[dict[int, set]] = [{0: set(nodes)} for _ in range(L + 1)]
        self.rep: list[dict[int, int]] = [{0: nodes[0]} for _ in range(L + 1)]
        self.rep_of: list[dict[int, int]] = [{nodes[0]: 0} for _ in range(L + 1)]
        self.n_splits = [0] * (L + 1)
        self._next_comp = 0

        f = self.forest
        for i in range(L + 1):
            f.add_node(self.tnode(i, 0))
            if i > 0:
                f.link(self.tnode(i, 0), self.tnode(i - 1, 0), self.delta / 2 ** (i - 1))
        for v in nodes:
            f.add_node(v, leaf=True)
            f.link(v, self.tnode(L, 0), 1.0)

        self.levels: list[Ldd | None] = [None] * (L + 1)
        ln_n = math.log(n) if n > 1 else 0.0
        cap = 2 + math.log2(max(self.m0, 1))
        for i in range(L, 0, -1):
            eta = self.delta / 2**i
            beta_i = 6 * (self.a + 2) * cap * ln_n / eta
            singletons = n == 1 or beta_i >= 1.0
            self.clamped[i] = singletons
            self.levels[i] = Ldd(
                self.g, None if singletons else beta_i, self.a, self.rng.child(f"level={i}"),
                diameter=None if singletons else eta,
                singletons=singletons,
                force_p=force_p,
                on_split=lambda ev, i=i: self._on_split(i, ev),
                log_events=False,
            )
        self._split_components(nodes)
        f.pop_changed_leaves()

    # -- helpers -----------------------------------------------------------

    def tnode(self, i: int, cid: int):
        return ("c", self.tag, i, cid)

    def _on_split(self, i: int, ev: SplitEvent) -> None:
        self.update_cluster_information(i, ev.child, ev.child_nodes, ev.parent, ev.parent_emptied)
        if i < self.L:
            for u, v in ev.boundary_edges:
                for j in range(i + 1, self.L + 1):
                    self.levels[j].delete(u, v)

    def update_cluster_information(self, i: int, bid: int, bnodes, cid: int, emptied: bool) -> None:
        f = self.forest
        L = self.L
        cl = self.cl[i]
        mem = self.members[i]
        bset = set(bnodes)
        u = min(bset)
        bnode = self.tnode(i, bid)
        f.add_node(bnode)
        if i > 0:
            f.link(bnode, self.tnode(i - 1, self.cl[i - 1][u]), self.delta / 2 ** (i - 1))
        self.rep[i][bid] = u
        self.rep_of[i][u] = bid
        mem[bid] = bset
        mem[cid] -= bset
        w_child = self.delta / 2**i
        for v in sorted(bset):
            cl[v] = bid
            if i == L:
                f.relink(v, bnode, w_child)
            else:
                c2 = self.rep_of[i + 1].get(v)
                if c2 is not None:
                    f.relink(self.tnode(i + 1, c2), bnode, w_child)
        old_rep = self.rep[i].get(cid)
        if old_rep is not None and old_rep in bset:
            del self.rep[i][cid]
            del self.rep_of[i][old_rep]
            if old_rep == u:
                self.rep_of[i][u] = bid
            if not emptied:
                u2 = min(mem[cid])
                self.rep[i][cid] = u2
                self.rep_of[i][u2] = cid
                if i > 0:
                    f.relink(self.tnode(i, cid), self.tnode(i - 1, self.cl[i - 1][u2]),
                             self.delta / 2 ** (i - 1))
        if emptied:
            assert not mem[cid]
            del mem[cid]
            f.remove_node(self.tnode(i, cid))
        self.n_splits[i] += 1

    def _split_components(self, seeds) -> None:
        """Refine level 0 so that every cluster is one connected component."""
        cl0 = self.cl[0]
        mem0 = self.members[0]
        for s in seeds:
            while True:
                cid = cl0[s]
                comp = connected_component(self.g, s)
                if len(comp) == len(mem0[cid]):
                    break
                if self.rep[0][cid] in comp:
                    comp = connected_component(self.g, min(mem0[cid] - comp))
                self._next_comp += 1
                self.update_cluster_information(0, self._next_comp, comp, cid, False)

    # -- public API --------------------------------------------------------

    def delete(self, u: int, v: int) -> list[int]:
        """Delete edge (u, v); returns the vertices whose root path changed."""
        self.g.delete_edge(u, v)
        for i in range(self.L, 0, -1):
            self.levels[i].delete(u, v)
        if self.cl[0][u] == self.cl[0][v] and v not in connected_component(self.g, u):
            self._split_components((u, v))
        changed = self.forest.pop_changed_leaves()
        for x in changed:
            self.change_count[x] += 1
        return changed

    def root_path(self, v: int):
        return self.forest.root_path(v)

    def tree_distance(self, u: int, v: int) -> float:
        return self.forest.tree_distance(u, v)

    def separation_level(self, u: int, v: int) -> int:
        """Largest i with u, v in the same level-i cluster (-1 across components)."""
        best = -1
        for i in range(self.L + 1):
            if self.cl[i][u] != self.cl[i][v]:
                break
            best = i
        return best

    def check(self, exact: bool = False) -> None:
        f = self.forest
        f.check()
        L = self.L
        assert f.leaves == set(self.g.adj), "leaf set differs from vertex set"
        assert f.height() <= L + 2, "height bound violated"
        for i in range(1, L + 1):
            ldd = self.levels[i]
            assert ldd.cluster_of == self.cl[i], f"level {i} cluster map out of sync"
            ldd.check(exact=exact)
        for v in f.leaves:
            path = f.path_nodes(v)
            assert len(path) == L + 2, f"root path of {v} has {len(path)} nodes"
            for k in range(L + 1):
                lvl = L - k
                assert path[k + 1] == self.tnode(lvl, self.cl[lvl][v]), (
                    f"ancestor of {v} at level {lvl} wrong"
                )
                assert f.weight[path[k]] == self.delta / 2**lvl, f"weight below level {lvl}"
        # each vertex represents at most one cluster per level, and reps are members
        for i in range(L + 1):
            for cid, r in self.rep[i].items():
                assert self.cl[i][r] == cid
                assert self.rep_of[i][r] == cid
            assert set(self.rep[i]) == set(self.members[i])
        # hierarchy invariant: level graphs are nested and inter-cluster edges leave deeper levels
        for u, v, _ in self.g.edges():
            assert self.cl[0][u] == self.cl[0][v], "edge across components"
        for i in range(1, L + 1):
            gi = self.levels[i].g
            cli = self.cl[i]
            for u, v, _ in gi.edges():
                assert self.g.has_edge(u, v), f"level {i} keeps a deleted edge"
                if i > 1:
                    assert self.levels[i - 1].g.has_edge(u, v), f"level {i} not nested in {i - 1}"
                if cli[u] != cli[v]:
                    for j in range(i + 1, L + 1):
                        assert not self.levels[j].g.has_edge(u, v), (
                            f"edge {edge_key(u, v)} inter-cluster at {i} still in level {j}"
                        )


def embed_init(g: DynGraph, a: float, rng: RngStream, **kw) -> DecrEmbedding:
    return DecrEmbedding(g, a, rng, **kw)


def embed_delete(h: DecrEmbedding, u: int, v: int) -> list[int]:
    return h.delete(u, v)
