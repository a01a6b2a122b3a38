"""Fully dynamic tree embedding by phases over a decremental one.

At depth 1 the embedding is a static FRT tree recomputed after every update.
At depth ``i >= 2`` updates are grouped into phases of ``k`` updates.  A phase
starts a decremental embedding ``A`` on the current edge set ``F``.  Edges
inserted during the phase (``I``) are handled by a depth-(i-1) instance ``B``
running on the auxiliary graph ``H``: the inserted edges plus the union ``P``
of the ``A``-root-paths of their endpoints.  The output forest takes ``A``
with the ``P`` edges removed and hangs every node of ``H`` below its parent
in ``B``'s forest.

Before the first phase the depth-(i-1) instance simply runs on the graph
itself.  ``DynamicEmbedding`` adds the edge-count doubling restart on top.
"""

from __future__ import annotations

import math

from dyntree.embed_decr import DecrEmbedding, level_count
from dyntree.forest import EmbedForest, ForestError
from dyntree.frt import frt_embed
from dyntree.graph import DEFAULT_MAX_WEIGHT, DynGraph, edge_key
from dyntree.sampling import RngStream


class CompositionCycle(AssertionError):
    pass


class Registry:
    """Dense integer ids for arbitrary hashable vertex names, in first-seen order."""

    def __init__(self):
        self.dense: dict = {}
        self.ext: list = []

    def get(self, x) -> int:
        d = self.dense.get(x)
        if d is None:
            d = len(self.ext)
            self.dense[x] = d
            self.ext.append(x)
        return d

    def __contains__(self, x) -> bool:
        return x in self.dense

    def __len__(self) -> int:
        return len(self.ext)


def phase_length(m_bound: int, depth: int) -> int:
    """ceil(m_bound ** (1 - 1/depth)), i.e. the least k with k**depth >= m_bound**(depth-1)."""
    target = m_bound ** (depth - 1)
    k = max(1, math.floor(m_bound ** (1.0 - 1.0 / depth)) - 1)
    while k**depth < target:
        k += 1
    return k


def auto_depth(n: int, max_weight: float) -> int:
    """Depth balancing phase length against stretch: ceil(sqrt(log2 n) / log2 log2(nW))."""
    if n < 2:
        return 1
    inner = math.log2(max(math.log2(n * max_weight), 2.0))
    return max(1, math.ceil(math.sqrt(math.log2(n)) / inner))


class FullState:
    def __init__(
        self,
        depth: int,
        m_bound: int,
        a: float,
        rng: RngStream,
        *,
        max_weight: float = DEFAULT_MAX_WEIGHT,
        keep_isolated: bool = True,
        n: int = 0,
    ):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.m_bound = m_bound
        self.a = a
        self.rng = rng
        self.W = float(max_weight)
        self.keep_isolated = keep_isolated
        self.reg = Registry()
        self.g = DynGraph(0, self.W)
        self.version = 0
        self._out: EmbedForest | None = None
        self._out_version = -1
        self.phase = -1
        self.mode = "base" if depth == 1 else "pre"
        self.k = phase_length(m_bound, depth) if depth >= 2 else 0
        self.updates_in_phase = 0
        self.h_updates = 0
        self.h_updates_per_phase: list[int] = []
        self.max_h_nodes = 0
        self.pre: FullState | None = None
        self.A: DecrEmbedding | None = None
        self.B: FullState | None = None
        if depth >= 2:
            self.pre = FullState(depth - 1, m_bound, a, rng, max_weight=self.W,
                                 keep_isolated=keep_isolated)
        for x in range(n):
            self.add_vertex(x)

    # -- vertices ----------------------------------------------------------

    def add_vertex(self, x) -> int:
        if x in self.reg:
            return self.reg.dense[x]
        d = self.reg.get(x)
        self.g.add_node(d)
        if self.pre is not None:
            self.pre.add_vertex(x)
        self.version += 1
        return d

    # -- phases ------------------------------------------------------------

    def _maybe_rollover(self) -> None:
        if self.depth >= 2 and self.updates_in_phase >= self.k:
            self._start_phase()

    def _start_phase(self) -> None:
        if self.mode == "phase":
            self.h_updates_per_phase.append(self.h_updates)
        self.phase += 1
        self.mode = "phase"
        self.pre = None
        prng = self.rng.child(f"phase={self.phase}")
        arng = prng.child("A")
        self.A = DecrEmbedding(self.g, self.a, arng, max_weight=self.W, tag=arng.tag) if self.g.n else None
        self.F: set[tuple[int, int]] = {(u, v) for u, v, _ in self.g.edges()}
        self.I: dict[tuple[int, int], float] = {}
        self.D: set[tuple[int, int]] = set()
        self.ucount: dict[int, int] = {}
        self.upath: dict[int, tuple] = {}
        self.pcount: dict[tuple, int] = {}
        self.pweight: dict[tuple, float] = {}
        L_A = self.A.L if self.A is not None else 0
        w_inner = max(self.W, self.A.delta if self.A is not None else 1.0)
        self.B = FullState(self.depth - 1, 2 * self.k * (L_A + 2), self.a, prng.child("B"),
                           max_weight=w_inner, keep_isolated=False)
        self.updates_in_phase = 0
        self.h_updates = 0

    def _path(self, u: int) -> tuple:
        """Tree edges ``(child, parent, weight)`` on u's root path in ``A``."""
        if self.A is None or u not in self.A.forest:
            return ()
        rp = self.A.forest.root_path(u)
        return tuple((rp[k][0], rp[k + 1][0], rp[k][1]) for k in range(len(rp) - 1))

    def _add_path(self, path: tuple) -> None:
        for c, p, w in path:
            e = (c, p)
            cnt = self.pcount.get(e, 0)
            if cnt == 0:
                self.B.insert(c, p, w)
                self.pweight[e] = w
                self.h_updates += 1
            self.pcount[e] = cnt + 1

    def _remove_path(self, path: tuple) -> None:
        for c, p, _ in path:
            e = (c, p)
            cnt = self.pcount[e] - 1
            if cnt == 0:
                del self.pcount[e]
                del self.pweight[e]
                self.B.delete(c, p)
                self.h_updates += 1
            else:
                self.pcount[e] = cnt

    def _track_h_size(self) -> None:
        h = self.h_node_count()
        if h > self.max_h_nodes:
            self.max_h_nodes = h

    # -- updates -----------------------------------------------------------

    def insert(self, x, y, w: float) -> None:
        self._maybe_rollover()
        u = self.add_vertex(x)
        v = self.add_vertex(y)
        self.g.insert_edge(u, v, w)
        self.version += 1
        if self.mode == "base":
            return
        self.updates_in_phase += 1
        if self.mode == "pre":
            self.pre.insert(x, y, w)
            return
        self.I[edge_key(u, v)] = float(w)
        for z in (u, v):
            cnt = self.ucount.get(z, 0)
            if cnt == 0:
                path = self._path(z)
                self.upath[z] = path
                self._add_path(path)
            self.ucount[z] = cnt + 1
        self.B.insert(u, v, w)
        self.h_updates += 1
        self._track_h_size()

    def delete(self, x, y) -> None:
        self._maybe_rollover()
        u = self.reg.dense[x]
        v = self.reg.dense[y]
        self.g.delete_edge(u, v)
        self.version += 1
        if self.mode == "base":
            return
        self.updates_in_phase += 1
        if self.mode == "pre":
            self.pre.delete(x, y)
            return
        key = edge_key(u, v)
        if key in self.I:
            del self.I[key]
            self.B.delete(u, v)
            self.h_updates += 1
            for z in (u, v):
                cnt = self.ucount[z] - 1
                if cnt == 0:
                    del self.ucount[z]
                    self._remove_path(self.upath.pop(z))
                else:
                    self.ucount[z] = cnt
        else:
            self.D.add(key)
            changed = self.A.delete(u, v)
            for z in sorted(changed):
                old = self.upath.get(z)
                if old is None:
                    continue
                new = self._path(z)
                if new != old:
                    # add first so shared edges never leave H
                    self._add_path(new)
                    self._remove_path(old)
                    self.upath[z] = new
        self._track_h_size()

    # -- output ------------------------------------------------------------

    @property
    def forest(self) -> EmbedForest:
        if self._out_version != self.version:
            self._out = self._compose()
            self._out_version = self.version
        return self._out

    def _included(self) -> list[int]:
        if self.keep_isolated:
            return list(range(len(self.reg)))
        return [u for u in range(len(self.reg)) if self.g.adj[u]]

    def _compose(self) -> EmbedForest:
        if self.mode == "base":
            ext = self.reg.ext
            return frt_embed(self.g, self.rng.fresh(), max_weight=self.W, nodes=self._included(),
                             tag=self.rng.tag, leaf_id=ext.__getitem__)
        if self.mode == "pre":
            return self.pre.forest
        return self._compose_phase()

    def _cid(self, x):
        return self.reg.ext[x] if isinstance(x, int) else x

    def _compose_phase(self) -> EmbedForest:
        out = EmbedForest()
        fa = self.A.forest if self.A is not None else EmbedForest()
        fb = self.B.forest
        cid = self._cid
        excluded = set()
        if not self.keep_isolated and self.A is not None:
            for u in self.A.g.adj:
                if not self.g.adj[u]:
                    excluded.update(fa.path_nodes(u))
        ours = [x for x in fa.nodes() if x not in excluded]
        in_a = set(fa.leaves)
        for u in range(len(self.reg)):
            if u not in in_a and (self.keep_isolated or self.g.adj[u]):
                ours.append(u)
        for x in ours:
            out.add_node(cid(x), leaf=isinstance(x, int))
        for y in fb.nodes():
            if y not in fb.leaves:
                out.add_node(y)
        for y, p in fb.parent.items():
            if y not in fb.leaves:
                out.link(y, p, fb.weight[y])
        for x in ours:
            if x in fb.children:
                p = fb.parent.get(x)
                if p is not None:
                    out.link(cid(x), p, fb.weight[x])
            else:
                p = fa.parent.get(x)
                if p is not None:
                    assert p not in excluded
                    out.link(cid(x), cid(p), fa.weight[x])
        try:
            out.check()
        except ForestError as exc:
            raise CompositionCycle(str(exc)) from exc
        return out

    def tree_distance(self, x, y) -> float:
        return self.forest.tree_distance(x, y)

    def root_path(self, x):
        return self.forest.root_path(x)

    # -- introspection -----------------------------------------------------

    def h_node_count(self) -> int:
        if self.mode != "phase":
            return 0
        nodes = set()
        for c, p in self.pcount:
            nodes.add(c)
            nodes.add(p)
        for u, v in self.I:
            nodes.add(u)
            nodes.add(v)
        return len(nodes)

    def level_bound(self) -> int:
        return level_count(max(len(self.reg), 1), self.W)

    def check(self) -> None:
        """Structural hard assertions, recursively through inner instances."""
        out = self.forest
        out.check()
        if self.mode == "pre":
            self.pre.check()
            return
        if self.mode == "base":
            assert out.height() <= self.level_bound() + 1
            return
        fa = self.A.forest if self.A is not None else EmbedForest()
        fb = self.B.forest
        h_a = fa.height() if fa.leaves else 0
        h_b = fb.height() if fb.leaves else 0
        assert out.height() <= h_a + h_b, f"composed height {out.height()} > {h_a} + {h_b}"
        if self.A is not None:
            self.A.check()
        L_A = self.A.L if self.A is not None else 0
        hn = self.h_node_count()
        assert hn <= 2 * self.updates_in_phase * (L_A + 3), (
            f"|V(H)| = {hn} exceeds 2 * {self.updates_in_phase} * {L_A + 3}"
        )
        # multiplicities match the stored root paths, H matches B's graph
        cnt: dict = {}
        for z, path in self.upath.items():
            for c, p, _ in path:
                cnt[(c, p)] = cnt.get((c, p), 0) + 1
        assert cnt == self.pcount, "path multiplicities out of sync"
        ends = {}
        for u, v in self.I:
            ends[u] = ends.get(u, 0) + 1
            ends[v] = ends.get(v, 0) + 1
        assert ends == self.ucount, "U out of sync with I"
        bg = self.B.g
        breg = self.B.reg.dense
        h_edges = len(self.pcount) + len(self.I)
        assert bg.m == h_edges, "inner graph size differs from H"
        for c, p in self.pcount:
            assert bg.has_edge(breg[c], breg[p])
        for u, v in self.I:
            assert bg.has_edge(breg[u], breg[v])
        assert self.D <= self.F, "deleted edges outside F"
        if self.A is not None:
            assert {(u, v) for u, v, _ in self.A.g.edges()} == self.F - self.D, "A out of sync with F \\ D"
        self.B.check()

    def tree_edges(self) -> set:
        out = self.forest
        return {frozenset((x, p)) for x, p in out.parent.items()}

    def check_decomposition(self) -> None:
        """Each live edge's T_A path, with P edges swapped for B-paths, lies in the output."""
        if self.mode == "pre":
            self.pre.check_decomposition()
            return
        if self.mode == "base":
            return
        tc = self.tree_edges()
        fa = self.A.forest if self.A is not None else EmbedForest()
        fb = self.B.forest
        cid = self._cid
        a_cache: dict = {}
        b_cache: dict = {}
        b_ok: dict = {}

        def b_path_ok(x, y) -> bool:
            key = (x, y)
            ok = b_ok.get(key)
            if ok is None:
                path = fb.tree_path_edges(x, y, b_cache)
                ok = path is not None and all(frozenset((cid(a), cid(b))) in tc for a, b in path)
                b_ok[key] = ok
            return ok

        for u, v, _ in self.g.edges():
            key = (u, v)
            if key in self.I:
                assert b_path_ok(u, v), f"inserted edge {key} has no B detour in output"
                continue
            path = fa.tree_path_edges(u, v, a_cache)
            assert path is not None, f"edge {key} spans two trees of A"
            for c, p in path:
                if (c, p) in self.pcount:
                    assert b_path_ok(c, p), f"P edge {(c, p)} lacks its B detour"
                else:
                    assert frozenset((cid(c), cid(p))) in tc, f"A edge {(c, p)} missing"
        self.B.check_decomposition()

    def insert_free_matches_a(self) -> bool | None:
        """With no live insertions in the phase, output distances equal A's (None if not applicable)."""
        if self.mode != "phase" or self.I or self.A is None:
            return None
        out = self.forest
        ext = self.reg.ext
        n = len(self.reg)
        for u in range(n):
            for v in range(u + 1, n):
                if out.tree_distance(ext[u], ext[v]) != self.A.tree_distance(u, v):
                    return False
        return True


class DynamicEmbedding:
    """Fully dynamic embedding over vertices ``0..n-1`` with edge-count doubling."""

    def __init__(
        self,
        n: int,
        depth: int = 2,
        a: float = 1.0,
        seed: int = 0,
        *,
        max_weight: float = DEFAULT_MAX_WEIGHT,
        m_bound: int = 4,
        tag: str = "full",
    ):
        self.n = n
        self.depth = depth
        self.a = a
        self.W = float(max_weight)
        self.m_bound = m_bound
        self.rng = RngStream(seed, tag)
        self.g = DynGraph(n, self.W)
        self.restarts = 0
        self.state = self._fresh()

    def _fresh(self) -> FullState:
        return FullState(self.depth, self.m_bound, self.a, self.rng.child(f"restart={self.restarts}"),
                         max_weight=self.W, keep_isolated=True, n=self.n)

    def insert(self, u: int, v: int, w: float) -> None:
        self.g.insert_edge(u, v, w)
        if self.g.m > self.m_bound:
            while self.m_bound < self.g.m:
                self.m_bound *= 2
            self.restarts += 1
            self.state = self._fresh()
            for x, y, wt in sorted(self.g.edges()):
                self.state.insert(x, y, wt)
        else:
            self.state.insert(u, v, w)

    def delete(self, u: int, v: int) -> None:
        self.g.delete_edge(u, v)
        self.state.delete(u, v)

    @property
    def forest(self) -> EmbedForest:
        return self.state.forest

    def tree_distance(self, u: int, v: int) -> float:
        return self.state.forest.tree_distance(u, v)

    def root_path(self, v: int):
        return self.state.forest.root_path(v)

    def check(self) -> None:
        assert self.state.g == self.g, "embedded graph differs from the input graph"
        self.state.check()


def full_init(n: int, depth: int, a: float = 1.0, seed: int = 0, **kw) -> DynamicEmbedding:
    return DynamicEmbedding(n, depth, a, seed, **kw)
