"""Decremental probabilistic low-diameter decomposition.

Each cluster owns a center, a frozen volume ``mu``, the edge set ``F`` it saw at
its last center assignment and a decremental SSSP instance on that edge set.
When some live member drifts beyond ``6 rho`` of the center, a ball of
geometric radius is grown from the offender inside the current induced
subgraph.  A light ball is split off as a new cluster; a heavy ball makes the
cluster pick a fresh center instead.

Ball removals are never reported to the parent's SSSP instance, so cluster
diameters are weak diameters measured in the whole (level) graph.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

from dyntree.decr_sssp import DecrSssp
from dyntree.graph import DynGraph, ball_order, edge_key, snapshot_induced, sssp_exact
from dyntree.sampling import InvalidParameter, RngStream


@dataclass
class Cluster:
    id: int
    nodes: set[int]
    depth: int
    rng: RngStream | None  # None for the draw-free singletons of a clamped level
    center: int = -1
    mu: int = 0
    F: set[tuple[int, int]] = field(default_factory=set)
    sssp: DecrSssp | None = None
    recenters: int = 0


@dataclass(frozen=True)
class SplitEvent:
    parent: int
    child: int
    child_nodes: frozenset
    boundary_edges: tuple
    # the ball swallowed every remaining node of the parent, which is now gone
    parent_emptied: bool = False


@dataclass(frozen=True)
class RecenterEvent:
    cluster: int


class Ldd:
    """One decremental decomposition over a private copy of the input graph.

    ``diameter`` fixes the center-distance guard directly (the per-level use in
    the tree embedding); otherwise the guard is ``6 rho``.  ``singletons``
    builds the all-singletons partition with no randomness at all.
    """

    def __init__(
        self,
        g: DynGraph,
        beta: float | None,
        a: float,
        rng: RngStream,
        *,
        diameter: float | None = None,
        singletons: bool = False,
        force_p: float | None = None,
        on_split: Callable[[SplitEvent], None] | None = None,
        log_events: bool = True,
    ):
        if g.n == 0:
            raise InvalidParameter("graph must have at least one node")
        if a < 1:
            raise InvalidParameter(f"a must be >= 1, got {a}")
        self.g = g.copy()
        self.n = g.n
        self.m0 = g.m
        self.a = float(a)
        self.rng = rng
        self.singletons = singletons
        self.on_split = on_split
        self.log_events = log_events
        self.levels_cap = 2 + math.log2(max(self.m0, 1))
        ln_n = math.log(self.n)

        if singletons:
            self.beta = beta
            self.p = 1.0
            self.rho = 0.0
            self.guard = 0.0
        elif diameter is not None:
            self.p = min(6.0 * (self.a + 2) * ln_n / diameter, 1.0) if ln_n > 0 else 0.5
            self.beta = self.p * self.levels_cap
            self.rho = diameter / 6.0
            self.guard = float(diameter)
        else:
            if beta is None or not (0.0 < beta < 1.0):
                raise InvalidParameter(f"beta must lie in (0, 1), got {beta}")
            self.beta = beta
            p = beta / self.levels_cap
            if p > 0.5:
                warnings.warn(f"p = {p:.3f} exceeds 1/2; clamped", stacklevel=2)
                p = 0.5
            self.p = p
            self.rho = (self.a + 2) / p * ln_n
            self.guard = 6.0 * self.rho
        if force_p is not None:
            self.p = force_p

        self.clusters: dict[int, Cluster] = {}
        self.cluster_of: dict[int, int] = {}
        self.clusters_of_edge: dict[tuple[int, int], set[int]] = {}
        self.events: list = []
        self.n_splits = 0
        self.n_recenters = 0
        self.cluster_changes: dict[int, int] = {v: 0 for v in self.g.nodes()}
        self.max_depth = 0
        self._next_id = 0

        root = self._new_cluster(set(self.g.nodes()), 0)
        if singletons:
            self._init_singletons(root)
        else:
            self._assign_center(root)
            self._update(root.id)

    # -- internals ---------------------------------------------------------

    def _new_cluster(self, nodes: set[int], depth: int) -> Cluster:
        cid = self._next_id
        self._next_id += 1
        rng = None if self.singletons else self.rng.child(f"cluster={cid}")
        c = Cluster(cid, nodes, depth, rng)
        self.clusters[cid] = c
        for v in nodes:
            self.cluster_of[v] = cid
        self.max_depth = max(self.max_depth, depth)
        assert depth <= self.levels_cap, f"genealogy depth {depth} exceeds {self.levels_cap}"
        return c

    def _init_singletons(self, root: Cluster) -> None:
        order = sorted(root.nodes)
        for v in order[:-1]:
            root.nodes.discard(v)
            boundary = tuple(sorted(edge_key(v, y) for y in self.g.adj[v] if y in root.nodes))
            child = self._new_cluster({v}, 1)
            child.center = v
            self.cluster_changes[v] += 1
            self._emit(SplitEvent(root.id, child.id, frozenset((v,)), boundary))
        root.center = order[-1]

    def _emit(self, ev) -> None:
        if self.log_events:
            self.events.append(ev)
        if isinstance(ev, SplitEvent):
            self.n_splits += 1
            if self.on_split is not None:
                self.on_split(ev)
        else:
            self.n_recenters += 1

    def _assign_center(self, c: Cluster) -> None:
        cid = c.id
        cof = self.cluster_of
        adj = self.g.adj
        deg = {}
        for u in c.nodes:
            deg[u] = sum(1 for y in adj[u] if cof[y] == cid)
        c.mu = sum(deg.values())
        if c.mu > 0:
            c.center = c.rng.weighted_pick(deg)
        elif len(c.nodes) == 1:
            c.center = next(iter(c.nodes))
        else:
            # only reachable when the initial graph has isolated nodes in V
            assert c.depth == 0 and c.recenters == 0, "edgeless multi-node cluster"
            nodes = sorted(c.nodes)
            c.center = nodes[int(c.rng.random() * len(nodes))]
        h = snapshot_induced(self.g, c.nodes)
        c.F = {(u, v) for u, v, _ in h.edges()}
        c.sssp = DecrSssp(h, c.center)
        coe = self.clusters_of_edge
        for e in c.F:
            s = coe.get(e)
            if s is None:
                coe[e] = {cid}
            else:
                s.add(cid)

    def _drop_edges(self, c: Cluster) -> None:
        coe = self.clusters_of_edge
        for e in c.F:
            s = coe.get(e)
            if s is not None:
                s.discard(c.id)
                if not s:
                    del coe[e]
        c.F = set()
        c.sssp = None

    def _update(self, cid: int) -> None:
        cof = self.cluster_of
        adj = self.g.adj
        while True:
            c = self.clusters.get(cid)
            if c is None or len(c.nodes) <= 1:
                return
            v = c.sssp.any_above(self.guard, c.nodes)
            if v is None:
                return
            r = c.rng.radius(self.p)
            inside = lambda y, cid=cid: cof[y] == cid  # noqa: E731
            b = ball_order(self.g, v, r, inside)
            bset = set(b)
            vol = sum(1 for x in b for y in adj[x] if cof[y] == cid)
            if vol <= 0.5 * c.mu:
                c.nodes -= bset
                boundary = tuple(sorted(
                    edge_key(x, y) for x in b for y in adj[x] if cof[y] == cid and y not in bset
                ))
                emptied = not c.nodes
                child = self._new_cluster(bset, c.depth + 1)
                for x in b:
                    self.cluster_changes[x] += 1
                self._assign_center(child)
                if emptied:
                    self._drop_edges(c)
                    del self.clusters[cid]
                self._emit(SplitEvent(cid, child.id, frozenset(bset), boundary, emptied))
                self._update(child.id)
            else:
                self._drop_edges(c)
                c.recenters += 1
                self._assign_center(c)
                self._emit(RecenterEvent(cid))

    # -- public API --------------------------------------------------------

    def delete(self, u: int, v: int) -> None:
        """Delete edge (u, v) from the decomposition's graph; absent edges are ignored."""
        if not self.g.discard_edge(u, v):
            return
        e = edge_key(u, v)
        cids = self.clusters_of_edge.pop(e, None)
        if not cids:
            return
        for cid in sorted(cids):
            c = self.clusters.get(cid)
            if c is None:
                continue
            c.F.discard(e)
            c.sssp.delete(u, v)
            self._update(cid)

    def partition(self) -> dict[int, int]:
        return dict(self.cluster_of)

    def is_inter_cluster(self, u: int, v: int) -> bool:
        return self.cluster_of[u] != self.cluster_of[v]

    def inter_cluster_edges(self) -> list[tuple[int, int]]:
        cof = self.cluster_of
        return [(u, v) for u, v, _ in self.g.edges() if cof[u] != cof[v]]

    def center_of(self, v: int) -> int:
        return self.clusters[self.cluster_of[v]].center

    def check(self, exact: bool = True, pairwise: bool = False) -> None:
        """Hard structural assertions.

        ``exact`` adds the center-distance guard against exact distances in the
        current graph; ``pairwise`` also bounds the weak diameter by twice the guard.
        """
        seen: set[int] = set()
        for cid, c in self.clusters.items():
            assert c.nodes, f"empty live cluster {cid}"
            assert c.center in c.nodes, f"center of {cid} outside cluster"
            assert not (seen & c.nodes), "clusters overlap"
            seen |= c.nodes
            for v in c.nodes:
                assert self.cluster_of[v] == cid, f"cluster_of[{v}] disagrees"
            assert c.depth <= self.levels_cap
            for e in c.F:
                assert cid in self.clusters_of_edge.get(e, ()), f"edge {e} missing back-link"
        assert seen == set(self.g.adj), "partition not total"
        for e, cids in self.clusters_of_edge.items():
            for cid in cids:
                assert e in self.clusters[cid].F, f"stale back-link {e} -> {cid}"
        if exact:
            for c in self.clusters.values():
                if len(c.nodes) > 1:
                    d = sssp_exact(self.g, c.center)
                    worst = max(d[v] for v in c.nodes)
                    assert worst <= self.guard, (
                        f"cluster {c.id}: center distance {worst} exceeds {self.guard}"
                    )
                    if pairwise:
                        for x in c.nodes:
                            dx = sssp_exact(self.g, x)
                            wd = max(dx[y] for y in c.nodes)
                            assert wd <= 2 * self.guard, (
                                f"cluster {c.id}: weak diameter {wd} exceeds {2 * self.guard}"
                            )


def ldd_init(g: DynGraph, beta: float, a: float, rng: RngStream, **kw) -> Ldd:
    return Ldd(g, beta, a, rng, **kw)


def ldd_delete(st: Ldd, u: int, v: int) -> None:
    st.delete(u, v)


def replay_partition(n_nodes: Iterable[int], events: Iterable) -> dict[int, int]:
    """Partition obtained by applying logged split events to the single initial cluster 0."""
    part = {v: 0 for v in n_nodes}
    for ev in events:
        if isinstance(ev, SplitEvent):
            for v in ev.child_nodes:
                assert part[v] == ev.parent
                part[v] = ev.child
    return part
