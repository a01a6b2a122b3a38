"""Dynamic weighted undirected graph plus the exact shortest-path routines used
both by the algorithms (local ball growing) and by the verification oracles."""

from __future__ import annotations

import heapq
import math
from typing import Callable, Iterable, Iterator

INF = math.inf
DEFAULT_MAX_WEIGHT = float(2**20)


class GraphError(Exception):
    pass


class DuplicateEdge(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class WeightOutOfRange(GraphError):
    pass


class InvalidEdge(GraphError):
    """Self-loop or unknown endpoint."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class DynGraph:
    """Undirected graph with per-node adjacency maps ``neighbor -> weight``.

    Node ids are kept as dict keys so the node set may be any subset of the
    integers (induced snapshots keep the original ids).  Iteration order is
    insertion order, which is deterministic for a fixed update sequence.
    """

    __slots__ = ("adj", "max_weight", "m")

    def __init__(self, n: int = 0, max_weight: float = DEFAULT_MAX_WEIGHT):
        self.adj: dict[int, dict[int, float]] = {v: {} for v in range(n)}
        self.max_weight = float(max_weight)
        self.m = 0

    @classmethod
    def from_nodes(cls, nodes: Iterable[int], max_weight: float = DEFAULT_MAX_WEIGHT) -> DynGraph:
        g = cls(0, max_weight)
        for v in nodes:
            g.adj[v] = {}
        return g

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int, float]], max_weight: float = DEFAULT_MAX_WEIGHT
    ) -> DynGraph:
        g = cls(n, max_weight)
        for u, v, w in edges:
            g.insert_edge(u, v, w)
        return g

    # -- queries -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.adj)

    def nodes(self) -> Iterator[int]:
        return iter(self.adj)

    def has_node(self, v: int) -> bool:
        return v in self.adj

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adj.get(u)
        return nb is not None and v in nb

    def weight(self, u: int, v: int) -> float:
        try:
            return self.adj[u][v]
        except KeyError:
            raise MissingEdge(f"edge ({u}, {v}) not present") from None

    def neighbors(self, v: int) -> dict[int, float]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def volume(self, nodes: Iterable[int] | None = None) -> int:
        if nodes is None:
            return 2 * self.m
        return sum(len(self.adj[v]) for v in nodes)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``."""
        for u, nb in self.adj.items():
            for v, w in nb.items():
                if u < v:
                    yield u, v, w

    def edge_set(self) -> dict[tuple[int, int], float]:
        return {(u, v): w for u, v, w in self.edges()}

    # -- updates -----------------------------------------------------------

    def add_node(self, v: int) -> None:
        self.adj.setdefault(v, {})

    def insert_edge(self, u: int, v: int, w: float) -> None:
        if u == v:
            raise InvalidEdge(f"self-loop at {u}")
        if u not in self.adj or v not in self.adj:
            raise InvalidEdge(f"unknown endpoint in ({u}, {v})")
        if not (1.0 <= w <= self.max_weight):
            raise WeightOutOfRange(f"weight {w} outside [1, {self.max_weight}]")
        if v in self.adj[u]:
            raise DuplicateEdge(f"edge ({u}, {v}) already present")
        w = float(w)
        self.adj[u][v] = w
        self.adj[v][u] = w
        self.m += 1

    def delete_edge(self, u: int, v: int) -> float:
        nb = self.adj.get(u)
        if nb is None or v not in nb:
            raise MissingEdge(f"edge ({u}, {v}) not present")
        w = nb.pop(v)
        del self.adj[v][u]
        self.m -= 1
        return w

    def discard_edge(self, u: int, v: int) -> bool:
        nb = self.adj.get(u)
        if nb is None or v not in nb:
            return False
        del nb[v]
        del self.adj[v][u]
        self.m -= 1
        return True

    def remove_nodes(self, nodes: Iterable[int]) -> None:
        for v in nodes:
            for u in self.adj.pop(v):
                if u in self.adj:
                    del self.adj[u][v]
        self._recount()

    def _recount(self) -> None:
        self.m = sum(len(nb) for nb in self.adj.values()) // 2

    def copy(self) -> DynGraph:
        g = DynGraph(0, self.max_weight)
        g.adj = {v: dict(nb) for v, nb in self.adj.items()}
        g.m = self.m
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DynGraph):
            return NotImplemented
        return self.adj == other.adj

    def __repr__(self) -> str:
        return f"DynGraph(n={self.n}, m={self.m})"

    def check_symmetry(self) -> None:
        total = 0
        for u, nb in self.adj.items():
            for v, w in nb.items():
                if self.adj.get(v, {}).get(u) != w:
                    raise AssertionError(f"asymmetric adjacency at ({u}, {v})")
                if not (1.0 <= w <= self.max_weight):
                    raise AssertionError(f"weight {w} out of range at ({u}, {v})")
            total += len(nb)
        if total != 2 * self.m:
            raise AssertionError(f"edge count {self.m} but degree sum {total}")


def snapshot_induced(g: DynGraph, nodes: Iterable[int]) -> DynGraph:
    """Independent copy of ``g[nodes]``."""
    keep = set(nodes)
    h = DynGraph(0, g.max_weight)
    m2 = 0
    for v in g.adj:
        if v in keep:
            nb = {u: w for u, w in g.adj[v].items() if u in keep}
            h.adj[v] = nb
            m2 += len(nb)
    h.m = m2 // 2
    return h


def ball_order(
    g: DynGraph,
    v: int,
    r: float,
    within: Callable[[int], bool] | None = None,
    counter: dict | None = None,
) -> list[int]:
    """Nodes at distance <= r from ``v``, in settle order.

    Truncated Dijkstra that never pushes a label above ``r``; equal labels are
    settled by ascending node id.  With ``within`` the search is confined to
    the induced subgraph on the accepted nodes (``v`` itself is always kept).
    ``counter`` (if given) accumulates ``heap_ops`` and ``edges_scanned``.
    """
    dist = {v: 0.0}
    heap = [(0.0, v)]
    done: list[int] = []
    settled = set()
    ops = 1
    scanned = 0
    adj = g.adj
    while heap:
        d, x = heapq.heappop(heap)
        ops += 1
        if x in settled:
            continue
        settled.add(x)
        done.append(x)
        for y, w in adj[x].items():
            scanned += 1
            if y in settled or (within is not None and not within(y)):
                continue
            nd = d + w
            if nd <= r and nd < dist.get(y, INF):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
                ops += 1
    if counter is not None:
        counter["heap_ops"] = counter.get("heap_ops", 0) + ops
        counter["edges_scanned"] = counter.get("edges_scanned", 0) + scanned
    return done


def ball(g: DynGraph, v: int, r: float, within: Callable[[int], bool] | None = None,
         counter: dict | None = None) -> set[int]:
    return set(ball_order(g, v, r, within, counter))


def dijkstra(g: DynGraph, s: int, within: Callable[[int], bool] | None = None
             ) -> tuple[dict[int, float], dict[int, int]]:
    """Distances and shortest-path-tree parents from ``s`` (reachable nodes only)."""
    dist = {s: 0.0}
    parent: dict[int, int] = {}
    heap = [(0.0, s)]
    settled = set()
    adj = g.adj
    while heap:
        d, x = heapq.heappop(heap)
        if x in settled:
            continue
        settled.add(x)
        for y, w in adj[x].items():
            if y in settled or (within is not None and not within(y)):
                continue
            nd = d + w
            if nd < dist.get(y, INF):
                dist[y] = nd
                parent[y] = x
                heapq.heappush(heap, (nd, y))
    return dist, parent


def sssp_exact(g: DynGraph, s: int) -> dict[int, float]:
    """Exact distances from ``s`` to every node of ``g`` (``inf`` if unreachable)."""
    dist, _ = dijkstra(g, s)
    return {v: dist.get(v, INF) for v in g.adj}


def connected_component(g: DynGraph, s: int) -> set[int]:
    seen = {s}
    stack = [s]
    adj = g.adj
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen
