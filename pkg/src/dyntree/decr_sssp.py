"""Decremental single-source distance estimates with the 2-approximation contract
d(c, v) <= est(c, v) <= 2 d(c, v).

The reference implementation keeps exact distances and recomputes them lazily:
a deletion only marks the instance dirty when it removes a shortest-path-tree
edge, and the next query reruns Dijkstra.
"""

from __future__ import annotations

from typing import Iterable

from dyntree.graph import INF, DynGraph, dijkstra


class DecrSssp:
    __slots__ = ("g", "source", "dist", "parent", "dirty", "recomputes")

    def __init__(self, h: DynGraph, c: int):
        # h must be private to this instance; callers pass a snapshot
        self.g = h
        self.source = c
        self.dist: dict[int, float] = {}
        self.parent: dict[int, int] = {}
        self.dirty = True
        self.recomputes = 0

    def _refresh(self) -> None:
        if self.dirty:
            self.dist, self.parent = dijkstra(self.g, self.source)
            self.dirty = False
            self.recomputes += 1

    def delete(self, u: int, v: int) -> None:
        if not self.g.discard_edge(u, v):
            return
        if self.parent.get(u) == v or self.parent.get(v) == u:
            self.dirty = True

    def estimate(self, v: int) -> float:
        self._refresh()
        return self.dist.get(v, INF)

    def estimates(self) -> dict[int, float]:
        self._refresh()
        return {v: self.dist.get(v, INF) for v in self.g.nodes()}

    def any_above(self, threshold: float, live: Iterable[int]) -> int | None:
        """Smallest live node whose estimate exceeds ``threshold``."""
        self._refresh()
        dist = self.dist
        best = None
        for v in live:
            if dist.get(v, INF) > threshold and (best is None or v < best):
                best = v
        return best


def sssp_init(h: DynGraph, c: int) -> DecrSssp:
    return DecrSssp(h, c)


def sssp_delete(inst: DecrSssp, u: int, v: int) -> None:
    inst.delete(u, v)


def sssp_any_above(inst: DecrSssp, threshold: float, live: Iterable[int]) -> int | None:
    return inst.any_above(threshold, live)
