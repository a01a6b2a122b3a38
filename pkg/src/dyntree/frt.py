"""Static FRT tree embedding from least-element lists.

Vertices get stable random priorities; ``center_j(v)`` is the highest-priority
vertex within distance ``beta0 * 2**(j-1)`` of ``v``.  Level-j clusters group
vertices agreeing on all centers from the top level down to ``j``, and the
edge from a level-j node to its parent weighs ``beta0 * 2**j``.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable

from dyntree.embed_decr import level_count
from dyntree.forest import EmbedForest
from dyntree.graph import INF, DynGraph
from dyntree.sampling import RngStream, hash_uniform


def le_lists(g: DynGraph, order: list[int], allowed: set[int] | None = None) -> dict[int, list]:
    """Least-element lists: for each v, ``[(d(v, c), c)]`` over the records of ``order``."""
    nodes = allowed if allowed is not None else set(g.adj)
    best = {v: INF for v in nodes}
    le: dict[int, list] = {v: [] for v in nodes}
    adj = g.adj
    for c in order:
        heap = [(0.0, c)]
        seen = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in seen or d >= best[x]:
                continue
            seen.add(x)
            best[x] = d
            le[x].append((d, c))
            for y, w in adj[x].items():
                if y in nodes and y not in seen:
                    nd = d + w
                    if nd < best[y]:
                        heapq.heappush(heap, (nd, y))
    return le


def frt_embed(
    g: DynGraph,
    rng: RngStream,
    *,
    max_weight: float | None = None,
    nodes: Iterable[int] | None = None,
    tag: str = "",
    leaf_id: Callable[[int], object] | None = None,
) -> EmbedForest:
    """One FRT tree per connected component of ``g[nodes]``; leaves are ``leaf_id(v)``."""
    vs = sorted(g.adj if nodes is None else nodes)
    f = EmbedForest()
    if not vs:
        return f
    lid = leaf_id or (lambda v: v)
    W = g.max_weight if max_weight is None else max_weight
    top = level_count(len(vs), W) + 1
    beta0 = 2.0 ** rng.random()
    order = sorted(vs, key=lambda v: (hash_uniform(rng.seed, rng.tag, v), v))
    le = le_lists(g, order, set(vs))

    # a level-j cluster is keyed by the centers of its members from the top level down to j
    groups: list[dict[tuple, list]] = [dict() for _ in range(top + 1)]
    bottom_key = {}
    for v in vs:
        lst = le[v]
        key: tuple = ()
        for j in range(top, 0, -1):
            r = beta0 * 2.0 ** (j - 1)
            for d, c in lst:
                if d <= r:
                    key = key + (c,)
                    break
            groups[j].setdefault(key, []).append(v)
        bottom_key[v] = key

    ids: list[dict[tuple, object]] = [dict() for _ in range(top + 1)]
    for j in range(top, 0, -1):
        for key, mem in groups[j].items():
            x = ("F", tag, j, min(mem))
            ids[j][key] = x
            f.add_node(x)
            if j < top:
                f.link(x, ids[j + 1][key[:-1]], beta0 * 2.0**j)
    for v in vs:
        x = lid(v)
        f.add_node(x, leaf=True)
        f.link(x, ids[1][bottom_key[v]], beta0)
    return f
