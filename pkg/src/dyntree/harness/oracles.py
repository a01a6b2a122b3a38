"""Brute-force reference computations used to check the algorithms."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from dyntree.buyatbulk import Demand, PriceFn
from dyntree.graph import INF, DynGraph, sssp_exact


def oracle_apsp(g: DynGraph) -> dict[int, dict[int, float]]:
    """Exact all-pairs distances by one Dijkstra per node."""
    if g.n > 256:
        raise ValueError("all-pairs oracle is limited to n <= 256")
    return {s: sssp_exact(g, s) for s in g.nodes()}


def floyd_warshall(g: DynGraph) -> dict[int, dict[int, float]]:
    nodes = list(g.nodes())
    d = {u: {v: (0.0 if u == v else INF) for v in nodes} for u in nodes}
    for u, v, w in g.edges():
        d[u][v] = d[v][u] = min(d[u][v], w)
    for k in nodes:
        dk = d[k]
        for i in nodes:
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in nodes:
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd
    return d


def simple_paths(g: DynGraph, s: int, t: int) -> list[tuple[tuple[int, int], ...]]:
    """Every simple s-t path as a tuple of normalized edges."""
    out = []
    stack = [(s, (s,), ())]
    while stack:
        x, seen, edges = stack.pop()
        if x == t:
            out.append(edges)
            continue
        for y in sorted(g.adj[x]):
            if y not in seen:
                e = (x, y) if x < y else (y, x)
                stack.append((y, seen + (y,), edges + (e,)))
    return out


def exhaustive_bab_opt(g: DynGraph, demands: Sequence[Demand], f: PriceFn) -> float:
    """Optimal buy-at-bulk cost in ``g`` by enumerating one simple path per demand."""
    if not demands:
        return 0.0
    choices = [simple_paths(g, d.s, d.t) for d in demands]
    if any(not c for c in choices):
        return INF
    best = INF
    for combo in itertools.product(*choices):
        load: dict = {}
        for d, path in zip(demands, combo):
            for e in path:
                load[e] = load.get(e, 0.0) + d.dem
        cost = math.fsum(g.adj[u][v] * f(c) for (u, v), c in load.items())
        if cost < best:
            best = cost
    return best


def cut_tolerance(beta: float, w: float, seeds: int) -> float:
    """Upper band for an empirical cut frequency: beta w plus three standard errors."""
    return beta * w + 3.0 * math.sqrt(beta * w / seeds)


def percentile(xs: Sequence[float], q: float) -> float:
    """Nearest-rank percentile, q in [0, 100]."""
    if not xs:
        return math.nan
    s = sorted(xs)
    k = max(0, math.ceil(q / 100.0 * len(s)) - 1)
    return s[k]
