"""Buy-at-bulk cost of routing demands along a tree embedding.

On a tree every demand has a unique route, so the optimum is
``sum_e len(e) * f(load(e))``.  Loads come from marking ``+dem`` at both
endpoints, ``-2 dem`` at their lowest common ancestor, and summing subtrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from dyntree.forest import EmbedForest


class DisconnectedDemand(ValueError):
    pass


class InvalidDemand(ValueError):
    pass


class InvalidPriceFn(ValueError):
    pass


@dataclass(frozen=True)
class Demand:
    s: object
    t: object
    dem: float

    def __post_init__(self):
        if self.s == self.t:
            raise InvalidDemand(f"demand endpoints coincide: {self.s!r}")
        if not self.dem > 0:
            raise InvalidDemand(f"demand must be positive, got {self.dem}")


@dataclass(frozen=True)
class PriceFn:
    """``affine`` (a + b x), ``power`` (c x^alpha) or ``minaffine`` (min_j a_j + b_j x); f(0) = 0."""

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind == "affine":
            a, b = self.params
            ok = a >= 0 and b >= 0
        elif self.kind == "power":
            c, alpha = self.params
            ok = c >= 0 and 0 < alpha <= 1
        elif self.kind == "minaffine":
            ok = len(self.params) > 0 and all(a >= 0 and b >= 0 for a, b in self.params)
        else:
            raise InvalidPriceFn(f"unknown price function kind {self.kind!r}")
        if not ok:
            raise InvalidPriceFn(f"bad coefficients for {self.kind}: {self.params}")
        self._check_shape()

    def __call__(self, x: float) -> float:
        if x <= 0:
            return 0.0
        if self.kind == "affine":
            a, b = self.params
            return a + b * x
        if self.kind == "power":
            c, alpha = self.params
            return c * x**alpha
        return min(a + b * x for a, b in self.params)

    def _check_shape(self) -> None:
        grid = [0.0] + [2.0**k for k in range(-10, 21)]
        for x in grid:
            for y in grid:
                fx, fy, fxy = self(x), self(y), self(x + y)
                tol = 1e-12 * max(1.0, abs(fxy))
                if fxy + tol < max(fx, fy):
                    raise InvalidPriceFn(f"{self} decreases between {x} and {x + y}")
                if fxy > fx + fy + tol:
                    raise InvalidPriceFn(f"{self} not subadditive at ({x}, {y})")

    @classmethod
    def parse(cls, text: str) -> PriceFn:
        kind, _, rest = text.strip().partition(":")
        try:
            if kind == "minaffine":
                pieces = tuple(
                    tuple(float(z) for z in part.split(",")) for part in rest.split(";") if part
                )
                if any(len(p) != 2 for p in pieces):
                    raise ValueError(rest)
                return cls(kind, pieces)
            vals = tuple(float(z) for z in rest.split(","))
            if len(vals) != 2:
                raise ValueError(rest)
            return cls(kind, vals)
        except ValueError as exc:
            if isinstance(exc, InvalidPriceFn):
                raise
            raise InvalidPriceFn(f"cannot parse price function {text!r}") from exc

    def __str__(self) -> str:
        if self.kind == "minaffine":
            return "minaffine:" + ";".join(f"{a:g},{b:g}" for a, b in self.params)
        return f"{self.kind}:{self.params[0]:g},{self.params[1]:g}"


def _validate(t: EmbedForest, demands: Sequence[Demand]) -> None:
    for d in demands:
        for x in (d.s, d.t):
            if x not in t.leaves:
                raise InvalidDemand(f"demand endpoint {x!r} is not a tree leaf")


def edge_loads(t: EmbedForest, demands: Sequence[Demand]) -> dict:
    """Load on each tree edge, keyed by its child node."""
    _validate(t, demands)
    if not demands:
        return {}
    mark: dict = {}
    depth: dict = {}
    for d in demands:
        ps = t.path_nodes(d.s)
        pt = t.path_nodes(d.t)
        for path in (ps, pt):
            h = len(path) - 1
            for k, x in enumerate(path):
                depth[x] = h - k
        on_s = set(ps)
        lca = next((x for x in pt if x in on_s), None)
        if lca is None:
            raise DisconnectedDemand(f"{d.s!r} and {d.t!r} lie in different trees")
        mark[d.s] = mark.get(d.s, 0.0) + d.dem
        mark[d.t] = mark.get(d.t, 0.0) + d.dem
        mark[lca] = mark.get(lca, 0.0) - 2 * d.dem
    # true loads are sums of whole demands, so anything below the smallest one is rounding
    floor = 0.5 * min(d.dem for d in demands)
    acc = dict.fromkeys(depth, 0.0)
    loads = {}
    for x in sorted(depth, key=lambda z: -depth[z]):
        acc[x] += mark.get(x, 0.0)
        p = t.parent.get(x)
        if p is None:
            continue
        if acc[x] > floor:
            loads[x] = acc[x]
        acc[p] += acc[x]
    return loads


def tree_opt(t: EmbedForest, demands: Sequence[Demand], f: PriceFn) -> float:
    loads = edge_loads(t, demands)
    return math.fsum(t.weight[x] * f(c) for x, c in loads.items())


def tree_opt_bruteforce(t: EmbedForest, demands: Sequence[Demand], f: PriceFn) -> float:
    """Per-demand path walk; reference for ``tree_opt``."""
    _validate(t, demands)
    load: dict = {}
    for d in demands:
        path = t.tree_path_edges(d.s, d.t)
        if path is None:
            raise DisconnectedDemand(f"{d.s!r} and {d.t!r} lie in different trees")
        for c, _ in path:
            load[c] = load.get(c, 0.0) + d.dem
    return math.fsum(t.weight[x] * f(c) for x, c in load.items())


def demand_subtree(t: EmbedForest, terminals: Iterable) -> EmbedForest:
    """Union of the terminals' root paths, as a standalone forest."""
    sub = EmbedForest()
    paths = [t.root_path(x) for x in terminals]
    for rp in paths:
        for x, _ in rp:
            if x not in sub:
                sub.add_node(x, leaf=x in t.leaves)
    for rp in paths:
        for k in range(len(rp) - 1):
            x = rp[k][0]
            if x not in sub.parent:
                sub.link(x, rp[k + 1][0], rp[k][1])
    return sub


def bab_query(embedding, demands: Sequence[Demand], f: PriceFn) -> float:
    """Estimate from the current output forest of ``embedding`` (anything with ``.forest``)."""
    if not demands:
        return 0.0
    t = embedding.forest
    terminals = sorted({x for d in demands for x in (d.s, d.t)}, key=repr)
    for x in terminals:
        if x not in t.leaves:
            raise InvalidDemand(f"demand endpoint {x!r} is not a vertex")
    sub = demand_subtree(t, terminals)
    assert len(sub.children) <= (t.height() + 1) * len(terminals)
    return tree_opt(sub, demands, f)
