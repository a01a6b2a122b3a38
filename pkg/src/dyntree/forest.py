"""Rooted weighted forest whose leaves are graph vertices.

Internal nodes are arbitrary hashable ids.  Every structural edit is recorded
in ``touched`` (and optionally in ``feed``) so that callers can find out which
leaves saw their root path change since the last check.
"""

from __future__ import annotations

from typing import Hashable, Iterable

from dyntree.graph import INF

Node = Hashable


class ForestError(AssertionError):
    pass


class EmbedForest:
    def __init__(self, record_feed: bool = False):
        self.parent: dict[Node, Node] = {}
        self.weight: dict[Node, float] = {}
        self.children: dict[Node, set] = {}
        self.leaves: set[int] = set()
        self.feed: list | None = [] if record_feed else None
        self.touched: set = set()
        self._paths: dict[int, tuple] = {}

    # -- edits -------------------------------------------------------------

    def _log(self, *rec) -> None:
        if self.feed is not None:
            self.feed.append(rec)

    def add_node(self, x: Node, leaf: bool = False) -> None:
        if x in self.children:
            raise ForestError(f"node {x!r} already present")
        self.children[x] = set()
        if leaf:
            self.leaves.add(x)
        self.touched.add(x)
        self._log("add", x)

    def remove_node(self, x: Node) -> None:
        if self.children.get(x):
            raise ForestError(f"node {x!r} still has children")
        if x in self.parent:
            self.cut(x)
        del self.children[x]
        self.leaves.discard(x)
        self._paths.pop(x, None)
        self.touched.discard(x)
        self._log("remove", x)

    def link(self, x: Node, p: Node, w: float) -> None:
        if x in self.parent:
            raise ForestError(f"node {x!r} already has a parent")
        if p not in self.children or x not in self.children:
            raise ForestError(f"link of unknown node {x!r} -> {p!r}")
        self.parent[x] = p
        self.weight[x] = w
        self.children[p].add(x)
        self.touched.add(x)
        self._log("link", x, p, w)

    def cut(self, x: Node) -> None:
        p = self.parent.pop(x)
        del self.weight[x]
        self.children[p].discard(x)
        self.touched.add(x)
        self._log("cut", x, p)

    def relink(self, x: Node, p: Node, w: float) -> None:
        if self.parent.get(x) == p and self.weight.get(x) == w:
            return
        if x in self.parent:
            self.cut(x)
        self.link(x, p, w)

    def drain_feed(self) -> list:
        out = self.feed or []
        if self.feed is not None:
            self.feed = []
        return out

    # -- queries -----------------------------------------------------------

    def __contains__(self, x: Node) -> bool:
        return x in self.children

    def nodes(self) -> Iterable[Node]:
        return self.children.keys()

    def roots(self) -> list:
        return [x for x in self.children if x not in self.parent]

    def root_path(self, v: Node) -> list[tuple[Node, float]]:
        """``[(node, weight to parent), ...]`` from ``v`` up to its root (root weight 0)."""
        out = []
        par = self.parent
        wt = self.weight
        limit = len(self.children)
        x = v
        while True:
            p = par.get(x)
            if p is None:
                out.append((x, 0.0))
                return out
            out.append((x, wt[x]))
            x = p
            limit -= 1
            if limit < 0:
                raise ForestError("cycle in parent links")

    def path_nodes(self, v: Node) -> list:
        return [x for x, _ in self.root_path(v)]

    def tree_distance(self, u: Node, v: Node) -> float:
        if u == v:
            return 0.0
        if u not in self.children or v not in self.children:
            raise ForestError(f"unknown node {u!r} or {v!r}")
        par = self.parent
        wt = self.weight
        limit = len(self.children)
        du = {u: 0.0}
        acc = 0.0
        x = u
        while x in par:
            acc += wt[x]
            x = par[x]
            du[x] = acc
            limit -= 1
            if limit < 0:
                raise ForestError("cycle in parent links")
        acc = 0.0
        x = v
        limit = len(self.children)
        while limit >= 0:
            hit = du.get(x)
            if hit is not None:
                return hit + acc
            if x not in par:
                return INF
            acc += wt[x]
            x = par[x]
            limit -= 1
        raise ForestError("cycle in parent links")

    def all_pairs(self, vs: Iterable[Node]) -> dict:
        """``{(u, v): d_T(u, v)}`` for all ordered pairs of ``vs``, one root walk per node."""
        vs = list(vs)
        up = {}
        for u in vs:
            acc = 0.0
            du = []
            for x, w in self.root_path(u):
                du.append((x, acc))
                acc += w
            up[u] = du
        lookup = {u: dict(du) for u, du in up.items()}
        out = {}
        for u in vs:
            lu = lookup[u]
            for v in vs:
                if u == v:
                    out[(u, v)] = 0.0
                    continue
                d = INF
                for x, acc in up[v]:
                    hit = lu.get(x)
                    if hit is not None:
                        d = hit + acc
                        break
                out[(u, v)] = d
        return out

    def tree_path_edges(self, u: Node, v: Node, cache: dict | None = None
                        ) -> list[tuple[Node, Node]] | None:
        """Tree edges ``(child, parent)`` on the u-v path, or None across trees.

        ``cache`` (optional) memoizes root paths across calls on an unchanged forest.
        """
        if cache is None:
            pu = self.path_nodes(u)
            pv = self.path_nodes(v)
        else:
            pu = cache.get(u)
            if pu is None:
                pu = cache[u] = self.path_nodes(u)
            pv = cache.get(v)
            if pv is None:
                pv = cache[v] = self.path_nodes(v)
        pos = {x: i for i, x in enumerate(pu)}
        for j, x in enumerate(pv):
            if x in pos:
                i = pos[x]
                return [(pu[k], pu[k + 1]) for k in range(i)] + [(pv[k], pv[k + 1]) for k in range(j)]
        return None

    def height(self) -> int:
        """Max number of edges on a leaf-to-root path."""
        return max((len(self.root_path(v)) - 1 for v in self.leaves), default=0)

    def subtree_leaves(self, x: Node) -> list:
        out = []
        stack = [x]
        ch = self.children
        leaves = self.leaves
        while stack:
            y = stack.pop()
            if y in leaves:
                out.append(y)
            stack.extend(ch[y])
        return out

    def pop_changed_leaves(self) -> list:
        """Leaves whose root path differs from the one seen at the previous call."""
        cand = set()
        for x in self.touched:
            if x in self.children:
                cand.update(self.subtree_leaves(x))
        self.touched.clear()
        changed = []
        for v in sorted(cand):
            p = tuple(self.root_path(v))
            if self._paths.get(v) != p:
                self._paths[v] = p
                changed.append(v)
        return changed

    def check(self) -> None:
        """Acyclic, single parent, consistent child sets."""
        for x, p in self.parent.items():
            if x not in self.children or p not in self.children:
                raise ForestError(f"dangling link {x!r} -> {p!r}")
            if x not in self.children[p]:
                raise ForestError(f"child set of {p!r} misses {x!r}")
        for p, ch in self.children.items():
            for x in ch:
                if self.parent.get(x) != p:
                    raise ForestError(f"{x!r} listed under {p!r} but parent differs")
        state: dict = {}
        for x in self.children:
            trail = []
            y = x
            while y is not None and y not in state:
                state[y] = 1
                trail.append(y)
                y = self.parent.get(y)
            if y is not None and state[y] == 1 and y in trail:
                raise ForestError(f"cycle through {y!r}")
            for t in trail:
                state[t] = 2
