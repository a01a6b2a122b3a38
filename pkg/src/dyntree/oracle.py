"""Approximate distance oracle: independent embedding copies, answer = min tree distance."""

from __future__ import annotations

import math

from dyntree.embed_full import DynamicEmbedding
from dyntree.graph import DEFAULT_MAX_WEIGHT


def copy_count(n: int, a: float) -> int:
    return max(1, math.ceil(a * math.log2(n))) if n > 1 else 1


class Oracle:
    def __init__(
        self,
        n: int,
        depth: int = 2,
        a: float = 2.0,
        seed: int = 0,
        *,
        copies: int | None = None,
        embed_a: float = 1.0,
        max_weight: float = DEFAULT_MAX_WEIGHT,
    ):
        self.n = n
        self.a = a
        c = copies if copies is not None else copy_count(n, a)
        self.copies = [
            DynamicEmbedding(n, depth, embed_a, seed, max_weight=max_weight, tag=f"oracle/copy={j}")
            for j in range(c)
        ]

    def insert(self, u: int, v: int, w: float) -> None:
        for emb in self.copies:
            emb.insert(u, v, w)

    def delete(self, u: int, v: int) -> None:
        for emb in self.copies:
            emb.delete(u, v)

    def per_copy(self, u: int, v: int) -> list[float]:
        return [emb.tree_distance(u, v) for emb in self.copies]

    def query(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return min(self.per_copy(u, v))

    def check(self, deep: bool = True) -> None:
        """Copies agree on the edge set; ``deep`` also runs each copy's structural checks."""
        g0 = self.copies[0].g
        for emb in self.copies:
            assert emb.g == g0, "copies disagree on the edge set"
            if deep:
                emb.check()


def oracle_update(os: Oracle, op: tuple) -> None:
    if op[0] == "i":
        os.insert(op[1], op[2], op[3])
    else:
        os.delete(op[1], op[2])


def oracle_query(os: Oracle, u: int, v: int) -> float:
    return os.query(u, v)
