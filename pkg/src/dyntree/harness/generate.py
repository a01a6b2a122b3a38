"""Graph families and trace generators.

Traces are fixed before any algorithm sees them: nothing here ever looks at
an algorithm's output.
"""

from __future__ import annotations

import itertools
import random

from dyntree.harness.trace import Delete, Insert, Observe, QueryDist, Trace


def cycle_edges(n: int, w: float = 1) -> list[tuple[int, int, float]]:
    return [(i, (i + 1) % n, w) for i in range(n)]


def grid_edges(rows: int, cols: int, w: float = 1) -> list[tuple[int, int, float]]:
    out = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                out.append((v, v + 1, w))
            if r + 1 < rows:
                out.append((v, v + cols, w))
    return out


def dumbbell_edges(k: int, w: float = 1) -> list[tuple[int, int, float]]:
    """Two k-cliques on ``0..k-1`` and ``k..2k-1`` joined by the bridge (0, k)."""
    out = [(u, v, w) for u, v in itertools.combinations(range(k), 2)]
    out += [(u + k, v + k, w) for u, v in itertools.combinations(range(k), 2)]
    out.append((0, k, w))
    return out


def random_edges(n: int, m: int, W: int, rng: random.Random) -> list[tuple[int, int, float]]:
    """A random spanning tree (while edges last) plus uniform extra edges, integer weights in [1, W]."""
    m = min(m, n * (n - 1) // 2)
    order = list(range(n))
    rng.shuffle(order)
    chosen: dict = {}
    for i in range(1, n):
        if len(chosen) >= m:
            break
        u, v = order[i], order[rng.randrange(i)]
        chosen[(min(u, v), max(u, v))] = rng.randint(1, W)
    rest = [e for e in itertools.combinations(range(n), 2) if e not in chosen]
    rng.shuffle(rest)
    for e in rest[: m - len(chosen)]:
        chosen[e] = rng.randint(1, W)
    return [(u, v, w) for (u, v), w in chosen.items()]


def decremental_trace(
    n: int,
    W: float,
    edges: list[tuple[int, int, float]],
    deletions: list[tuple[int, int]],
    observe_every: int = 1,
) -> Trace:
    t = Trace(n, W)
    for u, v, w in edges:
        t.ops.append(Insert(u, v, w))
    t.ops.append(Observe("init"))
    for k, (u, v) in enumerate(deletions, 1):
        t.ops.append(Delete(u, v))
        if k % observe_every == 0 or k == len(deletions):
            t.ops.append(Observe(f"del{k}"))
    return t


def gen_rand_decr(n: int, m: int, W: int = 16, seed: int = 0, observe_every: int | None = None) -> Trace:
    rng = random.Random(f"rand-decr:{n}:{m}:{W}:{seed}")
    edges = random_edges(n, m, W, rng)
    dels = [(u, v) for u, v, _ in edges]
    rng.shuffle(dels)
    every = observe_every or max(1, len(dels) // 4)
    return decremental_trace(n, W, edges, dels, every)


def gen_rand_full(n: int, m: int, W: int = 16, seed: int = 0, p_insert: float = 0.6,
                  observe_every: int = 5) -> Trace:
    """``m`` mixed updates on an initially empty graph, with queries at observation points."""
    rng = random.Random(f"rand-full:{n}:{m}:{W}:{seed}")
    t = Trace(n, W)
    alive: dict = {}
    all_pairs = list(itertools.combinations(range(n), 2))
    for k in range(1, m + 1):
        full = len(alive) == len(all_pairs)
        if alive and (full or rng.random() >= p_insert):
            e = rng.choice(sorted(alive))
            del alive[e]
            t.ops.append(Delete(*e))
        else:
            free = [e for e in all_pairs if e not in alive]
            e = rng.choice(free)
            w = rng.randint(1, W)
            alive[e] = w
            t.ops.append(Insert(e[0], e[1], w))
        if k % observe_every == 0 or k == m:
            u, v = rng.sample(range(n), 2) if n > 1 else (0, 0)
            t.ops.append(QueryDist(u, v))
            t.ops.append(Observe(f"u{k}"))
    return t


def gen_dumbbell(n: int, W: int = 16, seed: int = 0) -> Trace:
    """Dumbbell on ``n`` nodes: bridge deleted first, then the remaining edges in random order."""
    k = max(2, n // 2)
    rng = random.Random(f"dumbbell:{n}:{W}:{seed}")
    edges = dumbbell_edges(k)
    dels = [(0, k)] + [(u, v) for u, v, _ in edges if (u, v) != (0, k)][: max(0, len(edges) - 1)]
    head, tail = dels[:1], dels[1:]
    rng.shuffle(tail)
    return decremental_trace(2 * k, W, edges, head + tail, max(1, len(dels) // 4))


FAMILIES = {
    "rand-decr": lambda n, m, W, seed: gen_rand_decr(n, m, W, seed),
    "rand-full": lambda n, m, W, seed: gen_rand_full(n, m, W, seed),
    "dumbbell": lambda n, m, W, seed: gen_dumbbell(n, W, seed),
}


def regression_suite(W: int = 16) -> list[tuple[str, Trace]]:
    """The fixed regression traces: 22 decremental and 28 fully dynamic, n <= 32.

    ``W`` is the declared weight bound; edge weights never exceed 16 so the
    same graphs can be replayed under a larger declared bound.
    """
    w = min(W, 16)
    out: list[tuple[str, Trace]] = []
    for j, n in enumerate((6, 8, 10, 12, 14, 16, 20, 24, 28, 32, 16, 32)):
        t = gen_rand_decr(n, int(1.5 * n), w, seed=j)
        out.append((f"rand-decr/n={n}/s={j}", t))
    for j, n in enumerate((6, 8, 10, 12, 16, 20)):
        out.append((f"dumbbell/n={n}", gen_dumbbell(n, w, seed=j)))
    rng = random.Random("regression-fixed")
    for name, n, edges in (("cycle8", 8, cycle_edges(8)), ("cycle16", 16, cycle_edges(16)),
                           ("grid4x4", 16, grid_edges(4, 4)), ("grid3x5", 15, grid_edges(3, 5))):
        dels = [(u, v) for u, v, _ in edges]
        rng.shuffle(dels)
        out.append((name, decremental_trace(n, w, edges, dels, max(1, len(dels) // 4))))
    for j in range(28):
        n = (6, 8, 10, 12, 16, 20, 24, 32)[j % 8]
        out.append((f"rand-full/n={n}/s={j}", gen_rand_full(n, 40, w, seed=j)))
    for _, t in out:
        t.W = W
    return out
