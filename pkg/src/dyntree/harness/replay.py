"""Replay a trace through one algorithm stack, checking invariants as it goes."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

from dyntree.buyatbulk import Demand, PriceFn, bab_query
from dyntree.embed_decr import DecrEmbedding
from dyntree.embed_full import DynamicEmbedding
from dyntree.graph import INF, DynGraph
from dyntree.harness.oracles import oracle_apsp
from dyntree.harness.trace import (
    Delete, Insert, Observe, QueryBab, QueryDist, Trace, TraceFormatError, format_trace,
)
from dyntree.ldd import Ldd
from dyntree.oracle import Oracle, copy_count
from dyntree.sampling import RngStream

STACKS = ("ldd", "decr", "full", "oracle", "bab")


class InvariantViolation(AssertionError):
    def __init__(self, msg: str, op_index: int, seed: int, prefix: str = ""):
        super().__init__(f"op {op_index} seed {seed}: {msg}")
        self.op_index = op_index
        self.seed = seed
        self.prefix = prefix


@dataclass
class Config:
    stack: str = "decr"
    beta: float = 0.2
    a: float = 1.0
    depth: int = 2
    copies: int | None = None
    oracle_a: float = 2.0
    seed: int = 0
    check: str = "observe"  # none | observe | every
    exact: bool = True
    force_p: float | None = None
    timings: bool = False

    def __post_init__(self):
        if self.stack not in STACKS:
            raise ValueError(f"unknown stack {self.stack!r}")
        if self.check not in ("none", "observe", "every"):
            raise ValueError(f"unknown check mode {self.check!r}")


class Runner:
    def __init__(self, trace: Trace, cfg: Config):
        self.trace = trace
        self.cfg = cfg
        self.g = DynGraph(trace.n, trace.W)
        self.obj = None
        self.decremental = cfg.stack in ("ldd", "decr")
        self.observations: list[dict] = []
        self.queries: list[dict] = []
        self.checks = 0
        self.domination_pairs = 0
        # oracle copies get their structural recursion at Observe points only
        self.deep_every = cfg.stack != "oracle"
        if not self.decremental:
            self._build()

    def _build(self) -> None:
        cfg, t = self.cfg, self.trace
        if cfg.stack == "ldd":
            self.obj = Ldd(self.g, cfg.beta, cfg.a, RngStream(cfg.seed, "ldd"), force_p=cfg.force_p)
        elif cfg.stack == "decr":
            self.obj = DecrEmbedding(self.g, cfg.a, RngStream(cfg.seed, "decr"), max_weight=t.W,
                                     force_p=cfg.force_p)
        elif cfg.stack in ("full", "bab"):
            self.obj = DynamicEmbedding(t.n, cfg.depth, cfg.a, cfg.seed, max_weight=t.W)
        else:
            c = cfg.copies if cfg.copies is not None else copy_count(t.n, cfg.oracle_a)
            self.obj = Oracle(t.n, cfg.depth, cfg.oracle_a, cfg.seed, copies=c, embed_a=cfg.a,
                              max_weight=t.W)

    def _fail(self, idx: int, msg: str):
        raise InvariantViolation(msg, idx, self.cfg.seed, format_trace(self.trace.prefix(idx + 1)))

    # -- distances -----------------------------------------------------------

    def distance(self, u: int, v: int) -> float:
        if self.cfg.stack == "ldd":
            return 0.0 if self.obj.cluster_of[u] == self.obj.cluster_of[v] else INF
        if self.cfg.stack == "oracle":
            return self.obj.query(u, v)
        return self.obj.tree_distance(u, v)

    def forest_holder(self):
        return self.obj.copies[0] if self.cfg.stack == "oracle" else self.obj

    # -- checks ----------------------------------------------------------------

    def run_checks(self, idx: int, deep: bool = True) -> None:
        """Invariant checks after op ``idx``.

        For the oracle stack ``deep=False`` skips the per-copy structural
        recursion (the copies are full-stack instances checked on their own).
        """
        cfg = self.cfg
        self.checks += 1
        try:
            if cfg.stack == "ldd":
                self.obj.check(exact=cfg.exact, pairwise=cfg.exact)
                return
            if cfg.stack == "decr":
                self.obj.check(exact=cfg.exact)
            elif cfg.stack in ("full", "bab"):
                self.obj.check()
                self.obj.state.check_decomposition()
            else:
                self.obj.check(deep=deep)
            if not cfg.exact:
                return
            d = oracle_apsp(self.g)
            n = self.trace.n
            vs = range(n)
            if cfg.stack == "oracle":
                per = [e.forest.all_pairs(vs) for e in self.obj.copies]
            else:
                tree = self.obj.forest.all_pairs(vs)
            for u in range(n):
                for v in range(u + 1, n):
                    if cfg.stack == "oracle":
                        ans = self.obj.query(u, v)
                        best = min(m[(u, v)] for m in per)
                        assert ans == best, f"oracle answer {ans} is not the copy minimum {best}"
                    else:
                        ans = tree[(u, v)]
                        assert ans == tree[(v, u)], f"d_T({u},{v}) not symmetric"
                    self.domination_pairs += 1
                    assert ans >= d[u][v], f"d_T({u},{v}) = {ans} below d_G = {d[u][v]}"
        except AssertionError as exc:
            if isinstance(exc, InvariantViolation):
                raise
            self._fail(idx, str(exc))

    # -- observation snapshots -------------------------------------------------

    def snapshot(self, idx: int, tag: str) -> dict:
        snap: dict = {"op": idx, "tag": tag, "m": self.g.m}
        edges = list(self.g.edges())
        if self.cfg.stack == "ldd":
            cof = self.obj.cluster_of
            snap["cut"] = [[u, v] for u, v, _ in edges if cof[u] != cof[v]]
            snap["clusters"] = len(self.obj.clusters)
            return snap
        d = oracle_apsp(self.g) if edges else {}
        stretch = []
        for u, v, w in edges:
            stretch.append([u, v, self.distance(u, v) / d[u][v]])
        snap["stretch"] = stretch
        return snap

    # -- main loop -------------------------------------------------------------

    def run(self) -> dict:
        t0 = time.perf_counter()
        cfg = self.cfg
        for idx, op in enumerate(self.trace.ops):
            if isinstance(op, Insert):
                if self.decremental and self.obj is not None:
                    line = self.trace.lines[idx] if idx < len(self.trace.lines) else None
                    raise TraceFormatError("insertion after the decremental phase began", line)
                self.g.insert_edge(op.u, op.v, op.w)
                if self.obj is not None:
                    self.obj.insert(op.u, op.v, op.w)
                    if cfg.check == "every":
                        self.run_checks(idx, deep=self.deep_every)
                continue
            if self.obj is None:
                self._build()
                if cfg.check == "every":
                    self.run_checks(idx)
            if isinstance(op, Delete):
                self.g.delete_edge(op.u, op.v)
                self.obj.delete(op.u, op.v)
                if cfg.check == "every":
                    self.run_checks(idx, deep=self.deep_every)
            elif isinstance(op, QueryDist):
                ans = self.distance(op.u, op.v)
                exact = oracle_apsp(self.g)[op.u][op.v] if cfg.exact else None
                if exact is not None and cfg.stack != "ldd" and ans < exact:
                    self._fail(idx, f"query ({op.u},{op.v}) answered {ans} below {exact}")
                self.queries.append({"op": idx, "u": op.u, "v": op.v, "answer": ans, "exact": exact})
            elif isinstance(op, QueryBab):
                if cfg.stack == "ldd":
                    raise TraceFormatError("buy-at-bulk query needs an embedding stack",
                                           self.trace.lines[idx] if self.trace.lines else None)
                dems = [Demand(s, t, dem) for s, t, dem in op.demands]
                est = bab_query(self.forest_holder(), dems, PriceFn.parse(op.fn))
                self.queries.append({"op": idx, "bab": [list(x) for x in op.demands], "fn": op.fn,
                                     "estimate": est})
            elif isinstance(op, Observe):
                if cfg.check == "observe" or (cfg.check == "every" and not self.deep_every):
                    self.run_checks(idx)
                self.observations.append(self.snapshot(idx, op.tag))
        if self.obj is None and self.decremental:
            self._build()
        report = {
            "schema": 1,
            "stack": cfg.stack,
            "seed": cfg.seed,
            "n": self.trace.n,
            "W": self.trace.W,
            "config": asdict(cfg),
            "counters": self.counters(),
            "observations": self.observations,
            "queries": self.queries,
            "checks": self.checks,
            "domination_pairs": self.domination_pairs,
            "violations": 0,
        }
        if cfg.timings:
            report["seconds"] = time.perf_counter() - t0
        return report

    def counters(self) -> dict:
        n = self.trace.n
        log_n = math.log2(n) if n > 1 else 1.0
        ln_n = math.log(n) if n > 1 else 1.0
        s = self.cfg.stack
        o = self.obj
        if s == "ldd":
            ch = max(o.cluster_changes.values(), default=0)
            rec = max((c.recenters for c in o.clusters.values()), default=0)
            return {
                "splits": o.n_splits,
                "recenters": o.n_recenters,
                "max_cluster_changes": ch,
                "max_recenters_per_cluster": rec,
                "genealogy_depth": o.max_depth,
                "c1": ch / log_n,
                "c2": rec / (o.a * ln_n),
            }
        if s == "decr":
            ch = max(o.change_count.values(), default=0)
            log_d = max(1.0, math.log2(o.delta))
            changes = [max(l.cluster_changes.values(), default=0) for l in o.levels[1:]]
            recs = [max((c.recenters for c in l.clusters.values()), default=0) for l in o.levels[1:]]
            return {
                "L": o.L,
                "splits_per_level": o.n_splits,
                "clamped_levels": sum(o.clamped[1:]),
                "max_path_changes": ch,
                "c3": ch / (log_n * log_d),
                "c1": max(changes, default=0) / log_n,
                "c2": max(recs, default=0) / (o.a * ln_n),
            }
        embs = o.copies if s == "oracle" else [o]
        return {
            "restarts": sum(e.restarts for e in embs),
            "m_bound": max(e.m_bound for e in embs),
            "phases": sum(e.state.phase + 1 for e in embs),
            "max_h_nodes": max(e.state.max_h_nodes for e in embs),
        }


def replay(trace: Trace, cfg: Config) -> dict:
    return Runner(trace, cfg).run()
