"""Run one fixed trace under many seeds and aggregate the statistics.

Seeds are processed in order (optionally chunked over worker processes) and
merged in seed order, so the aggregate is independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from dyntree.harness.oracles import cut_tolerance, percentile
from dyntree.harness.replay import Config, replay
from dyntree.harness.trace import Delete, Insert, Observe, Trace


def alive_at_observations(trace: Trace) -> list[dict]:
    """Edge -> weight map alive at each Observe op, in order."""
    alive: dict = {}
    out = []
    for op in trace.ops:
        if isinstance(op, Insert):
            alive[(min(op.u, op.v), max(op.u, op.v))] = op.w
        elif isinstance(op, Delete):
            del alive[(min(op.u, op.v), max(op.u, op.v))]
        elif isinstance(op, Observe):
            out.append(dict(alive))
    return out


def _run_one(args) -> dict:
    trace, cfg = args
    rep = replay(trace, cfg)
    return {"observations": rep["observations"], "counters": rep["counters"]}


def _dist(xs: list[float]) -> dict:
    if not xs:
        return {"count": 0}
    s = sorted(xs)
    return {
        "count": len(s),
        "mean": math.fsum(s) / len(s),
        "median": percentile(s, 50),
        "p95": percentile(s, 95),
        "p99": percentile(s, 99),
        "min": s[0],
        "max": s[-1],
    }


def montecarlo(trace: Trace, seeds: int, cfg: Config, workers: int = 1, min_seeds: int = 100) -> dict:
    if seeds < min_seeds:
        raise ValueError(f"need at least {min_seeds} seeds, got {seeds}")
    jobs = [(trace, replace(cfg, seed=cfg.seed + s)) for s in range(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_one, jobs, chunksize=max(1, seeds // (4 * workers))))
    else:
        results = [_run_one(j) for j in jobs]

    alive = alive_at_observations(trace)
    tags = [op.tag for op in trace.ops if isinstance(op, Observe)]
    out: dict = {"schema": 1, "kind": "montecarlo", "stack": cfg.stack, "seeds": seeds,
                 "base_seed": cfg.seed}
    if cfg.stack == "ldd":
        obs_out = []
        worst = -math.inf
        for j, edges in enumerate(alive):
            counts = dict.fromkeys(edges, 0)
            for r in results:
                for u, v in r["observations"][j]["cut"]:
                    counts[(u, v)] += 1
            rows = []
            for (u, v), w in sorted(edges.items()):
                freq = counts[(u, v)] / seeds
                bound = cut_tolerance(cfg.beta, w, seeds)
                worst = max(worst, freq - bound)
                rows.append({"u": u, "v": v, "w": w, "cut": counts[(u, v)], "freq": freq,
                             "bound": bound, "ok": freq <= bound})
            obs_out.append({"tag": tags[j], "edges": rows})
        out["cut"] = obs_out
        out["cut_ok"] = all(r["ok"] for o in obs_out for r in o["edges"])
        out["max_excess"] = worst if obs_out else 0.0
    else:
        obs_out = []
        per_edge_means = []
        overall_min = math.inf
        for j, edges in enumerate(alive):
            sums: dict = {}
            for r in results:
                for u, v, s in r["observations"][j]["stretch"]:
                    sums[(u, v)] = sums.get((u, v), 0.0) + s
                    overall_min = min(overall_min, s)
            means = {e: sums[e] / seeds for e in sorted(sums)}
            per_edge_means.extend(means.values())
            obs_out.append({"tag": tags[j], "mean_stretch": [[u, v, m] for (u, v), m in means.items()]})
        out["stretch"] = obs_out
        out["per_edge_mean_stretch"] = _dist(per_edge_means)
        out["min_stretch"] = overall_min if per_edge_means else None
    keys = sorted({k for r in results for k, v in r["counters"].items() if isinstance(v, (int, float))})
    out["counters"] = {k: _dist([float(r["counters"][k]) for r in results]) for k in keys}
    return out
