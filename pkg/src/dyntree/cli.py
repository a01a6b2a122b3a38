"""Command line: ``dyntree replay | mc | gen``."""

from __future__ import annotations

import argparse
import sys

from dyntree.harness.generate import FAMILIES
from dyntree.harness.montecarlo import montecarlo
from dyntree.harness.replay import STACKS, Config, InvariantViolation, replay
from dyntree.harness.report import write_report
from dyntree.harness.trace import TraceFormatError, format_trace, load_trace


def _stack_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trace", required=True)
    p.add_argument("--stack", choices=STACKS, default="decr")
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--copies", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", choices=("none", "observe", "every"), default="observe")
    p.add_argument("--no-exact", action="store_true", help="skip exact-distance oracle checks")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--report", default=None)


def _config(ns) -> Config:
    if not 0 <= ns.seed < 2**64:
        raise SystemExit("--seed must be a 64-bit unsigned integer")
    return Config(stack=ns.stack, beta=ns.beta, a=ns.a, depth=ns.depth, copies=ns.copies,
                  seed=ns.seed, check=ns.check, exact=not ns.no_exact, timings=ns.timings)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyntree")
    sub = ap.add_subparsers(dest="cmd", required=True)
    _stack_args(sub.add_parser("replay", help="replay a trace under one seed"))
    mc = sub.add_parser("mc", help="Monte Carlo over many seeds")
    _stack_args(mc)
    mc.add_argument("--seeds", type=int, default=100)
    mc.add_argument("--workers", type=int, default=1)
    gen = sub.add_parser("gen", help="generate a trace")
    gen.add_argument("--family", choices=sorted(FAMILIES), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=0)
    gen.add_argument("--W", type=int, default=16)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.cmd == "gen":
        text = format_trace(FAMILIES[ns.family](ns.n, ns.m, ns.W, ns.seed))
        if ns.out:
            with open(ns.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    try:
        trace = load_trace(ns.trace)
        cfg = _config(ns)
        if ns.cmd == "replay":
            rep = replay(trace, cfg)
        else:
            rep = montecarlo(trace, ns.seeds, cfg, workers=ns.workers)
    except TraceFormatError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        print("reproduction trace prefix:", file=sys.stderr)
        print(exc.prefix, file=sys.stderr)
        return 1
    text = write_report(rep, ns.report)
    if not ns.report:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
