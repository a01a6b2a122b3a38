"""Plain-text update traces.

One op per line::

    n <n> <W>
    i <u> <v> <w>          insert
    d <u> <v>              delete
    q <u> <v>              distance query
    b <k> <s1> <t1> <dem1> ... <price-fn>
    o <tag>                observation point

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from dyntree.buyatbulk import InvalidPriceFn, PriceFn


class TraceFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass(frozen=True)
class Insert:
    u: int
    v: int
    w: float


@dataclass(frozen=True)
class Delete:
    u: int
    v: int


@dataclass(frozen=True)
class QueryDist:
    u: int
    v: int


@dataclass(frozen=True)
class QueryBab:
    demands: tuple  # of (s, t, dem)
    fn: str


@dataclass(frozen=True)
class Observe:
    tag: str


Op = Union[Insert, Delete, QueryDist, QueryBab, Observe]


@dataclass
class Trace:
    n: int
    W: float
    ops: list = field(default_factory=list)
    lines: list = field(default_factory=list)  # source line of each op, when parsed

    def updates(self) -> int:
        return sum(isinstance(op, (Insert, Delete)) for op in self.ops)

    def prefix(self, k: int) -> Trace:
        return Trace(self.n, self.W, self.ops[:k], self.lines[:k])


def _num(tok: str, line: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise TraceFormatError(f"expected a number, got {tok!r}", line) from None
    return int(x) if x == int(x) else x


def _node(tok: str, n: int, line: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise TraceFormatError(f"expected a node id, got {tok!r}", line) from None
    if not 0 <= v < n:
        raise TraceFormatError(f"node {v} outside [0, {n})", line)
    return v


def parse_trace(text: str) -> Trace:
    trace: Trace | None = None
    alive: set = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if trace is None:
            if kind != "n" or len(tok) != 3:
                raise TraceFormatError("trace must start with 'n <n> <W>'", lineno)
            n = int(_num(tok[1], lineno))
            W = _num(tok[2], lineno)
            if n < 1 or W < 1:
                raise TraceFormatError("need n >= 1 and W >= 1", lineno)
            trace = Trace(n, W)
            continue
        n = trace.n
        if kind == "i":
            if len(tok) != 4:
                raise TraceFormatError("insert takes 'i u v w'", lineno)
            u, v = _node(tok[1], n, lineno), _node(tok[2], n, lineno)
            w = _num(tok[3], lineno)
            if u == v:
                raise TraceFormatError("self-loop", lineno)
            if not 1 <= w <= trace.W:
                raise TraceFormatError(f"weight {w} outside [1, {trace.W}]", lineno)
            key = (min(u, v), max(u, v))
            if key in alive:
                raise TraceFormatError(f"edge {key} inserted twice", lineno)
            alive.add(key)
            op: Op = Insert(u, v, w)
        elif kind == "d":
            if len(tok) != 3:
                raise TraceFormatError("delete takes 'd u v'", lineno)
            u, v = _node(tok[1], n, lineno), _node(tok[2], n, lineno)
            key = (min(u, v), max(u, v))
            if key not in alive:
                raise TraceFormatError(f"edge {key} deleted while absent", lineno)
            alive.discard(key)
            op = Delete(u, v)
        elif kind == "q":
            if len(tok) != 3:
                raise TraceFormatError("query takes 'q u v'", lineno)
            op = QueryDist(_node(tok[1], n, lineno), _node(tok[2], n, lineno))
        elif kind == "b":
            if len(tok) < 3:
                raise TraceFormatError("bab query takes 'b k s t dem ... fn'", lineno)
            k = int(_num(tok[1], lineno))
            if len(tok) != 3 + 3 * k:
                raise TraceFormatError(f"bab query with k={k} needs {3 * k} demand fields", lineno)
            dems = []
            for j in range(k):
                s = _node(tok[2 + 3 * j], n, lineno)
                t = _node(tok[3 + 3 * j], n, lineno)
                dem = _num(tok[4 + 3 * j], lineno)
                if s == t or not dem > 0:
                    raise TraceFormatError("demand needs s != t and dem > 0", lineno)
                dems.append((s, t, dem))
            fn = tok[-1]
            try:
                PriceFn.parse(fn)
            except InvalidPriceFn as exc:
                raise TraceFormatError(str(exc), lineno) from None
            op = QueryBab(tuple(dems), fn)
        elif kind == "o":
            op = Observe(" ".join(tok[1:]) if len(tok) > 1 else "")
        else:
            raise TraceFormatError(f"unknown op {kind!r}", lineno)
        trace.ops.append(op)
        trace.lines.append(lineno)
    if trace is None:
        raise TraceFormatError("empty trace: missing 'n <n> <W>' header")
    return trace


def _fmt(x) -> str:
    return str(int(x)) if float(x) == int(x) else repr(float(x))


def format_trace(trace: Trace) -> str:
    out = [f"n {trace.n} {_fmt(trace.W)}"]
    for op in trace.ops:
        if isinstance(op, Insert):
            out.append(f"i {op.u} {op.v} {_fmt(op.w)}")
        elif isinstance(op, Delete):
            out.append(f"d {op.u} {op.v}")
        elif isinstance(op, QueryDist):
            out.append(f"q {op.u} {op.v}")
        elif isinstance(op, QueryBab):
            body = " ".join(f"{s} {t} {_fmt(d)}" for s, t, d in op.demands)
            out.append(f"b {len(op.demands)} {body} {op.fn}".replace("  ", " "))
        else:
            out.append(f"o {op.tag}".rstrip())
    return "\n".join(out) + "\n"


def load_trace(path: str) -> Trace:
    with open(path) as fh:
        return parse_trace(fh.read())
