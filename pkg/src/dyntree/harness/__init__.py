from dyntree.harness.montecarlo import montecarlo
from dyntree.harness.oracles import exhaustive_bab_opt, floyd_warshall, oracle_apsp
from dyntree.harness.replay import Config, InvariantViolation, replay
from dyntree.harness.trace import Trace, TraceFormatError, format_trace, load_trace, parse_trace

__all__ = [
    "Config", "InvariantViolation", "Trace", "TraceFormatError", "exhaustive_bab_opt",
    "floyd_warshall", "format_trace", "load_trace", "montecarlo", "oracle_apsp", "parse_trace",
    "replay",
]
