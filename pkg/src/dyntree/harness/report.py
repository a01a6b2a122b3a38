"""JSON reports with a stable key order; infinities and NaNs become strings."""

from __future__ import annotations

import json
import math


def _clean(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(report: dict, path: str | None) -> str:
    text = dumps(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
