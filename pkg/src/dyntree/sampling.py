"""Named, seedable random streams.

Every random decision of an algorithm instance draws from a stream derived
from ``(master seed, tag)``, so re-running one sub-structure never perturbs
the draws seen by its siblings.
"""

from __future__ import annotations

import hashlib
import math
import random
from typing import Mapping


class InvalidParameter(ValueError):
    pass


class EmptyDistribution(ValueError):
    pass


def _derive(seed: int, tag: str) -> int:
    h = hashlib.blake2b(f"{seed}:{tag}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


class RngStream:
    __slots__ = ("seed", "tag", "_rng")

    def __init__(self, seed: int = 0, tag: str = ""):
        self.seed = int(seed)
        self.tag = tag
        self._rng = random.Random(_derive(self.seed, tag))

    def child(self, suffix: str) -> RngStream:
        return RngStream(self.seed, f"{self.tag}/{suffix}" if self.tag else suffix)

    def fresh(self) -> RngStream:
        """A new stream replaying this stream's draws from the start."""
        return RngStream(self.seed, self.tag)

    def random(self) -> float:
        return self._rng.random()

    def uniform_open(self) -> float:
        """Uniform on (0, 1]."""
        return 1.0 - self._rng.random()

    def shuffle(self, xs: list) -> None:
        self._rng.shuffle(xs)

    def geometric(self, p: float) -> int:
        return geometric(self, p)

    def radius(self, p: float) -> int:
        return radius(self, p)

    def weighted_pick(self, weights: Mapping[int, float]) -> int:
        return weighted_pick(self, weights)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, tag={self.tag!r})"


def geometric(rng: RngStream, p: float) -> int:
    """Trials up to and including the first success, by inversion."""
    if not (0.0 < p <= 1.0):
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    if p == 1.0:
        return 1
    u = rng.uniform_open()
    s = math.ceil(math.log(u) / math.log1p(-p))
    return s if s >= 1 else 1


def radius(rng: RngStream, p: float) -> int:
    return geometric(rng, p) - 1


def weighted_pick(rng: RngStream, weights: Mapping[int, float]) -> int:
    """Key drawn with probability proportional to its weight (keys scanned in sorted order)."""
    keys = sorted(k for k, w in weights.items() if w > 0)
    if not keys:
        raise EmptyDistribution("no strictly positive weight")
    if len(keys) == 1:
        return keys[0]
    total = math.fsum(weights[k] for k in keys)
    x = rng.random() * total
    acc = 0.0
    for k in keys:
        acc += weights[k]
        if x < acc:
            return k
    return keys[-1]


def hash_uniform(seed: int, tag: str, key) -> float:
    """Stable uniform in [0, 1) attached to ``key`` within stream ``(seed, tag)``."""
    h = hashlib.blake2b(f"{seed}:{tag}:{key!r}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") / 2.0**64
