import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chi2

from dyntree.sampling import (
    EmptyDistribution, InvalidParameter, RngStream, geometric, hash_uniform, radius, weighted_pick,
)


def draws(p, k, tag="t"):
    rng = RngStream(12345, tag)
    return [geometric(rng, p) for _ in range(k)]


def test_certain_success():
    rng = RngStream(0, "x")
    assert all(geometric(rng, 1.0) == 1 for _ in range(100))
    assert all(radius(rng, 1.0) == 0 for _ in range(100))


@pytest.mark.parametrize("p", [0.0, -0.1, 1.5, math.nan])
def test_invalid_p(p):
    with pytest.raises(InvalidParameter):
        geometric(RngStream(0), p)


def test_half_tail_and_mean():
    xs = draws(0.5, 10**6)
    tail = sum(1 for x in xs if x >= 3) / len(xs)
    assert abs(tail - 0.25) <= 0.002
    assert abs(math.fsum(xs) / len(xs) - 2.0) <= 0.01
    assert min(xs) >= 1


@pytest.mark.parametrize("p", [0.05, 0.3, 0.7])
def test_tail_law(p):
    N = 10**6
    c = Counter(draws(p, N, f"tail/{p}"))
    ge = N
    for k in range(1, 21):
        q = (1 - p) ** (k - 1)
        se = math.sqrt(q * (1 - q) / N)
        assert abs(ge / N - q) <= 3 * se + 1e-12, (k, ge / N, q)
        ge -= c.get(k, 0)


def test_radius_bound():
    p, a, n = 0.1, 1, 256
    cap = math.floor(a / p * math.log(n))
    rng = RngStream(7, "radius")
    N = 10**5
    ok = sum(1 for _ in range(N) if radius(rng, p) <= cap)
    assert ok / N >= 1 - 1 / n


def test_memorylessness():
    p, t, N = 0.3, 5, 10**5
    rng = RngStream(3, "memoryless")
    rs = [radius(rng, p) for _ in range(N)]
    shifted = [r - t for r in rs if r >= t]
    # bins 0..K-1 plus an open tail bin
    K = 8
    obs = [0] * (K + 1)
    for x in shifted:
        obs[min(x, K)] += 1
    m = len(shifted)
    probs = [p * (1 - p) ** k for k in range(K)] + [(1 - p) ** K]
    stat = sum((o - m * q) ** 2 / (m * q) for o, q in zip(obs, probs))
    assert stat < chi2.ppf(0.99, K)


def test_weighted_pick_single_and_empty():
    rng = RngStream(0)
    assert weighted_pick(rng, {4: 2.0}) == 4
    assert weighted_pick(rng, {1: 0.0, 4: 2.0}) == 4
    with pytest.raises(EmptyDistribution):
        weighted_pick(rng, {1: 0, 2: 0})
    with pytest.raises(EmptyDistribution):
        weighted_pick(rng, {})


def test_star_hub_frequency():
    # K_{1,3}: hub 0 has degree 3, leaves degree 1
    rng = RngStream(99, "star")
    N = 10**5
    hits = sum(1 for _ in range(N) if weighted_pick(rng, {0: 3, 1: 1, 2: 1, 3: 1}) == 0)
    assert abs(hits / N - 0.5) <= 0.01


@given(st.integers(0, 2**64 - 1), st.text(max_size=20))
def test_streams_replay(seed, tag):
    a, b = RngStream(seed, tag), RngStream(seed, tag)
    assert [a.random() for _ in range(5)] == [b.random() for _ in range(5)]
    c = RngStream(seed, tag)
    c.random()
    assert c.fresh().random() == RngStream(seed, tag).random()


def test_child_streams_differ():
    r = RngStream(1, "ldd")
    xs = [r.child(f"cluster={i}").random() for i in range(50)]
    assert len(set(xs)) == 50
    assert r.child("a").tag == "ldd/a"


def test_sibling_isolation():
    # consuming one child does not shift another
    r = RngStream(5, "root")
    a1 = r.child("a")
    [a1.random() for _ in range(10)]
    assert r.child("b").random() == RngStream(5, "root/b").random()


def test_hash_uniform_stable():
    u = hash_uniform(3, "frt", 17)
    assert u == hash_uniform(3, "frt", 17)
    assert 0.0 <= u < 1.0
    assert u != hash_uniform(4, "frt", 17)
