import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochase.dedup import UniquePool


class PairwiseScan:
    """Quadratic reference: compare against every stored vector."""

    def __init__(self):
        self.rows = []

    def insert_if_new(self, tv):
        tv = np.asarray(tv)
        for r in self.rows:
            if np.array_equal(r, tv):
                return False
        self.rows.append(tv.copy())
        return True


def test_insert_twice():
    pool = UniquePool()
    v = np.array([1, 2, 3])
    assert pool.insert_if_new(v) is True
    assert pool.insert_if_new(v.copy()) is False
    assert v in pool and pool.count == 1


def test_distinct_vectors_counted():
    pool = UniquePool(4)
    vecs = np.eye(4, dtype=int)
    assert all(pool.insert_if_new(v) for v in vecs)
    assert pool.count == len(pool) == 4


def test_no_fuzzy_matching():
    pool = UniquePool()
    pool.insert_if_new([0, 0, 1])
    assert pool.insert_if_new([0, 0, 2])
    assert pool.insert_if_new([0, 1, 0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=5, max_size=5), max_size=60))
def test_matches_pairwise_scan(rows):
    pool, ref = UniquePool(), PairwiseScan()
    for r in rows:
        assert pool.insert_if_new(r) == ref.insert_if_new(r)
    assert pool.count == len(ref.rows)


def test_insert_rows_mask_matches_sequential():
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 2, (300, 6))
    pool_a, pool_b = UniquePool(), UniquePool()
    mask = pool_a.insert_rows(rows)
    assert mask.tolist() == [pool_b.insert_if_new(r) for r in rows]


def test_length_checked():
    pool = UniquePool(3)
    with pytest.raises(ValueError):
        pool.insert_if_new([1, 2])
    with pytest.raises(ValueError):
        pool.insert_rows(np.zeros((2, 4), dtype=int))


def _time_inserts(pool, rows):
    t0 = time.perf_counter()
    for r in rows:
        pool.insert_if_new(r)
    return time.perf_counter() - t0


def test_near_linear_growth_vs_pairwise():
    rng = np.random.default_rng(1)
    rows = rng.integers(0, 256, (10**5, 255))
    t_small = _time_inserts(UniquePool(), rows[:10**4])
    t_big = _time_inserts(UniquePool(), rows)
    # 10x the inserts should cost about 10x, far from the 100x of a quadratic scan.
    assert t_big < 30 * t_small
    t_scan = _time_inserts(PairwiseScan(), rows[:2000])
    t_pool = _time_inserts(UniquePool(), rows[:2000])
    assert t_pool < t_scan
