import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import naive_rmq
from lzrange.rmq import RmqIndex, SampledRmq, default_block_size
from lzrange.succinct import BitVector, PackedArray


# -- examples --------------------------------------------------------------------


def test_empty_bitvector():
    bv = BitVector([])
    assert len(bv) == 0
    assert bv.rank(1, 0) == 0


def test_rank_examples():
    bv = BitVector([1, 0, 1, 1, 0])
    assert bv.rank(1, 5) == 3
    assert bv.rank(1, 3) == 2
    assert bv.rank(1, 0) == 0
    assert BitVector([0, 0, 0]).rank(0, 3) == 3


def test_select_examples():
    assert BitVector([1, 0, 1, 1, 0]).select(1, 2) == 3
    assert BitVector([1]).select(1, 1) == 1
    assert BitVector([1] * 64).select(1, 64) == 64
    with pytest.raises(LookupError):
        BitVector([0, 1]).select(1, 2)


def test_rank_out_of_range():
    bv = BitVector([1, 0])
    with pytest.raises(IndexError):
        bv.rank(1, 3)
    with pytest.raises(IndexError):
        bv.rank(1, -1)


def test_find_one_examples():
    bv = BitVector([0, 0, 1, 0])
    assert bv.find_one_in_range(1, 4) == 3
    assert bv.find_one_in_range(1, 2) is None
    assert bv.find_one_in_range(3, 2) is None


def test_rmq_examples():
    assert RmqIndex([5]).query(1, 1) == 1
    assert RmqIndex([3, 1, 2]).query(1, 3) == 2
    assert RmqIndex([2, 2, 2]).query(1, 3) == 1
    assert RmqIndex([4, 0, 9]).query(2, 3) == 2
    assert RmqIndex([7, 6, 5, 4]).query(1, 4) == 4
    for k in range(1, 5):
        assert RmqIndex([7, 6, 5, 4]).query(k, k) == k
    with pytest.raises(IndexError):
        RmqIndex([1, 2]).query(2, 1)


def test_sampled_rmq_examples():
    vals = [3, 1, 4, 1, 5, 9, 2, 6]
    s = SampledRmq(vals, 2)
    assert s.query(1, 8) == 2
    assert s.query(1, 2) == 2
    c = SampledRmq([4] * 10, 3)
    for i in range(1, 11):
        for j in range(i, 11):
            assert c.query(i, j) == i


# -- properties -------------------------------------------------------------------


def test_bitvector_random_against_scan():
    rng = np.random.default_rng(11)
    for t in range(1000):
        n = int(rng.integers(0, 4097))
        d = (0.01, 0.5, 0.99)[t % 3]
        b = (rng.random(n) < d).astype(np.uint8)
        bv = BitVector(b)
        pref = np.concatenate([[0], np.cumsum(b)])
        assert bv.rank(1, n) + bv.rank(0, n) == n
        probes = rng.integers(0, n + 1, 40)
        for i in probes:
            i = int(i)
            assert bv.rank(1, i) == pref[i]
            assert bv.rank(0, i) == i - pref[i]
            r = bv.rank(1, i)
            if r >= 1:
                assert bv.select(1, r) <= i
        ones = np.flatnonzero(b) + 1
        zeros = np.flatnonzero(b == 0) + 1
        for arr, c in ((ones, 1), (zeros, 0)):
            if arr.size:
                for k in rng.integers(1, arr.size + 1, 20):
                    assert bv.select(c, int(k)) == arr[int(k) - 1]
                assert bv.select(c, arr.size) == arr[-1]


def test_bitvector_every_position_medium():
    rng = np.random.default_rng(2)
    for n in (1, 63, 64, 65, 2047, 2048, 2049, 8193, 20000):
        b = (rng.random(n) < 0.5).astype(np.uint8)
        bv = BitVector(b)
        pref = np.concatenate([[0], np.cumsum(b)])
        for i in range(n + 1):
            assert bv.rank(1, i) == pref[i]
        ones = np.flatnonzero(b) + 1
        for k in range(1, ones.size + 1):
            assert bv.select(1, k) == ones[k - 1]


def test_find_one_exhaustive_small():
    for n in range(0, 17):
        for bits in itertools.product((0, 1), repeat=n) if n <= 10 else _sampled(n):
            bv = BitVector(bits)
            for s in range(1, n + 2):
                for e in range(s - 1, n + 1):
                    got = bv.find_one_in_range(s, e)
                    present = any(bits[s - 1:e])
                    assert (got is not None) == present
                    if got is not None:
                        assert s <= got <= e and bits[got - 1] == 1


def _sampled(n):
    # lengths 11..16 are covered on a fixed pseudo-random subset plus the extremes
    rng = np.random.default_rng(n)
    yield (0,) * n
    yield (1,) * n
    for _ in range(300):
        yield tuple(int(x) for x in rng.integers(0, 2, n))


def test_find_one_long_ranges():
    rng = np.random.default_rng(5)
    b = (rng.random(5000) < 0.002).astype(np.uint8)
    bv = BitVector(b)
    for _ in range(2000):
        s = int(rng.integers(1, 5001))
        e = int(rng.integers(s - 1, 5001))
        got = bv.find_one_in_range(s, e)
        assert (got is not None) == bool(b[s - 1:e].any())
        if got is not None:
            assert b[got - 1] == 1 and s <= got <= e


def test_rmq_random_against_scan():
    rng = np.random.default_rng(3)
    for t in range(500):
        n = int(rng.integers(1, 2049))
        vals = rng.integers(0, (4, 100, 1 << 20)[t % 3], n)
        idx = RmqIndex(vals)
        mx = RmqIndex(vals, maximum=True)
        w = max(1, int(vals.max()).bit_length())
        srmq = SampledRmq(PackedArray(vals, w), default_block_size(w))
        s2 = SampledRmq(vals, int(rng.integers(1, 9)))
        for _ in range(100):
            i = int(rng.integers(1, n + 1))
            j = int(rng.integers(i, n + 1))
            want = naive_rmq(vals, i, j)
            assert idx.query(i, j) == want
            assert srmq.query(i, j) == want
            assert s2.query(i, j) == want
            assert mx.query(i, j) == naive_rmq(vals, i, j, maximum=True)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=200), st.integers(1, 10), st.data())
def test_sampled_rmq_property(vals, b, data):
    s = SampledRmq(vals, b)
    n = len(vals)
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i, n))
    assert s.query(i, j) == naive_rmq(vals, i, j)
    assert SampledRmq(vals, b, maximum=True).query(i, j) == naive_rmq(vals, i, j, maximum=True)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=600))
def test_bitvector_property(bits):
    bv = BitVector(bits)
    n = len(bits)
    assert bv.rank(1, n) + bv.rank(0, n) == n
    for i in range(0, n + 1, max(1, n // 25)):
        assert bv.rank(1, i) == sum(bits[:i])
        r = bv.rank(0, i)
        if r:
            assert bv.select(0, r) <= i


def test_bitvector_index_overhead():
    rng = np.random.default_rng(0)
    for n in (1 << 16, 1 << 18, 300001):
        bv = BitVector(rng.integers(0, 2, n))
        assert bv.index_bits() <= 0.5 * n


def test_packed_array_roundtrip():
    rng = np.random.default_rng(9)
    for w in (1, 3, 7, 13, 31, 63, 64):
        hi = (1 << w) - 1 if w < 64 else (1 << 63) - 1
        vals = rng.integers(0, hi, 257, dtype=np.int64, endpoint=True)
        p = PackedArray(vals, w)
        assert np.array_equal(p.to_numpy(), vals)
        assert p[100] == vals[100]
    with pytest.raises(ValueError):
        PackedArray([4], 2)
