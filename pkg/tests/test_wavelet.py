import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzrange.wavelet import WaveletTree, wt_split_core


def brute_range_pred(s, x1, x2, y2):
    seg = [v for v in s[x1 - 1:x2] if v <= y2]
    return max(seg) if seg else None


def test_split_examples():
    v0, v1 = wt_split_core([5, 2, 7, 1], 1, 3)
    assert v0.tolist() == [2, 1] and v1.tolist() == [5, 7]
    v0, v1 = wt_split_core([], 1, 3)
    assert v0.tolist() == [] and v1.tolist() == []
    v0, v1 = wt_split_core([0, 0], 3, 3)
    assert v0.tolist() == [0, 0] and v1.tolist() == []
    with pytest.raises(IndexError):
        wt_split_core([1], 4, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10).flatmap(lambda k: st.tuples(
    st.just(k), st.integers(1, k), st.lists(st.integers(0, (1 << k) - 1), max_size=300))))
def test_split_is_stable_partition(args):
    k, p, V = args
    v0, v1 = wt_split_core(V, p, k)
    bit = lambda v: (v >> (k - p)) & 1
    assert v0.tolist() == [v for v in V if bit(v) == 0]
    assert v1.tolist() == [v for v in V if bit(v) == 1]


def test_build_examples():
    wt = WaveletTree([3, 1, 2, 1], 4)
    assert wt.level_bits(0).tolist() == [1, 0, 1, 0]
    assert wt.rank(1, 4) == 2
    assert wt.select(2, 1) == 3
    assert all(wt.rank(c, 0) == 0 for c in range(4))
    assert wt.range_pred(1, 4, 2) == (3, 2)
    assert wt.range_pred(1, 1, 2) is None
    assert wt.range_pred(1, 4, 3) == (1, 3)
    unary = WaveletTree([0, 0, 0], 1)
    assert unary.depth == 0
    assert [unary.access(i) for i in (1, 2, 3)] == [0, 0, 0]
    two = WaveletTree([1, 0], 2)
    assert two.depth == 1 and two.level_bits(0).tolist() == [1, 0]


def test_errors():
    with pytest.raises(ValueError):
        WaveletTree([4], 4)
    wt = WaveletTree([1, 0], 2)
    with pytest.raises(IndexError):
        wt.access(3)
    with pytest.raises(IndexError):
        wt.rank(2, 1)
    with pytest.raises(LookupError):
        wt.select(1, 2)
    with pytest.raises(IndexError):
        wt.range_pred(2, 1, 0)


def test_random_against_naive():
    rng = np.random.default_rng(4)
    for t in range(200):
        sigma = (2, 5, 64, 300)[t % 4]
        n = int(rng.integers(1, 4097))
        s = rng.integers(0, sigma, n)
        wt = WaveletTree(s, sigma)
        assert np.array_equal(wt.to_numpy(), s) if n <= 600 else True
        for i in rng.integers(1, n + 1, 200):
            assert wt.access(int(i)) == s[int(i) - 1]
        for _ in range(1000):
            c = int(rng.integers(0, sigma))
            i = int(rng.integers(0, n + 1))
            assert wt.rank(c, i) == int(np.count_nonzero(s[:i] == c))
        for _ in range(300):
            c = int(s[int(rng.integers(0, n))])
            occ = np.flatnonzero(s == c)
            k = int(rng.integers(1, occ.size + 1))
            assert wt.select(c, k) == occ[k - 1] + 1
        for _ in range(1000):
            x1 = int(rng.integers(1, n + 1))
            x2 = int(rng.integers(x1, n + 1))
            y2 = int(rng.integers(0, sigma))
            want = brute_range_pred(s, x1, x2, y2)
            got = wt.range_pred(x1, x2, y2)
            if want is None:
                assert got is None
            else:
                assert got[1] == want
                assert x1 <= got[0] <= x2 and s[got[0] - 1] == want
                if np.unique(s[x1 - 1:x2]).size == x2 - x1 + 1:
                    assert got[0] == x1 + int(np.flatnonzero(s[x1 - 1:x2] == want)[0])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40).flatmap(lambda sg: st.tuples(st.just(sg), st.lists(st.integers(0, sg - 1), min_size=1, max_size=200))))
def test_roundtrip_property(args):
    sigma, seq = args
    wt = WaveletTree(seq, sigma)
    assert wt.to_numpy().tolist() == seq


def test_full_range_max():
    rng = np.random.default_rng(8)
    s = rng.integers(0, 50, 500)
    wt = WaveletTree(s, 50)
    for _ in range(200):
        x1 = int(rng.integers(1, 501))
        x2 = int(rng.integers(x1, 501))
        assert wt.range_pred(x1, x2, 49)[1] == s[x1 - 1:x2].max()


def test_space_bound():
    rng = np.random.default_rng(1)
    for sigma in (2, 4, 26, 255):
        n = 1 << 16
        wt = WaveletTree(rng.integers(0, sigma, n), sigma)
        lg = max(1, (sigma - 1).bit_length())
        assert wt.size_in_bits() <= 1.6 * n * lg + 4096
