import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzrange.elias_fano import (
    cps_build_bitparallel, cps_build_simple, cps_phase_groups, cps_range_occ, ef_build,
)


def test_ef_examples():
    e = ef_build([2, 3, 7], 8, 4)
    assert e.select(2) == 3
    assert e.select(3) == 7
    assert e.rank(5) == 2
    assert e.rank(1) == 0
    empty = ef_build([], 8)
    assert all(empty.rank(q) == 0 for q in range(9))
    ident = ef_build(range(1, 9), 8)
    assert [ident.select(k) for k in range(1, 9)] == list(range(1, 9))


def test_ef_errors():
    with pytest.raises(ValueError):
        ef_build([3, 2], 8)
    with pytest.raises(ValueError):
        ef_build([1, 9], 8)
    e = ef_build([2, 3], 8)
    with pytest.raises(LookupError):
        e.select(3)
    with pytest.raises(IndexError):
        e.rank(9)


def test_ef_rank_exhaustive_small_universes():
    rng = np.random.default_rng(0)
    for _ in range(500):
        u = int(rng.integers(0, 513))
        m = int(rng.integers(0, u + 1))
        keys = np.sort(rng.choice(np.arange(1, u + 1), m, replace=False)) if m else np.zeros(0, dtype=int)
        v = int(rng.integers(1, u + 2))
        e = ef_build(keys, u, v)
        sel = [e.select(k) for k in range(1, m + 1)]
        assert sel == keys.tolist()
        assert all(a < b for a, b in zip(sel, sel[1:]))
        for q in range(u + 1):
            assert e.rank(q) == int(np.searchsorted(keys, q, "right"))


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(1, 2000), max_size=300), st.integers(1, 2048))
def test_ef_property(keyset, v):
    keys = sorted(keyset)
    e = ef_build(keys, 2000, v)
    assert e.keys().tolist() == keys
    for q in (0, 1, 999, 1000, 2000):
        assert e.rank(q) == sum(1 for k in keys if k <= q)


def test_ef_size_bound():
    rng = np.random.default_rng(1)
    for n, mult, v in [(1024, 4, None), (1024, 4, 1), (5000, 3, 64), (100000, 7, 4096), (2048, 1, 2048)]:
        keys = np.sort(rng.choice(np.arange(1, mult * n + 1), n, replace=False))
        e = ef_build(keys, mult * n, v)
        assert e.size_in_bits() <= e.size_bound()


def test_cps_examples():
    a = cps_build_simple([1, 0, 1], 2)
    assert a.positions(1).tolist() == [1, 3]
    assert cps_build_bitparallel([1, 0, 1], 2).canonical_bytes() == a.canonical_bytes()
    e = cps_build_simple([], 4)
    assert all(e.count(c) == 0 for c in range(4))
    u = cps_build_simple([2, 2, 2], 3)
    assert u.positions(2).tolist() == [1, 2, 3] and u.count(0) == u.count(1) == 0
    groups = cps_phase_groups([3, 0, 2, 1], 4, 1)
    assert [g.tolist() for g in groups] == [[0, 1], [3, 2]]
    rep = cps_build_bitparallel([5] * 40, 8)
    assert rep.positions(5).tolist() == list(range(1, 41))
    assert sum(rep.count(c) for c in range(8)) == 40
    with pytest.raises(ValueError):
        cps_build_bitparallel([0, 1, 2], 3)


def test_cps_range_occ_examples():
    c = cps_build_simple([1, 0, 1, 0], 2)
    assert cps_range_occ(c, 1, 1, 4) == (1, 3)
    assert cps_range_occ(c, 1, 2, 2) is None
    assert cps_range_occ(c, 0, 2, 2) == (2, 2)


def test_builders_equivalent():
    rng = np.random.default_rng(2)
    for it in range(100):
        sigma = (2, 4, 16, 256)[it % 4]
        n = int(rng.integers(0, 8193))
        Y = rng.integers(0, sigma, n)
        if it % 5 == 0 and n:
            Y[:] = rng.integers(0, sigma)
        a = cps_build_simple(Y, sigma)
        b = cps_build_bitparallel(Y, sigma)
        assert a.canonical_bytes() == b.canonical_bytes()
        assert sum(b.count(c) for c in range(sigma)) == n
        for _ in range(100):
            c = int(rng.integers(0, sigma))
            pos = np.flatnonzero(Y == c) + 1
            q = int(rng.integers(0, n + 1))
            assert a.rank(c, q) == b.rank(c, q) == int(np.searchsorted(pos, q, "right"))
            if pos.size:
                k = int(rng.integers(1, pos.size + 1))
                assert a.select(c, k) == b.select(c, k) == pos[k - 1]
                assert Y[b.select(c, k) - 1] == c
            if n:
                x1 = int(rng.integers(1, n + 1))
                x2 = int(rng.integers(x1, n + 1))
                inr = pos[(pos >= x1) & (pos <= x2)]
                want = (int(inr[0]), int(inr[-1])) if inr.size else None
                assert a.range_occ(c, x1, x2) == b.range_occ(c, x1, x2) == want


def test_phase_groups_split_by_high_bits():
    rng = np.random.default_rng(3)
    for sigma in (4, 16, 256):
        Y = rng.integers(0, sigma, 1000)
        s = sigma.bit_length() - 1
        for ph in range(s + 1):
            groups = cps_phase_groups(Y, sigma, ph)
            assert len(groups) == 1 << ph
            for g, seq in enumerate(groups):
                want = [y for y in Y.tolist() if y >> (s - ph) == g]
                assert sorted(seq.tolist()) == sorted(want)
