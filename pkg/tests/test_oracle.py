import itertools

import numpy as np

from lzrange.lz import Factor
from lzrange.oracle import (
    OracleConfig, is_valid_source, oracle_lz, oracle_range_pred, oracle_range_pred_batch, oracle_rightmost,
    phrase_starts,
)
from lzrange.range_pred import PointSet


def test_examples():
    assert [f.span for f in oracle_lz("araarraaa")] == [1, 1, 1, 2, 3, 1]
    assert oracle_lz("z") == [Factor("z", 0)]
    assert oracle_lz("aaa") == [Factor("a", 0), Factor(1, 2)]
    assert oracle_rightmost("araarraaa")[-1] == Factor(8, 1)
    assert oracle_rightmost("abab")[2] == Factor(1, 2)
    assert oracle_rightmost("aaaa")[1] == Factor(1, 3)
    pts = PointSet([3, 1, 2])
    assert oracle_range_pred(pts, 1, 3, 2) == (3, 2)
    assert oracle_range_pred(pts, 2, 3, 0) is None
    assert oracle_range_pred(pts, 1, 3, 3) == (1, 3)


def test_boundaries_agree_and_sources_valid():
    for n in range(1, 11):
        for w in itertools.product("ab", repeat=n):
            s = "".join(w)
            a, b = oracle_lz(s), oracle_rightmost(s)
            assert [f.length for f in a] == [f.length for f in b]
            for i, f in zip(phrase_starts(b), b):
                if f.length:
                    assert is_valid_source(s, i, f.src, f.length)
                    assert not any(is_valid_source(s, i, p, f.length) for p in range(f.src + 1, i))


def test_batch_matches_scalar_and_determinism():
    cfg = OracleConfig(seed=3)
    rng = cfg.rng()
    Y = rng.permutation(50) + 1
    x1 = rng.integers(1, 26, 100)
    x2 = x1 + rng.integers(0, 25, 100)
    y2 = rng.integers(1, 51, 100)
    bx, by = oracle_range_pred_batch(Y, x1, x2, y2)
    for k in range(100):
        r = oracle_range_pred(Y, int(x1[k]), int(x2[k]), int(y2[k]))
        assert (bx[k], by[k]) == ((0, 0) if r is None else r)
    assert np.array_equal(OracleConfig(seed=3).rng().permutation(50) + 1, Y)
