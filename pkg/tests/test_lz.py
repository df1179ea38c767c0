import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import lpf, random_text, repetitive_text
from lzrange.lz import BlockMaxima, Factor, LZParser, decode, decode_arrays, lz_parse
from lzrange.oracle import is_valid_source, oracle_lz, phrase_starts
from lzrange.text_index import Text, TextIndex


def lengths(fs):
    return [f.length for f in fs]


def check_parse(s):
    f = lz_parse(s)
    o = oracle_lz(s)
    assert lengths(f) == lengths(o)
    for i, x in zip(phrase_starts(f), f):
        if x.length:
            assert is_valid_source(s, i, x.src, x.length)
        else:
            assert x.src == s[i - 1]
    return f


def test_paper_example():
    f = check_parse("araarraaa")
    assert [x.span for x in f] == [1, 1, 1, 2, 3, 1]
    assert f[0] == Factor("a", 0) and f[1] == Factor("r", 0)
    assert decode(f) == "araarraaa"


def test_small_examples():
    assert lz_parse("abc") == [Factor("a", 0), Factor("b", 0), Factor("c", 0)]
    assert lz_parse("aaaaaaaa") == [Factor("a", 0), Factor(1, 7)]
    assert lz_parse("") == []
    assert decode([]) == []
    assert decode([Factor("x", 0), Factor("y", 0)]) == "xy"
    assert lz_parse(b"abab") == [Factor(97, 0), Factor(98, 0), Factor(1, 2)]


def test_decode_errors():
    with pytest.raises(ValueError):
        decode([Factor("a", 0), Factor(2, 1)])
    with pytest.raises(ValueError):
        decode([Factor("a", 0), Factor(0, 1)])
    with pytest.raises(ValueError):
        decode_arrays([97, 3], [0, 2])


def test_exhaustive_small():
    for alpha, top in (("ab", 14), ("abc", 9)):
        for n in range(1, top + 1):
            for w in itertools.product(alpha, repeat=n):
                check_parse("".join(w))


def test_uniform_string():
    for n in (2, 10, 100000):
        assert len(lz_parse("a" * n)) == 2


def test_roundtrip_random():
    rng = np.random.default_rng(0)
    for k in range(500):
        sigma = (2, 4, 26, 255)[k % 4]
        n = int(rng.integers(1, 100001 if k % 50 == 0 else 5001))
        x = rng.integers(0, sigma, n).astype(np.uint8)
        if k % 3 == 0:
            x = np.tile(x[:max(1, n // 20)], 21)[:n]
        data = x.tobytes()
        src, ln = LZParser(data).parse_arrays()
        assert decode_arrays(src, ln).astype(np.uint8).tobytes() == data
        if n <= 3000:
            assert ln.tolist() == lengths(oracle_lz(data))


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="abcd", max_size=120))
def test_parse_property(s):
    f = check_parse(s)
    assert decode(f, as_str=True) == s


def test_gate_matches_lpf():
    rng = np.random.default_rng(3)
    for k in range(60):
        n = int(rng.integers(1, 70))
        s = random_text(rng, n, (2, 3, 5)[k % 3]) if k % 2 else repetitive_text(rng, n, 2)
        p = LZParser(s)
        for i in range(1, n + 1):
            l = lpf(s, i)
            for j in range(1, n - i + 2):
                assert p.gate(i, j) == (l >= j)
    p = LZParser("aab")
    assert p.gate(2, 1) is True
    assert p.gate(3, 1) is False


def test_block_maxima():
    ti = TextIndex(Text([1, 2, 1, 2, 0]))
    bm = BlockMaxima(ti, 2)
    sa = ti.sa
    want = [int(sa[k:k + 2].max()) for k in range(0, ti.n, 2)]
    assert bm.values().tolist() == want
    one = BlockMaxima(TextIndex(Text([1, 2, 0])), 8)
    assert one.values().tolist() == [3]
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = rng.integers(1, 4, int(rng.integers(1, 3000)))
        codes = np.unique(x, return_inverse=True)[1] + 1
        ti = TextIndex(Text.from_codes(codes))
        b = int(rng.integers(1, 9))
        sa = ti.sa
        want = [int(sa[k:k + b].max()) for k in range(0, ti.n, b)]
        assert BlockMaxima(ti, b).values().tolist() == want


def test_aux_space_bound():
    rng = np.random.default_rng(2)
    for text in (rng.integers(0, 4, 1 << 16).astype(np.uint8).tobytes(),
                 repetitive_text(rng, 1 << 17, 4, period=997, edits=50)):
        p = LZParser(text)
        n = len(text)
        rep = p.aux_space_report()
        b = p.maxima.b
        assert sum(rep.values()) <= 6 * n + (n / b) * (n - 1).bit_length() + 1024
