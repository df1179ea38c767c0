"""Elias–Fano coded monotone sequences and per-symbol position sets.

A set of ``n`` keys below a universe ``u`` with ``v`` buckets stores the low
``log2(u/v)`` bits of each key in a packed array and the bucket of each key
in unary inside a high bitvector: a one per key, a zero closing each bucket.
``u`` and ``v`` are rounded up to powers of two.

Several sets can share one high bitvector and one low array (a pool).  The
kernels therefore take the offsets of a set explicitly; callers that lay
sets out regularly compute those offsets arithmetically.

Rank first locates the key range of the query's bucket with two select-0
probes (the bucket directory) and then binary-searches the low bits inside
that bucket.
"""

from __future__ import annotations

import struct

import numpy as np
from numba import njit

from ._tables import low_mask, popcount64
from .rmq import _k_read_bits
from .succinct import BitVector, _k_select, _k_bit
from .wavelet import _k_split_range


def pow2_ceil(x: int) -> int:
    return 1 << max(0, int(x) - 1).bit_length()


def log2_exact(x: int) -> int:
    return int(x).bit_length() - 1


def ef_shape(u: int, v: int):
    """Rounded ``(u, v, low_width)`` for a universe and bucket request."""
    ur = pow2_ceil(max(u, 1))
    vr = min(pow2_ceil(max(v, 1)), ur)
    return ur, vr, log2_exact(ur // vr)


# -- kernels -------------------------------------------------------------------


@njit(cache=True, inline="always")
def _k_low(low, bitpos, lw):
    if lw == 0:
        return np.int64(0)
    return _k_read_bits(low, bitpos, lw)


@njit(cache=True)
def _k_ef_select(hw, hsb, hblk, hs1, hbits, low, ones_before, hb_off, low_off, lw, k):
    """0-based key of the k-th (1-based) element of a pooled set."""
    p = _k_select(hw, hsb, hblk, hs1, hs1.shape[0], hbits, ones_before + k, 1)
    high = (p - hb_off) - (k - 1)
    return (high << lw) | _k_low(low, low_off + (k - 1) * lw, lw)


@njit(cache=True)
def _k_ef_rank(hw, hsb, hblk, hs0, hbits, low, nk, v, lw, hb_off, zeros_before, low_off, q):
    """Keys <= q (0-based values) in a pooled set."""
    if nk == 0 or q < 0:
        return 0
    h = q >> lw
    if h >= v:
        return nk
    # ones before the closing zero of bucket h, and of bucket h - 1
    p = _k_select(hw, hsb, hblk, hs0, hs0.shape[0], hbits, zeros_before + h + 1, 0)
    hi = p - hb_off - h
    lo = 0
    if h > 0:
        p = _k_select(hw, hsb, hblk, hs0, hs0.shape[0], hbits, zeros_before + h, 0)
        lo = p - hb_off - (h - 1)
    ql = q & ((1 << lw) - 1)
    # first index in [lo, hi) whose low part exceeds ql
    while lo < hi:
        mid = (lo + hi) >> 1
        if _k_low(low, low_off + mid * lw, lw) <= ql:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _k_ef_fill(keys, zoff, lw, nbits):
    """Encode keys laid out set after set; zoff[j] = zeros preceding key j's set.

    Returns (high words, low words).  Key j's one lands at
    ``zoff[j] + (keys[j] >> lw) + j`` since every earlier key contributes
    exactly one bit.
    """
    n = keys.shape[0]
    hw = np.zeros((nbits + 63) >> 6, dtype=np.uint64)
    lowbits = n * lw
    low = np.zeros(((lowbits + 63) >> 6) + 1, dtype=np.uint64)
    m = low_mask(lw)
    for j in range(n):
        b = zoff[j] + (keys[j] >> lw) + j
        hw[b >> 6] |= np.uint64(1) << np.uint64(b & 63)
        if lw:
            x = np.uint64(keys[j]) & m
            bit = j * lw
            wi = bit >> 6
            off = bit & 63
            low[wi] |= x << np.uint64(off)
            if off + lw > 64:
                low[wi + 1] |= x >> np.uint64(64 - off)
    return hw, low


@njit(cache=True)
def _k_counting_positions(Y, sigma):
    """Positions grouped by symbol (stable) and the cumulative counts."""
    n = Y.shape[0]
    C = np.zeros(sigma + 1, dtype=np.int64)
    for i in range(n):
        C[Y[i] + 1] += 1
    for a in range(sigma):
        C[a + 1] += C[a]
    fill = C[:sigma].copy()
    pos = np.empty(n, dtype=np.int64)
    sym = np.empty(n, dtype=np.int64)
    for i in range(n):
        a = Y[i]
        pos[fill[a]] = i
        sym[fill[a]] = a
        fill[a] += 1
    return pos, sym, C


@njit(cache=True)
def _k_cps_simple(Y, sigma, lw, v):
    pos, sym, C = _k_counting_positions(Y, sigma)
    zoff = sym * v
    nbits = Y.shape[0] + sigma * v
    hw, low = _k_ef_fill(pos, zoff, lw, nbits)
    return hw, low, C


# -- bit-parallel construction --------------------------------------------------


def _vsplit_table():
    # key = vbyte * 256 + mask; mask holds the symbol bits of vbyte's ones in
    # order.  Ones go to the side their bit picks; zeros close a bucket on
    # both sides.  Packed as out0 | out1 << 8 | len0 << 16 | len1 << 20.
    t = np.zeros(256 * 256, dtype=np.uint32)
    for vb in range(256):
        c = bin(vb).count("1")
        for mask in range(1 << c):
            o0 = o1 = l0 = l1 = j = 0
            for off in range(8):
                if vb >> off & 1:
                    if mask >> j & 1:
                        o1 |= 1 << l1
                        l1 += 1
                    else:
                        o0 |= 1 << l0
                        l0 += 1
                    j += 1
                else:
                    l0 += 1
                    l1 += 1
            t[vb * 256 + mask] = o0 | (o1 << 8) | (l0 << 16) | (l1 << 20)
    return t


VSPLIT8 = _vsplit_table()


@njit(cache=True, inline="always")
def _k_put_bits(words, pos, x, nbits):
    if nbits == 0:
        return
    x = np.uint64(x) & low_mask(nbits)
    wi = pos >> 6
    off = pos & 63
    words[wi] |= x << np.uint64(off)
    if off + nbits > 64:
        words[wi + 1] |= x >> np.uint64(64 - off)


@njit(cache=True)
def _k_initial_high(n, lw, v):
    """Unary bucket sizes of the full position set 0..n-1."""
    nbits = n + v
    hw = np.zeros(((nbits + 63) >> 6) + 1, dtype=np.uint64)
    p = 0
    size = 1 << lw
    for h in range(v):
        c = min(size, max(0, n - h * size))
        # c ones then one zero
        while c >= 64:
            _k_put_bits(hw, p, np.uint64(0xFFFFFFFFFFFFFFFF), 64)
            p += 64
            c -= 64
        if c:
            _k_put_bits(hw, p, low_mask(c), c)
            p += c
        p += 1
    return hw


@njit(cache=True)
def _k_cps_bitparallel(Y, s, lw, v, nphase):
    """Split the Elias–Fano code of all positions by the symbol bits, MSB first.

    Each element carries ``(symbol << lw) | (position & (2**lw - 1))`` so the
    low parts travel with their symbols.  After phase ``i`` there are
    ``2**i`` groups, each the code of the positions whose symbol starts with
    the group's ``i``-bit prefix.
    """
    n = Y.shape[0]
    comb = np.empty(n, dtype=np.int64)
    for i in range(n):
        comb[i] = (Y[i] << lw) | (i & ((1 << lw) - 1))
    hw = _k_initial_high(n, lw, v)
    eb = np.zeros(2, dtype=np.int64)
    eb[1] = n
    vb = np.zeros(2, dtype=np.int64)
    vb[1] = n + v
    for phase in range(min(s, nphase)):
        b = s - 1 - phase
        ng = eb.shape[0] - 1
        nwp = (n + 63) >> 6
        plane = np.zeros(nwp + 1, dtype=np.uint64)
        for i in range(n):
            if (comb[i] >> (lw + b)) & 1:
                plane[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
        ncomb = np.empty(n, dtype=np.int64)
        neb = np.zeros(2 * ng + 1, dtype=np.int64)
        nvb = np.zeros(2 * ng + 1, dtype=np.int64)
        nbits = n + 2 * ng * v
        nhw = np.zeros(((nbits + 63) >> 6) + 1, dtype=np.uint64)
        for g in range(ng):
            lo = eb[g]
            hi = eb[g + 1]
            ones = 0
            for i in range(lo, hi):
                ones += _k_bit(plane, i)
            z = (hi - lo) - ones
            _k_split_range(comb, plane, lo, hi, ncomb, lo, lo + z)
            neb[2 * g + 1] = lo + z
            neb[2 * g + 2] = hi
            c0 = nvb[2 * g]
            nvb[2 * g + 1] = c0 + z + v
            c1 = nvb[2 * g + 1]
            nvb[2 * g + 2] = c1 + ones + v
            # route the group's high bits eight at a time
            p = vb[g]
            end = vb[g + 1]
            e = lo
            while p < end:
                cnt = min(8, end - p)
                byte = _k_read_bits(hw, p, cnt)
                k = popcount64(np.uint64(byte))
                mask = _k_read_bits(plane, e, k) if k else np.int64(0)
                e += k
                t = np.int64(VSPLIT8[byte * 256 + mask])
                pad = 8 - cnt
                l0 = ((t >> 16) & 0xF) - pad
                l1 = ((t >> 20) & 0xF) - pad
                _k_put_bits(nhw, c0, t & 0xFF, l0)
                _k_put_bits(nhw, c1, (t >> 8) & 0xFF, l1)
                c0 += l0
                c1 += l1
                p += cnt
        comb = ncomb
        eb = neb
        vb = nvb
        hw = nhw
    nbits = vb[vb.shape[0] - 1]
    out = np.zeros((nbits + 63) >> 6, dtype=np.uint64)
    out[:] = hw[: out.shape[0]]
    low = np.zeros(((n * lw + 63) >> 6) + 1, dtype=np.uint64)
    for j in range(n):
        _k_put_bits(low, j * lw, comb[j], lw)
    return out, low, eb, comb >> lw


# -- public classes ------------------------------------------------------------


class EliasFanoSeq:
    """Strictly increasing keys in ``1..u`` with rank and select."""

    def __init__(self, keys, u: int, v: int | None = None):
        keys = np.ascontiguousarray(keys, dtype=np.int64)
        if u < 0:
            raise ValueError("universe must be non-negative")
        if keys.size:
            if np.any(np.diff(keys) <= 0):
                raise ValueError("keys must be strictly increasing")
            if keys[0] < 1 or keys[-1] > u:
                raise ValueError(f"keys must lie in 1..{u}")
        self.u = int(u)
        self.n_keys = int(keys.size)
        if v is None:
            v = max(1, self.n_keys)
        self.u_r, self.v, self.low_width = ef_shape(self.u, v)
        nbits = self.n_keys + self.v
        hw, self.low = _k_ef_fill(keys - 1, np.zeros(self.n_keys, dtype=np.int64), self.low_width, nbits)
        self.high = BitVector.from_words(hw, nbits)

    def __len__(self) -> int:
        return self.n_keys

    def select(self, k: int) -> int:
        if not 1 <= k <= self.n_keys:
            raise LookupError(f"no key #{k} among {self.n_keys}")
        h = self.high
        return int(_k_ef_select(h.words, h.sb, h.blk, h.s1, h.n_bits, self.low, 0, 0, 0, self.low_width, k)) + 1

    def rank(self, q: int) -> int:
        if not 0 <= q <= self.u:
            raise IndexError(f"rank argument {q} outside 0..{self.u}")
        h = self.high
        return int(_k_ef_rank(h.words, h.sb, h.blk, h.s0, h.n_bits, self.low,
                              self.n_keys, self.v, self.low_width, 0, 0, 0, q - 1))

    def keys(self) -> np.ndarray:
        return np.array([self.select(k) for k in range(1, self.n_keys + 1)], dtype=np.int64)

    def space_report(self) -> dict:
        return {
            "high": 64 * int(self.high.words.size),
            "high_index": self.high.index_bits(),
            "low": 64 * ((self.n_keys * self.low_width + 63) // 64),
        }

    def size_in_bits(self) -> int:
        return sum(self.space_report().values())

    def size_bound(self) -> float:
        """``v + n(1 + ceil(log2(u/v))) + 0.3(v + n)`` for the rounded ``u, v``."""
        n, v = self.n_keys, self.v
        return v + n * (1 + self.low_width) + 0.3 * (v + n)


def ef_build(keys, u: int, v: int | None = None) -> EliasFanoSeq:
    return EliasFanoSeq(keys, u, v)


class CharPredecessorSet:
    """Elias–Fano position sets of every symbol of a sequence, pooled.

    All sets share the universe ``n`` and the bucket count
    ``v = n / sigma`` (rounded), hence one low width; set ``a`` starts after
    ``a * v`` zeros and ``C[a]`` ones of the shared high bitvector.
    Positions are 1-based.
    """

    def __init__(self, n, sigma, v, low_width, high_words, low_words, counts):
        self.n = int(n)
        self.sigma = int(sigma)
        self.v = int(v)
        self.low_width = int(low_width)
        nbits = self.n + self.sigma * self.v
        self.high = BitVector.from_words(high_words, nbits)
        nlow = (self.n * self.low_width + 63) // 64
        self.low = np.zeros(nlow + 1, dtype=np.uint64)
        self.low[:nlow] = low_words[:nlow]
        if self.n * self.low_width & 63:
            self.low[nlow - 1] &= np.uint64((1 << (self.n * self.low_width & 63)) - 1)
        self.C = np.ascontiguousarray(counts, dtype=np.int64)

    @staticmethod
    def shape(n: int, sigma: int):
        s = max(0, int(sigma) - 1).bit_length()
        ur = pow2_ceil(max(n, 1))
        v = max(1, ur >> s)
        return v, log2_exact(ur // v)

    def _check_sym(self, a):
        if not 0 <= a < self.sigma:
            raise IndexError(f"symbol {a} outside 0..{self.sigma - 1}")

    def count(self, a: int) -> int:
        self._check_sym(a)
        return int(self.C[a + 1] - self.C[a])

    def rank(self, a: int, q: int) -> int:
        """Occurrences of ``a`` at positions ``1..q``."""
        self._check_sym(a)
        if not 0 <= q <= self.n:
            raise IndexError(f"rank argument {q} outside 0..{self.n}")
        return self._rank(a, q)

    def _rank(self, a, q):
        h = self.high
        nk = int(self.C[a + 1] - self.C[a])
        ob = int(self.C[a])
        zb = a * self.v
        return int(_k_ef_rank(h.words, h.sb, h.blk, h.s0, h.n_bits, self.low, nk, self.v,
                              self.low_width, ob + zb, zb, ob * self.low_width, q - 1))

    def select(self, a: int, k: int) -> int:
        """Position of the ``k``-th occurrence of ``a``."""
        if not 1 <= k <= self.count(a):
            raise LookupError(f"no occurrence #{k} of symbol {a}")
        return self._select(a, k)

    def _select(self, a, k):
        h = self.high
        ob = int(self.C[a])
        zb = a * self.v
        return int(_k_ef_select(h.words, h.sb, h.blk, h.s1, h.n_bits, self.low, ob,
                                ob + zb, ob * self.low_width, self.low_width, k)) + 1

    def positions(self, a: int) -> np.ndarray:
        return np.array([self._select(a, k) for k in range(1, self.count(a) + 1)], dtype=np.int64)

    def range_occ(self, a: int, x1: int, x2: int):
        """Leftmost and rightmost occurrence of ``a`` in ``[x1, x2]``, or None."""
        self._check_sym(a)
        if not 1 <= x1 <= x2 <= self.n:
            raise IndexError(f"invalid range [{x1}, {x2}]")
        r0 = self._rank(a, x1 - 1)
        r1 = self._rank(a, x2)
        if r1 == r0:
            return None
        return self._select(a, r0 + 1), self._select(a, r1)

    def canonical_bytes(self) -> bytes:
        nlow = (self.n * self.low_width + 63) // 64
        head = struct.pack("<4Q", self.n, self.sigma, self.v, self.low_width)
        return (head + self.C.astype("<i8").tobytes() + self.high.words.astype("<u8").tobytes()
                + self.low[:nlow].astype("<u8").tobytes())

    def space_report(self) -> dict:
        return {
            "high": 64 * int(self.high.words.size),
            "high_index": self.high.index_bits(),
            "low": 64 * ((self.n * self.low_width + 63) // 64),
            "counts": 64 * int(self.C.size),
        }

    def size_in_bits(self) -> int:
        return sum(self.space_report().values())


def _symbols(seq, sigma):
    Y = np.ascontiguousarray(seq, dtype=np.int64)
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    if Y.size and (Y.min() < 0 or Y.max() >= sigma):
        raise ValueError(f"symbols must lie in 0..{sigma - 1}")
    return Y


def cps_build_simple(seq, sigma: int) -> CharPredecessorSet:
    """One counting pass groups positions by symbol; each group is then encoded."""
    Y = _symbols(seq, sigma)
    v, lw = CharPredecessorSet.shape(Y.size, sigma)
    hw, low, C = _k_cps_simple(Y, sigma, lw, v)
    return CharPredecessorSet(Y.size, sigma, v, lw, hw, low, C)


def cps_build_bitparallel(seq, sigma: int) -> CharPredecessorSet:
    """Start from the code of all positions and split it once per symbol bit."""
    if sigma < 1 or sigma & (sigma - 1):
        raise ValueError("bit-parallel build needs a power-of-two alphabet")
    Y = _symbols(seq, sigma)
    v, lw = CharPredecessorSet.shape(Y.size, sigma)
    s = log2_exact(sigma)
    hw, low, C, _ = _k_cps_bitparallel(Y, s, lw, v, s)
    return CharPredecessorSet(Y.size, sigma, v, lw, hw, low, C)


def cps_phase_groups(seq, sigma: int, phases: int):
    """Symbol subsequences of the groups left after ``phases`` bit-parallel phases."""
    if sigma < 1 or sigma & (sigma - 1):
        raise ValueError("bit-parallel build needs a power-of-two alphabet")
    Y = _symbols(seq, sigma)
    v, lw = CharPredecessorSet.shape(Y.size, sigma)
    _, _, eb, syms = _k_cps_bitparallel(Y, log2_exact(sigma), lw, v, phases)
    return [syms[eb[g]:eb[g + 1]] for g in range(eb.size - 1)]


def cps_range_occ(cps: CharPredecessorSet, c: int, x1: int, x2: int):
    return cps.range_occ(c, x1, x2)
