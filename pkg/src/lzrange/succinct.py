"""Packed integer arrays and rank/select bitvectors.

Public positions are 1-based; the ``_k_*`` kernels work on 0-based
offsets over raw ``uint64`` word arrays so that composite structures can
call them directly from their own kernels.

Rank directory: a 64-bit cumulative count every 2048 bits plus a 16-bit
relative count every 256 bits (about 0.094 bits of overhead per bit).
Select keeps the position of every 8192nd one and zero to bound a binary
search over the superblock counts.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._tables import low_mask, lowest_set_bit, popcount64, select_in_word

SB_SHIFT = 11  # 2048-bit superblocks
BLK_SHIFT = 8  # 256-bit blocks
BLKS_PER_SB = 1 << (SB_SHIFT - BLK_SHIFT)
SAMPLE_SHIFT = 13  # select sample every 8192 occurrences


# -- packed integer vectors -------------------------------------------------


@njit(cache=True)
def _k_pack(values, width, out):
    if width == 0:
        return
    w = np.uint64(width)
    for i in range(values.shape[0]):
        v = np.uint64(values[i]) & low_mask(width)
        bit = i * width
        wi = bit >> 6
        off = np.uint64(bit & 63)
        out[wi] |= v << off
        if (bit & 63) + width > 64:
            out[wi + 1] |= v >> (np.uint64(64) - off)
    return


@njit(cache=True, inline="always")
def _k_get(words, width, i):
    if width == 0:
        return np.int64(0)
    bit = i * width
    wi = bit >> 6
    off = bit & 63
    x = words[wi] >> np.uint64(off)
    if off + width > 64:
        x |= words[wi + 1] << np.uint64(64 - off)
    return np.int64(x & low_mask(width))


@njit(cache=True)
def _k_unpack(words, width, n, out):
    for i in range(n):
        out[i] = _k_get(words, width, i)


def packed_words(n: int, width: int) -> int:
    # one spare word so two-word reads never run off the end
    return (n * width + 63) // 64 + 1


class PackedArray:
    """Fixed-width integer vector stored in 64-bit words."""

    __slots__ = ("words", "width", "n")

    def __init__(self, values, width: int | None = None):
        values = np.ascontiguousarray(values, dtype=np.int64)
        if values.size and values.min() < 0:
            raise ValueError("PackedArray holds non-negative integers only")
        if width is None:
            width = int(values.max()).bit_length() if values.size else 0
        if width > 64:
            raise ValueError("width must be at most 64")
        if values.size and width < 64 and int(values.max()) >> width:
            raise ValueError(f"value does not fit in {width} bits")
        self.n = int(values.size)
        self.width = int(width)
        self.words = np.zeros(packed_words(self.n, self.width), dtype=np.uint64)
        _k_pack(values, self.width, self.words)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return int(_k_get(self.words, self.width, i))

    def to_numpy(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        _k_unpack(self.words, self.width, self.n, out)
        return out

    def bits(self) -> int:
        """Data words in bits; the trailing zero guard word is not counted."""
        return 64 * ((self.n * self.width + 63) // 64)


# -- bitvector kernels -------------------------------------------------------


@njit(cache=True)
def _k_build_directory(words, nbits):
    nsb = (nbits >> SB_SHIFT) + 1
    nblk = (nbits >> BLK_SHIFT) + 1
    sb = np.zeros(nsb, dtype=np.int64)
    blk = np.zeros(nblk, dtype=np.uint16)
    nw = words.shape[0]
    total = 0
    rel = 0
    for b in range(nblk):
        if b % BLKS_PER_SB == 0:
            sb[b // BLKS_PER_SB] = total
            rel = 0
        blk[b] = rel
        for wi in range(b * 4, b * 4 + 4):
            if wi < nw:
                c = popcount64(words[wi])
                total += c
                rel += c
    for s in range((nblk + BLKS_PER_SB - 1) // BLKS_PER_SB, nsb):
        sb[s] = total
    # select samples over real bits only
    ones = 0
    for wi in range(nw):
        ones += popcount64(words[wi])
    zeros = nbits - ones
    # sample j holds the position of occurrence (j + 1) * 8192 + 1
    s1 = np.zeros(max(ones - 1, 0) >> SAMPLE_SHIFT, dtype=np.int64)
    s0 = np.zeros(max(zeros - 1, 0) >> SAMPLE_SHIFT, dtype=np.int64)
    c1 = 0
    c0 = 0
    for wi in range(nw):
        x = words[wi]
        base = wi * 64
        lim = min(64, nbits - base)
        if lim <= 0:
            break
        for off in range(lim):
            if (x >> np.uint64(off)) & np.uint64(1):
                if c1 > 0 and (c1 & ((1 << SAMPLE_SHIFT) - 1)) == 0:
                    s1[(c1 >> SAMPLE_SHIFT) - 1] = base + off
                c1 += 1
            else:
                if c0 > 0 and (c0 & ((1 << SAMPLE_SHIFT) - 1)) == 0:
                    s0[(c0 >> SAMPLE_SHIFT) - 1] = base + off
                c0 += 1
    return sb, blk, s1, s0, ones


@njit(cache=True, inline="always")
def _k_rank1(words, sb, blk, i):
    """Ones in bit offsets [0, i)."""
    r = sb[i >> SB_SHIFT] + np.int64(blk[i >> BLK_SHIFT])
    wi = (i >> BLK_SHIFT) << 2
    end = i >> 6
    while wi < end:
        r += popcount64(words[wi])
        wi += 1
    rem = i & 63
    if rem:
        r += popcount64(words[end] & low_mask(rem))
    return r


@njit(cache=True, inline="always")
def _k_bit(words, i):
    return np.int64((words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))


@njit(cache=True)
def _k_select(words, sb, blk, samples, nsamples, nbits, k, bit):
    """0-based offset of the k-th (1-based) occurrence of ``bit``."""
    nsb_real = (nbits >> SB_SHIFT) + 1
    j = (k - 1) >> SAMPLE_SHIFT
    lo = 0
    if j > 0:
        lo = samples[j - 1] >> SB_SHIFT
    if j < nsamples:
        hi = samples[j] >> SB_SHIFT
    else:
        hi = nsb_real - 1
    # largest superblock s in [lo, hi] with count-before(s) < k
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if bit:
            before = sb[mid]
        else:
            before = (mid << SB_SHIFT) - sb[mid]
        if before < k:
            lo = mid
        else:
            hi = mid - 1
    s = lo
    if bit:
        k -= sb[s]
    else:
        k -= (s << SB_SHIFT) - sb[s]
    b = s * BLKS_PER_SB
    last_blk = min(b + BLKS_PER_SB, blk.shape[0]) - 1
    while b < last_blk:
        nb = b + 1
        if bit:
            before = np.int64(blk[nb])
        else:
            before = ((nb - s * BLKS_PER_SB) << BLK_SHIFT) - np.int64(blk[nb])
        if before >= k:
            break
        b = nb
    if bit:
        k -= np.int64(blk[b])
    else:
        k -= ((b - s * BLKS_PER_SB) << BLK_SHIFT) - np.int64(blk[b])
    wi = b << 2
    while True:
        x = words[wi]
        if not bit:
            x = ~x
        c = popcount64(x)
        if k <= c:
            return wi * 64 + select_in_word(x, k - 1)
        k -= c
        wi += 1


@njit(cache=True)
def _k_find_one(words, s, e):
    """Some set bit in [s, e] (0-based, inclusive), or -1; one mask per word."""
    if s > e:
        return -1
    ws = s >> 6
    we = e >> 6
    for wi in range(ws, we + 1):
        x = words[wi]
        if wi == ws:
            x &= ~low_mask(s & 63)
        if wi == we:
            x &= low_mask((e & 63) + 1)
        if x:
            return wi * 64 + lowest_set_bit(x)
    return -1


def _words_from_bits(bits: np.ndarray) -> np.ndarray:
    n = bits.size
    nw = (n + 63) // 64
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    buf = np.zeros(nw * 8, dtype=np.uint8)
    buf[: packed.size] = packed
    return buf.view("<u8").astype(np.uint64)


class BitVector:
    """Static bitvector with rank/select; positions are 1-based.

    ``rank(c, i)`` counts occurrences of bit ``c`` in positions ``1..i`` and
    ``select(c, k)`` returns the position of the ``k``-th ``c``.
    """

    __slots__ = ("words", "n_bits", "sb", "blk", "s1", "s0", "ones")

    def __init__(self, bits=()):
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        self._init_words(_words_from_bits(arr), int(arr.size))

    @classmethod
    def from_words(cls, words: np.ndarray, n_bits: int) -> "BitVector":
        self = cls.__new__(cls)
        nw = (n_bits + 63) // 64
        w = np.zeros(nw, dtype=np.uint64)
        m = min(nw, words.size)
        w[:m] = words[:m]
        if n_bits & 63:
            w[n_bits >> 6] &= np.uint64((1 << (n_bits & 63)) - 1)
        self._init_words(w, n_bits)
        return self

    def _init_words(self, words, n_bits):
        self.words = words
        self.n_bits = n_bits
        self.sb, self.blk, self.s1, self.s0, ones = _k_build_directory(words, n_bits)
        self.ones = int(ones)

    def __len__(self) -> int:
        return self.n_bits

    def __getitem__(self, p: int) -> int:
        if not 1 <= p <= self.n_bits:
            raise IndexError(p)
        return int(_k_bit(self.words, p - 1))

    def to_numpy(self) -> np.ndarray:
        b = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return b[: self.n_bits].astype(np.uint8)

    def count(self, c: int) -> int:
        return self.ones if c else self.n_bits - self.ones

    def rank(self, c: int, i: int) -> int:
        if not 0 <= i <= self.n_bits:
            raise IndexError(f"rank position {i} outside 0..{self.n_bits}")
        r = int(_k_rank1(self.words, self.sb, self.blk, i))
        return r if c else i - r

    def select(self, c: int, k: int) -> int:
        if not 1 <= k <= self.count(c):
            raise LookupError(f"no occurrence #{k} of bit {c}")
        samples = self.s1 if c else self.s0
        return int(_k_select(self.words, self.sb, self.blk, samples, samples.size, self.n_bits, k, 1 if c else 0)) + 1

    def find_one_in_range(self, s: int, e: int) -> int | None:
        """Position of some set bit in ``[s, e]``, or ``None``."""
        if s > e:
            return None
        if s < 1 or e > self.n_bits:
            raise IndexError((s, e))
        p = int(_k_find_one(self.words, s - 1, e - 1))
        return None if p < 0 else p + 1

    def index_bits(self) -> int:
        return 64 * (self.sb.size + self.s1.size + self.s0.size) + 16 * self.blk.size

    def space_report(self) -> dict:
        return {"bits": 64 * int(self.words.size), "index": self.index_bits()}

    def size_in_bits(self) -> int:
        return sum(self.space_report().values())
