"""Range-minimum structures; the leftmost minimum always wins ties.

Range maximum is range minimum over order-reversed values: with
``maximum=True`` every stored value ``v`` of width ``w`` is read as
``2**w - 1 - v``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._tables import low_mask
from .succinct import PackedArray, _k_get

RMQ_BLOCK = 32
_TABLE_BITS = 16
_inblock_tables: dict = {}


@njit(cache=True, inline="always")
def _val(words, width, invert, i):
    v = _k_get(words, width, i)
    if invert:
        return np.int64(low_mask(width)) - v
    return v


@njit(cache=True, inline="always")
def floor_log2(x):
    r = 0
    while x > 1:
        x >>= 1
        r += 1
    return r


@njit(cache=True)
def _k_rmq_build(words, width, invert, n):
    nb = (n + RMQ_BLOCK - 1) // RMQ_BLOCK
    levels = floor_log2(nb) + 1 if nb > 0 else 1
    table = np.zeros((levels, max(nb, 1)), dtype=np.int32)
    for b in range(nb):
        lo = b * RMQ_BLOCK
        hi = min(n, lo + RMQ_BLOCK)
        best = lo
        bv = _val(words, width, invert, lo)
        for p in range(lo + 1, hi):
            v = _val(words, width, invert, p)
            if v < bv:
                bv = v
                best = p
        table[0, b] = best
    for k in range(1, levels):
        half = 1 << (k - 1)
        for b in range(nb - (1 << k) + 1):
            a = table[k - 1, b]
            c = table[k - 1, b + half]
            if _val(words, width, invert, c) < _val(words, width, invert, a):
                table[k, b] = c
            else:
                table[k, b] = a
    return table


@njit(cache=True)
def _k_scan_min(words, width, invert, i, j):
    best = i
    bv = _val(words, width, invert, i)
    for p in range(i + 1, j + 1):
        v = _val(words, width, invert, p)
        if v < bv:
            bv = v
            best = p
    return best


@njit(cache=True)
def _k_rmq_query(words, width, invert, table, i, j):
    """Leftmost minimum position in [i, j] (0-based, inclusive)."""
    bi = i // RMQ_BLOCK
    bj = j // RMQ_BLOCK
    if bi == bj:
        return _k_scan_min(words, width, invert, i, j)
    best = _k_scan_min(words, width, invert, i, bi * RMQ_BLOCK + RMQ_BLOCK - 1)
    bv = _val(words, width, invert, best)
    if bj > bi + 1:
        lo = bi + 1
        hi = bj - 1
        k = floor_log2(hi - lo + 1)
        a = np.int64(table[k, lo])
        c = np.int64(table[k, hi - (1 << k) + 1])
        if _val(words, width, invert, c) < _val(words, width, invert, a):
            a = c
        av = _val(words, width, invert, a)
        if av < bv:
            bv = av
            best = a
    t = _k_scan_min(words, width, invert, bj * RMQ_BLOCK, j)
    if _val(words, width, invert, t) < bv:
        best = t
    return best


def _as_packed(values) -> PackedArray:
    return values if isinstance(values, PackedArray) else PackedArray(values)


class RmqIndex:
    """Block-decomposed RMQ: sparse table over 32-element block minima, scans inside blocks."""

    def __init__(self, values, maximum: bool = False):
        self.values = _as_packed(values)
        self.maximum = bool(maximum)
        self.n = len(self.values)
        self.table = _k_rmq_build(self.values.words, self.values.width, self.maximum, self.n)

    def __len__(self) -> int:
        return self.n

    def query(self, i: int, j: int) -> int:
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"invalid range [{i}, {j}] for length {self.n}")
        v = self.values
        return int(_k_rmq_query(v.words, v.width, self.maximum, self.table, i - 1, j - 1)) + 1

    def space_report(self, include_values: bool = False) -> dict:
        rep = {"sparse_table": 32 * int(self.table.size)}
        if include_values:
            rep["values"] = self.values.bits()
        return rep


# -- sampled RMQ with in-block tables ----------------------------------------


@njit(cache=True)
def _k_build_inblock_table(width, b):
    nkeys = 1 << (width * b)
    t = np.zeros(nkeys * b * b, dtype=np.uint8)
    m = (1 << width) - 1
    vals = np.zeros(b, dtype=np.int64)
    for key in range(nkeys):
        for p in range(b):
            vals[p] = (key >> (p * width)) & m
        for i in range(b):
            best = i
            for j in range(i, b):
                if vals[j] < vals[best]:
                    best = j
                t[(key * b + i) * b + j] = best
    return t


def inblock_table(width: int, b: int) -> np.ndarray:
    """Shared argmin table for blocks of ``b`` values of ``width`` bits."""
    key = (width, b)
    t = _inblock_tables.get(key)
    if t is None:
        t = _k_build_inblock_table(width, b)
        _inblock_tables[key] = t
    return t


def default_block_size(width: int) -> int:
    """Largest block whose packed form indexes a 16-bit table (2..8 values)."""
    return max(2, min(8, _TABLE_BITS // max(1, width)))


@njit(cache=True, inline="always")
def _k_read_bits(words, bitpos, nbits):
    wi = bitpos >> 6
    off = bitpos & 63
    x = words[wi] >> np.uint64(off)
    if off + nbits > 64:
        x |= words[wi + 1] << np.uint64(64 - off)
    return np.int64(x & low_mask(nbits))


@njit(cache=True)
def _k_inblock(words, width, invert, b, tbl, blk, i, j):
    """Leftmost minimum in block ``blk`` between offsets i..j."""
    base = blk * b
    if tbl.shape[0] > 0:
        key = _k_read_bits(words, base * width, b * width)
        if invert:
            key = key ^ np.int64(low_mask(b * width))
        return base + np.int64(tbl[(key * b + i) * b + j])
    return _k_scan_min(words, width, invert, base + i, base + j)


@njit(cache=True)
def _k_srmq_build_mins(words, width, invert, n, b):
    nb = (n + b - 1) // b
    out = np.zeros(nb, dtype=np.int64)
    for k in range(nb):
        lo = k * b
        hi = min(n, lo + b)
        p = _k_scan_min(words, width, invert, lo, hi - 1)
        out[k] = _k_get(words, width, p)
    return out


@njit(cache=True)
def _k_srmq_query(words, width, invert, b, tbl, bm_words, bm_width, rtable, i, j):
    bi = i // b
    bj = j // b
    if bi == bj:
        return _k_inblock(words, width, invert, b, tbl, bi, i - bi * b, j - bi * b)
    best = _k_inblock(words, width, invert, b, tbl, bi, i - bi * b, b - 1)
    bv = _val(words, width, invert, best)
    if bj > bi + 1:
        k = _k_rmq_query(bm_words, bm_width, invert, rtable, bi + 1, bj - 1)
        p = _k_inblock(words, width, invert, b, tbl, k, 0, b - 1)
        pv = _val(words, width, invert, p)
        if pv < bv:
            bv = pv
            best = p
    t = _k_inblock(words, width, invert, b, tbl, bj, 0, j - bj * b)
    if _val(words, width, invert, t) < bv:
        best = t
    return best


class SampledRmq:
    """RMQ over a small-alphabet sequence via per-block minima.

    A query splits into a head block, whole central blocks answered by an
    :class:`RmqIndex` over the block minima, and a tail block.  Head and
    tail use a shared argmin table when ``width * block_size <= 16`` and a
    short scan otherwise.
    """

    def __init__(self, values, block_size: int, maximum: bool = False):
        if block_size < 1:
            raise ValueError("block_size must be positive")
        self.values = _as_packed(values)
        self.block_size = int(block_size)
        self.maximum = bool(maximum)
        self.n = len(self.values)
        v = self.values
        mins = _k_srmq_build_mins(v.words, v.width, self.maximum, self.n, self.block_size)
        # block minima keep the value width so inversion matches
        self.reduced = RmqIndex(PackedArray(mins, v.width), maximum=self.maximum)
        if v.width * self.block_size <= _TABLE_BITS and v.width > 0:
            self.table = inblock_table(v.width, self.block_size)
        else:
            self.table = np.zeros(0, dtype=np.uint8)

    def __len__(self) -> int:
        return self.n

    def query(self, i: int, j: int) -> int:
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"invalid range [{i}, {j}] for length {self.n}")
        return int(self._q(i - 1, j - 1)) + 1

    def _q(self, i, j):
        v = self.values
        r = self.reduced
        return _k_srmq_query(
            v.words, v.width, self.maximum, self.block_size, self.table,
            r.values.words, r.values.width, r.table, i, j,
        )

    def space_report(self) -> dict:
        return {
            "block_minima": self.reduced.values.bits(),
            "reduced_rmq": 32 * int(self.reduced.table.size),
        }
