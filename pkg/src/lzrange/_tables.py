"""Process-wide lookup tables shared by every structure.

All tables are built once at import time and frozen into the numba kernels
as constants.
"""

import numpy as np
from numba import njit

WORD = 64


def _popcount16():
    t = np.zeros(1 << 16, dtype=np.uint8)
    for i in range(1, 1 << 16):
        t[i] = t[i >> 1] + (i & 1)
    return t


def _select8():
    # SELECT8[byte * 8 + k] = offset of the (k+1)-th set bit, 8 if absent
    t = np.full(256 * 8, 8, dtype=np.uint8)
    for b in range(256):
        k = 0
        for off in range(8):
            if b >> off & 1:
                t[b * 8 + k] = off
                k += 1
    return t


def _split8():
    # For each 8-bit plane byte: offsets of the 0-elements then of the
    # 1-elements, plus t0.  SPLIT8_IDX[b*8 + r] lists zeros first.
    idx = np.zeros(256 * 8, dtype=np.uint8)
    t0 = np.zeros(256, dtype=np.uint8)
    for b in range(256):
        zeros = [o for o in range(8) if not (b >> o & 1)]
        ones = [o for o in range(8) if b >> o & 1]
        t0[b] = len(zeros)
        for r, o in enumerate(zeros + ones):
            idx[b * 8 + r] = o
    return idx, t0


POPCOUNT16 = _popcount16()
SELECT8 = _select8()
SPLIT8_IDX, SPLIT8_T0 = _split8()


@njit(cache=True, inline="always")
def popcount64(x):
    x = np.uint64(x)
    return (
        np.int64(POPCOUNT16[x & np.uint64(0xFFFF)])
        + np.int64(POPCOUNT16[(x >> np.uint64(16)) & np.uint64(0xFFFF)])
        + np.int64(POPCOUNT16[(x >> np.uint64(32)) & np.uint64(0xFFFF)])
        + np.int64(POPCOUNT16[x >> np.uint64(48)])
    )


@njit(cache=True, inline="always")
def select_in_word(x, k):
    """Offset of the k-th (0-based) set bit of ``x``; caller guarantees it exists."""
    x = np.uint64(x)
    base = 0
    while True:
        b = np.int64(x & np.uint64(0xFF))
        c = np.int64(POPCOUNT16[b])
        if k < c:
            return base + np.int64(SELECT8[b * 8 + k])
        k -= c
        x = x >> np.uint64(8)
        base += 8


@njit(cache=True, inline="always")
def lowest_set_bit(x):
    x = np.uint64(x)
    base = 0
    while True:
        b = np.int64(x & np.uint64(0xFF))
        if b != 0:
            return base + np.int64(SELECT8[b * 8])
        x = x >> np.uint64(8)
        base += 8


@njit(cache=True, inline="always")
def low_mask(w):
    if w >= 64:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return (np.uint64(1) << np.uint64(w)) - np.uint64(1)


def table_bits():
    """Bits held by the shared tables (reported once, not per structure)."""
    return 8 * (POPCOUNT16.nbytes + SELECT8.nbytes + SPLIT8_IDX.nbytes + SPLIT8_T0.nbytes)
