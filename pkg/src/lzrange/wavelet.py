"""Level-wise binary wavelet tree.

Level ``l`` holds one bitvector of length ``n``: bit ``depth-1-l`` of every
symbol, with symbols stably grouped by their top ``l`` bits.  Nodes are
contiguous ranges of a level; their bounds are carried down during a query
instead of being stored.  Non-power-of-two alphabets simply leave part of
the code space empty.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._tables import SPLIT8_IDX, SPLIT8_T0
from .rmq import _k_read_bits
from .succinct import _k_bit, _k_build_directory, _k_rank1, _k_select, _words_from_bits


# -- split core ---------------------------------------------------------------


@njit(cache=True)
def _k_split_range(vals, plane, lo, hi, out, out0, out1):
    """Stable split of vals[lo:hi] by the packed bit plane into out[out0..], out[out1..]."""
    p = lo
    while p < hi:
        cnt = min(8, hi - p)
        byte = _k_read_bits(plane, p, cnt)
        t0 = np.int64(SPLIT8_T0[byte]) - (8 - cnt)
        base = byte * 8
        for r in range(t0):
            out[out0 + r] = vals[p + SPLIT8_IDX[base + r]]
        t1 = cnt - t0
        for r in range(t1):
            out[out1 + r] = vals[p + SPLIT8_IDX[base + (8 - t1) + r]]
        out0 += t0
        out1 += t1
        p += cnt
    return out0, out1


@njit(cache=True)
def _k_split_level(vals, plane, bounds):
    """Split every node [bounds[k], bounds[k+1]) in place order; return children bounds."""
    n = vals.shape[0]
    out = np.empty(n, dtype=vals.dtype)
    nn = bounds.shape[0] - 1
    nb = np.empty(2 * nn + 1, dtype=np.int64)
    nb[0] = 0
    for k in range(nn):
        lo = bounds[k]
        hi = bounds[k + 1]
        ones = 0
        for p in range(lo, hi):
            ones += _k_bit(plane, p)
        z = (hi - lo) - ones
        _k_split_range(vals, plane, lo, hi, out, lo, lo + z)
        nb[2 * k + 1] = lo + z
        nb[2 * k + 2] = hi
    return out, nb


def _plane_words(vals: np.ndarray, shift: int) -> np.ndarray:
    return _words_from_bits(((vals >> shift) & 1).astype(np.uint8))


def wt_split_core(V, p: int, k: int):
    """Stable split of ``V`` (``k``-bit values) by the ``p``-th most significant bit.

    Works on the extracted bit plane eight elements at a time through the
    shared split table.
    """
    if not 1 <= p <= k:
        raise IndexError(f"bit position {p} outside 1..{k}")
    vals = np.ascontiguousarray(V, dtype=np.int64)
    if vals.size and (vals.min() < 0 or int(vals.max()) >> k):
        raise ValueError(f"values must fit in {k} bits")
    plane = _plane_words(vals, k - p)
    out = np.empty_like(vals)
    z, _ = _k_split_range(vals, plane, 0, vals.size, out, 0, 0 + int(vals.size - ((vals >> (k - p)) & 1).sum()))
    return out[:z].copy(), out[z:].copy()


# -- query kernels over stacked levels ---------------------------------------


@njit(cache=True, inline="always")
def _lrank(W, SB, BLK, l, i):
    return _k_rank1(W[l], SB[l], BLK[l], i)


@njit(cache=True)
def _k_access(W, SB, BLK, depth, n, i):
    S = 0
    E = n
    pos = i
    val = 0
    for l in range(depth):
        rS = _lrank(W, SB, BLK, l, S)
        rE = _lrank(W, SB, BLK, l, E)
        z = (E - S) - (rE - rS)
        b = _k_bit(W[l], pos)
        rp = _lrank(W, SB, BLK, l, pos)
        if b:
            pos = S + z + (rp - rS)
            S = S + z
        else:
            pos = S + (pos - S) - (rp - rS)
            E = S + z
        val = (val << 1) | b
    return val


@njit(cache=True)
def _k_access_rank(W, SB, BLK, depth, n, i):
    """Symbol at i and its occurrences before i, in one descent."""
    S = 0
    E = n
    pos = i
    val = 0
    for l in range(depth):
        rS = _lrank(W, SB, BLK, l, S)
        rE = _lrank(W, SB, BLK, l, E)
        z = (E - S) - (rE - rS)
        b = _k_bit(W[l], pos)
        rp = _lrank(W, SB, BLK, l, pos)
        if b:
            pos = S + z + (rp - rS)
            S = S + z
        else:
            pos = pos - (rp - rS)
            E = S + z
        val = (val << 1) | b
    return val, pos - S


@njit(cache=True)
def _k_rank(W, SB, BLK, depth, n, c, i):
    """Occurrences of c among the first i symbols."""
    S = 0
    E = n
    hi = i
    for l in range(depth):
        b = (c >> (depth - 1 - l)) & 1
        rS = _lrank(W, SB, BLK, l, S)
        rE = _lrank(W, SB, BLK, l, E)
        rh = _lrank(W, SB, BLK, l, hi)
        z = (E - S) - (rE - rS)
        if b:
            hi = S + z + (rh - rS)
            S = S + z
        else:
            hi = S + (hi - S) - (rh - rS)
            E = S + z
    return hi - S


@njit(cache=True)
def _k_select_sym(W, SB, BLK, S1, S0, NS1, NS0, depth, n, c, k):
    """0-based position of the k-th c; -1 if absent."""
    starts = np.empty(depth + 1, dtype=np.int64)
    S = 0
    E = n
    for l in range(depth):
        starts[l] = S
        b = (c >> (depth - 1 - l)) & 1
        rS = _lrank(W, SB, BLK, l, S)
        rE = _lrank(W, SB, BLK, l, E)
        z = (E - S) - (rE - rS)
        if b:
            S = S + z
        else:
            E = S + z
    if E - S < k:
        return -1
    p = k - 1
    for l in range(depth - 1, -1, -1):
        b = (c >> (depth - 1 - l)) & 1
        St = starts[l]
        rS = _lrank(W, SB, BLK, l, St)
        if b:
            g = _k_select(W[l], SB[l], BLK[l], S1[l], NS1[l], n, rS + p + 1, 1)
        else:
            g = _k_select(W[l], SB[l], BLK[l], S0[l], NS0[l], n, (St - rS) + p + 1, 0)
        p = g - St
    return p


@njit(cache=True)
def _k_range_pred(W, SB, BLK, S1, S0, NS1, NS0, n, l0, nlev, S, E, lo, hi, beta, want_x):
    """Max value <= beta over nodes positions [lo, hi) of the subtree rooted at level l0.

    ``S, E`` bound the subtree root on level ``l0``; values are the ``nlev``
    bits below it.  Returns ``(value, x, lo, hi)``: x is the level-``l0``
    position obtained by climbing with select (-1 when not requested) and
    ``[lo, hi)`` the matching range below the subtree.  All -1 when absent.
    """
    st_S = np.empty(nlev + 1, dtype=np.int64)
    st_E = np.empty(nlev + 1, dtype=np.int64)
    st_lo = np.empty(nlev + 1, dtype=np.int64)
    st_hi = np.empty(nlev + 1, dtype=np.int64)
    bits = np.zeros(nlev, dtype=np.int64)
    cand = -1
    t = 0
    full = True
    while t < nlev:
        l = l0 + t
        st_S[t] = S
        st_E[t] = E
        st_lo[t] = lo
        st_hi[t] = hi
        rS = _lrank(W, SB, BLK, l, S)
        rE = _lrank(W, SB, BLK, l, E)
        rl = _lrank(W, SB, BLK, l, lo)
        rh = _lrank(W, SB, BLK, l, hi)
        z = (E - S) - (rE - rS)
        zl = (lo - S) - (rl - rS)
        zh = (hi - S) - (rh - rS)
        b = (beta >> (nlev - 1 - t)) & 1
        if b == 1 and zh > zl:
            cand = t
        if b == 1:
            nlo = S + z + (rl - rS)
            nhi = S + z + (rh - rS)
            S = S + z
        else:
            nlo = S + zl
            nhi = S + zh
            E = S + z
        if nhi <= nlo:
            full = False
            break
        lo = nlo
        hi = nhi
        bits[t] = b
        t += 1
    if not full:
        if cand < 0:
            return -1, -1, -1, -1
        # restart from the deepest level offering a smaller branch
        t = cand
        S = st_S[t]
        E = st_E[t]
        lo = st_lo[t]
        hi = st_hi[t]
        while t < nlev:
            l = l0 + t
            st_S[t] = S
            st_E[t] = E
            st_lo[t] = lo
            st_hi[t] = hi
            rS = _lrank(W, SB, BLK, l, S)
            rE = _lrank(W, SB, BLK, l, E)
            rl = _lrank(W, SB, BLK, l, lo)
            rh = _lrank(W, SB, BLK, l, hi)
            z = (E - S) - (rE - rS)
            zl = (lo - S) - (rl - rS)
            zh = (hi - S) - (rh - rS)
            o_lo = S + z + (rl - rS)
            o_hi = S + z + (rh - rS)
            if t > cand and o_hi > o_lo:
                bits[t] = 1
                lo = o_lo
                hi = o_hi
                S = S + z
            else:
                bits[t] = 0
                lo = S + zl
                hi = S + zh
                E = S + z
            t += 1
    val = 0
    for t in range(nlev):
        val = (val << 1) | bits[t]
    if not want_x:
        return val, -1, lo, hi
    blo = lo
    bhi = hi
    p = lo - S
    for t in range(nlev - 1, -1, -1):
        l = l0 + t
        St = st_S[t]
        rS = _lrank(W, SB, BLK, l, St)
        if bits[t]:
            g = _k_select(W[l], SB[l], BLK[l], S1[l], NS1[l], n, rS + p + 1, 1)
        else:
            g = _k_select(W[l], SB[l], BLK[l], S0[l], NS0[l], n, (St - rS) + p + 1, 0)
        p = g - St
    return val, (st_S[0] + p if nlev > 0 else lo), blo, bhi


class WaveletTree:
    """Balanced wavelet tree over symbols ``0..sigma-1`` with 1-based positions."""

    def __init__(self, seq, sigma: int):
        if sigma < 1:
            raise ValueError("sigma must be at least 1")
        vals = np.ascontiguousarray(seq, dtype=np.int64)
        if vals.size and (vals.min() < 0 or vals.max() >= sigma):
            raise ValueError("symbol outside 0..sigma-1")
        self.sigma = int(sigma)
        self.n = int(vals.size)
        self.depth = int(sigma - 1).bit_length()
        nw = (self.n + 63) // 64
        D = max(self.depth, 1)
        self.W = np.zeros((D, nw), dtype=np.uint64)
        dirs = []
        bounds = np.array([0, self.n], dtype=np.int64)
        cur = vals
        for l in range(self.depth):
            plane = _plane_words(cur, self.depth - 1 - l)
            self.W[l] = plane
            # index each level as soon as it exists
            dirs.append(_k_build_directory(self.W[l], self.n))
            if l + 1 < self.depth:
                cur, bounds = _k_split_level(cur, plane, bounds)
        self._stack(dirs, D)

    def _stack(self, dirs, D):
        n = self.n
        self.SB = np.zeros((D, (n >> 11) + 1), dtype=np.int64)
        self.BLK = np.zeros((D, (n >> 8) + 1), dtype=np.uint16)
        m1 = max([d[2].size for d in dirs], default=0)
        m0 = max([d[3].size for d in dirs], default=0)
        self.S1 = np.zeros((D, m1), dtype=np.int64)
        self.S0 = np.zeros((D, m0), dtype=np.int64)
        self.NS1 = np.zeros(D, dtype=np.int64)
        self.NS0 = np.zeros(D, dtype=np.int64)
        for l, (sb, blk, s1, s0, _) in enumerate(dirs):
            self.SB[l] = sb
            self.BLK[l] = blk
            self.S1[l, : s1.size] = s1
            self.S0[l, : s0.size] = s0
            self.NS1[l] = s1.size
            self.NS0[l] = s0.size

    def __len__(self) -> int:
        return self.n

    def level_bits(self, l: int) -> np.ndarray:
        b = np.unpackbits(self.W[l].view(np.uint8), bitorder="little")
        return b[: self.n].astype(np.uint8)

    def _check_pos(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside 1..{self.n}")

    def access(self, i: int) -> int:
        self._check_pos(i)
        return int(_k_access(self.W, self.SB, self.BLK, self.depth, self.n, i - 1))

    def rank(self, c: int, i: int) -> int:
        if not 0 <= i <= self.n:
            raise IndexError(f"position {i} outside 0..{self.n}")
        if not 0 <= c < self.sigma:
            raise IndexError(f"symbol {c} outside alphabet")
        return int(_k_rank(self.W, self.SB, self.BLK, self.depth, self.n, c, i))

    def select(self, c: int, k: int) -> int:
        if not 0 <= c < self.sigma:
            raise IndexError(f"symbol {c} outside alphabet")
        p = -1
        if k >= 1:
            p = int(_k_select_sym(self.W, self.SB, self.BLK, self.S1, self.S0, self.NS1, self.NS0,
                                  self.depth, self.n, c, k))
        if p < 0:
            raise LookupError(f"symbol {c} has fewer than {k} occurrences")
        return p + 1

    def range_pred(self, x1: int, x2: int, y2: int):
        """``(x, y)`` with ``x1 <= x <= x2`` and the largest value ``y <= y2``, or ``None``."""
        if not 1 <= x1 <= x2 <= self.n:
            raise IndexError(f"invalid range [{x1}, {x2}]")
        if y2 < 0:
            return None
        y2 = min(y2, (1 << self.depth) - 1)
        v, x, _, _ = _k_range_pred(self.W, self.SB, self.BLK, self.S1, self.S0, self.NS1, self.NS0,
                             self.n, 0, self.depth, 0, self.n, x1 - 1, x2, y2, True)
        if v < 0:
            return None
        return int(x) + 1, int(v)

    def to_numpy(self) -> np.ndarray:
        return np.array([self.access(i) for i in range(1, self.n + 1)], dtype=np.int64)

    def space_report(self) -> dict:
        levels = self.depth * 64 * int(self.W.shape[1])
        index = 64 * self.SB[: self.depth].size + 16 * self.BLK[: self.depth].size
        index += 64 * int(self.NS1[: self.depth].sum() + self.NS0[: self.depth].sum())
        return {"levels": levels, "index": index}

    def size_in_bits(self) -> int:
        return sum(self.space_report().values())
