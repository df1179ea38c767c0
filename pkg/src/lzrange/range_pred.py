"""Range-predecessor index over a permutation (points in rank space).

Every y value is an ``L``-bit code, ``L = ceil(log2 n)``.  A node is a code
prefix ``p`` of ``e`` bits; its sequence lists the next digit of every point
with that prefix, in x order.  Because the ys form a permutation, node ``p``
at depth ``e`` occupies positions ``[p << (L-e), (p+1) << (L-e))`` of the
concatenation of all nodes at that depth, so nodes are stored as views over
one array per depth.

Granularity tiers refine each other.  Tier 1 cuts the code into digits of
``w_1`` bits, tier 2 cuts every tier-1 digit into ``w_2``-bit digits, and so
on down to the last tier, which is a binary wavelet tree over all of Y
(one bit per level).  For each tier except the last, each level stores:

* the packed digits,
* range-min and range-max structures over them,
* the per-node, per-digit Elias–Fano position sets.

A query descends tier 1 matching ``y2``'s digits.  It remembers the deepest
level where a smaller digit exists in range, and hands that single digit to
the next tier to find the largest smaller digit.  It then finishes the
remaining levels greedily with range-max.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from numba.typed import List

from ._tables import low_mask
from .elias_fano import _k_cps_bitparallel, _k_cps_simple, _k_ef_rank, _k_put_bits
from .rmq import SampledRmq, default_block_size, _k_srmq_query
from .succinct import BitVector, PackedArray, _k_get
from .wavelet import WaveletTree, _k_range_pred, _k_split_level, _plane_words

BITPARALLEL_MAX_WIDTH = 8


class PointSet:
    """``n`` points ``(x, Y[x])`` forming a permutation of ``1..n``."""

    def __init__(self, y_of_x):
        Y = np.ascontiguousarray(y_of_x, dtype=np.int64)
        n = Y.size
        if n and (Y.min() < 1 or Y.max() > n or np.unique(Y).size != n):
            raise ValueError("y coordinates must be a permutation of 1..n")
        self.n = int(n)
        self.y_of_x = Y
        self.x_of_y = np.empty(n, dtype=np.int64)
        self.x_of_y[Y - 1] = np.arange(1, n + 1)

    @classmethod
    def from_points(cls, points):
        pts = sorted(points)
        xs = [x for x, _ in pts]
        if xs != list(range(1, len(pts) + 1)):
            raise ValueError("x coordinates must be a permutation of 1..n")
        return cls([y for _, y in pts])

    def __len__(self) -> int:
        return self.n


def max_granularity(n: int) -> int:
    L = max(0, n - 1).bit_length()
    if L <= 1:
        return 1
    return math.ceil(math.log2(L)) + 1


def tier_widths(L: int, c: int) -> list[int]:
    """Digit width of each tier: ``ceil(L^((c-k)/c))`` for tier k, the last one 1."""
    out = []
    for k in range(1, c + 1):
        if k == c:
            out.append(1)
        else:
            w = math.ceil(L ** ((c - k) / c) - 1e-9)
            out.append(max(1, min(L, w)))
    return out


def _cut(d: int, E: int, w: int):
    out = []
    e = d
    while e < E:
        out.append((e, min(w, E - e)))
        e += w
    return out


# -- build kernels ---------------------------------------------------------------


@njit(cache=True, inline="always")
def _pow2_ceil(x):
    r = 1
    while r < x:
        r <<= 1
    return r


@njit(cache=True, inline="always")
def _log2(x):
    r = 0
    while x > 1:
        x >>= 1
        r += 1
    return r


@njit(cache=True, inline="always")
def _node_shape(n, L, e, w, p):
    """(start, size, v, low_width) of node p at depth e with w-bit digits."""
    sh = L - e
    F = 1 << sh
    start = p << sh
    size = min(n, start + F) - start
    if size == F:
        return start, size, F >> w, w
    ur = _pow2_ceil(size)
    v = max(1, ur >> w)
    return start, size, v, _log2(ur // v)


@njit(cache=True)
def _k_or_bits(dst, dst_off, src, nbits):
    i = 0
    while nbits > 0:
        k = min(64, nbits)
        _k_put_bits(dst, dst_off + 64 * i, src[i], k)
        nbits -= k
        i += 1


@njit(cache=True)
def _k_build_ef_level(vals, n, L, e, w, bitparallel):
    """Pooled per-node, per-digit position sets of the level at depth e."""
    sh = L - e
    F = 1 << sh
    sigma = 1 << w
    nfull = n // F
    vfull = F >> w
    nbits = n + nfull * sigma * vfull
    lowbits = nfull * F * w
    nodes = (n + F - 1) // F
    if nodes > nfull:
        _, size, v, lw = _node_shape(n, L, e, w, nfull)
        nbits += sigma * v
        lowbits += size * lw
    hw = np.zeros(((nbits + 63) >> 6) + 1, dtype=np.uint64)
    low = np.zeros(((lowbits + 63) >> 6) + 1, dtype=np.uint64)
    m = (1 << w) - 1
    digits = np.empty(F, dtype=np.int64)
    for p in range(nodes):
        start, size, v, lw = _node_shape(n, L, e, w, p)
        seg = digits[:size]
        for i in range(size):
            seg[i] = (vals[start + i] >> (sh - w)) & m
        if bitparallel:
            h, lo, _, _ = _k_cps_bitparallel(seg, w, lw, v, w)
        else:
            h, lo, _ = _k_cps_simple(seg, sigma, lw, v)
        _k_or_bits(hw, start + p * sigma * vfull, h, size + sigma * v)
        _k_or_bits(low, start * w, lo, size * lw)
    out = np.zeros((nbits + 63) >> 6, dtype=np.uint64)
    out[:] = hw[: out.shape[0]]
    return out, nbits, low


@njit(cache=True)
def _k_digits(vals, shift, w):
    out = np.empty(vals.shape[0], dtype=np.int64)
    m = (1 << w) - 1
    for i in range(vals.shape[0]):
        out[i] = (vals[i] >> shift) & m
    return out


# -- query kernels ---------------------------------------------------------------


@njit(cache=True, inline="always")
def _k_lvl_rank(hw, hsb, hblk, hs0, hbits, low, n, L, e, w, p, a, qloc):
    """Occurrences of digit a among the first qloc+1 entries of node p."""
    start, size, v, lw = _node_shape(n, L, e, w, p)
    vfull = (1 << (L - e)) >> w
    csh = L - e - w
    q = (p << w) | a
    ob = min(n, q << csh)
    nk = min(n, (q + 1) << csh) - ob
    zb = p * (1 << w) * vfull + a * v
    return _k_ef_rank(hw, hsb, hblk, hs0, hbits, low, nk, v, lw, ob + zb, zb, start * w + (ob - start) * lw, qloc)


@njit(cache=True)
def _k_rp_query(n, L, c, LID, LW, LB, LH, DG, TB, MNW, MNT, MXW, MXT,
                HW, HSB, HBLK, HS0, LOW, W, SB, BLK, S1, S0, NS1, NS0, lo, hi, y):
    """Largest y' <= y among x positions [lo, hi) (all 0-based); -1 if none."""
    fE = np.zeros(c, dtype=np.int64)
    k = 0
    d = 0
    E = L
    gp = 0
    T = y
    while True:
        if k == c - 1:
            nlev = E - d
            if nlev == 0:
                break
            S = gp << (L - d)
            Sn = min(n, (gp + 1) << (L - d))
            beta = (T >> (L - E)) & ((1 << nlev) - 1)
            val, _, blo, bhi = _k_range_pred(W, SB, BLK, S1, S0, NS1, NS0, n, d, nlev, S, Sn, lo, hi, beta, False)
            if val < 0:
                return -1
            gp = (gp << nlev) | val
            lo = blo
            hi = bhi
            d = E
            break
        piv_e = -1
        piv_w = 0
        piv_lo = 0
        piv_hi = 0
        piv_gp = 0
        piv_t = 0
        e = d
        ok = True
        while e < E:
            m = LID[k, e]
            w = LW[m]
            tdig = (T >> (L - e - w)) & ((1 << w) - 1)
            pos = _k_srmq_query(DG[m], w, False, LB[m], TB[m], MNW[m], w, MNT[m], lo, hi - 1)
            if _k_get(DG[m], w, pos) < tdig:
                piv_e = e
                piv_w = w
                piv_lo = lo
                piv_hi = hi
                piv_gp = gp
                piv_t = tdig
            start = gp << (L - e)
            r0 = _k_lvl_rank(HW[m], HSB[m], HBLK[m], HS0[m], LH[m], LOW[m], n, L, e, w, gp, tdig, lo - start - 1)
            r1 = _k_lvl_rank(HW[m], HSB[m], HBLK[m], HS0[m], LH[m], LOW[m], n, L, e, w, gp, tdig, hi - start - 1)
            if r1 == r0:
                ok = False
                break
            q = (gp << w) | tdig
            cs = min(n, q << (L - e - w))
            lo = cs + r0
            hi = cs + r1
            gp = q
            e += w
        fE[k] = E
        if ok:
            d = E
            break
        if piv_e < 0:
            return -1
        # the next tier resolves the pivot digit alone
        T = ((piv_gp << piv_w) | (piv_t - 1)) << (L - piv_e - piv_w)
        gp = piv_gp
        lo = piv_lo
        hi = piv_hi
        d = piv_e
        E = piv_e + piv_w
        k += 1
    while k > 0:
        k -= 1
        E = fE[k]
        e = d
        while e < E:
            m = LID[k, e]
            w = LW[m]
            pos = _k_srmq_query(DG[m], w, True, LB[m], TB[m], MXW[m], w, MXT[m], lo, hi - 1)
            a = _k_get(DG[m], w, pos)
            start = gp << (L - e)
            r0 = _k_lvl_rank(HW[m], HSB[m], HBLK[m], HS0[m], LH[m], LOW[m], n, L, e, w, gp, a, lo - start - 1)
            r1 = _k_lvl_rank(HW[m], HSB[m], HBLK[m], HS0[m], LH[m], LOW[m], n, L, e, w, gp, a, hi - start - 1)
            q = (gp << w) | a
            cs = min(n, q << (L - e - w))
            lo = cs + r0
            hi = cs + r1
            gp = q
            e += w
        d = E
    return gp


@njit(cache=True)
def _k_rp_batch(n, L, c, LID, LW, LB, LH, DG, TB, MNW, MNT, MXW, MXT,
                HW, HSB, HBLK, HS0, LOW, W, SB, BLK, S1, S0, NS1, NS0, Xw, Xwidth, x1, x2, y2, out_x, out_y):
    for i in range(x1.shape[0]):
        lo = x1[i] - 1
        hi = x2[i]
        y = min(y2[i], n) - 1
        out_x[i] = 0
        out_y[i] = 0
        if y < 0:
            continue
        x = _k_get(Xw, Xwidth, y)
        if lo <= x < hi:
            out_x[i] = x + 1
            out_y[i] = y + 1
            continue
        r = _k_rp_query(n, L, c, LID, LW, LB, LH, DG, TB, MNW, MNT, MXW, MXT,
                        HW, HSB, HBLK, HS0, LOW, W, SB, BLK, S1, S0, NS1, NS0, lo, hi, y)
        if r >= 0:
            out_x[i] = _k_get(Xw, Xwidth, r) + 1
            out_y[i] = r + 1


# -- index ---------------------------------------------------------------------


class _Level:
    __slots__ = ("tier", "depth", "width", "digits", "rmin", "rmax", "high", "low")


class RangePredIndex:
    """Multi-granularity range-predecessor index.

    ``query(x1, x2, y2)`` returns the point with ``x1 <= x <= x2`` and the
    largest ``y <= y2`` as ``(x, y)``, or None.  ``c = 1`` is a single
    wavelet tree; larger ``c`` adds coarser tiers on top.
    """

    def __init__(self, points: PointSet, c: int = 2):
        if not isinstance(points, PointSet):
            points = PointSet(points)
        if c < 1:
            raise ValueError("granularity c must be at least 1")
        n = points.n
        self.points = points
        self.n = n
        self.L = max(0, n - 1).bit_length()
        self.c_requested = int(c)
        self.c = min(int(c), max_granularity(n))
        self.widths = tier_widths(self.L, self.c)
        self.plan = self._plan()
        Y0 = points.y_of_x - 1
        self.x_map = PackedArray(points.x_of_y - 1, max(1, self.L))
        self.levels: list[_Level] = []
        self._build_levels(Y0)
        self.wt = WaveletTree(Y0, max(1, n) if self.L == 0 else 1 << self.L)
        self._pack()

    def _plan(self):
        """Per tier, the ``(depth, width)`` of each level."""
        plan = []
        chunks = [(0, self.L)]
        for w in self.widths:
            tier = []
            for d, W in chunks:
                tier.extend(_cut(d, d + W, w))
            plan.append(tier)
            chunks = tier
        return plan

    def _build_levels(self, Y0):
        L, n = self.L, self.n
        wanted = {}
        for k in range(self.c - 1):
            for e, w in self.plan[k]:
                wanted.setdefault(e, []).append((k, w))
        vals = Y0.copy()
        bounds = np.array([0, n], dtype=np.int64)
        for e in range(L):
            for k, w in wanted.get(e, ()):
                self.levels.append(self._make_level(vals, k, e, w))
            if e + 1 < L and any(d > e for d in wanted):
                plane = _plane_words(vals, L - 1 - e)
                vals, bounds = _k_split_level(vals, plane, bounds)

    def _make_level(self, vals, k, e, w):
        L, n = self.L, self.n
        lv = _Level()
        lv.tier, lv.depth, lv.width = k, e, w
        lv.digits = PackedArray(_k_digits(vals, L - e - w, w), w)
        b = default_block_size(w)
        lv.rmin = SampledRmq(lv.digits, b)
        lv.rmax = SampledRmq(lv.digits, b, maximum=True)
        hw, nbits, low = _k_build_ef_level(vals, n, L, e, w, w <= BITPARALLEL_MAX_WIDTH)
        lv.high = BitVector.from_words(hw, int(nbits))
        lv.low = low
        return lv

    def _pack(self):
        # level 0 of every list is a placeholder so the typed lists are never empty
        lv0 = self.levels[0] if self.levels else None
        self.LID = np.full((self.c, self.L + 1), -1, dtype=np.int64)
        DG, TB, MNW, MNT, MXW, MXT = List(), List(), List(), List(), List(), List()
        HW, HSB, HBLK, HS0, LOW = List(), List(), List(), List(), List()
        LW, LB, LH = [], [], []
        for i, lv in enumerate(([lv0] if lv0 else []) + self.levels):
            if i > 0:
                self.LID[lv.tier, lv.depth] = i
            DG.append(lv.digits.words)
            TB.append(lv.rmin.table)
            MNW.append(lv.rmin.reduced.values.words)
            MNT.append(lv.rmin.reduced.table)
            MXW.append(lv.rmax.reduced.values.words)
            MXT.append(lv.rmax.reduced.table)
            HW.append(lv.high.words)
            HSB.append(lv.high.sb)
            HBLK.append(lv.high.blk)
            HS0.append(lv.high.s0)
            LOW.append(lv.low)
            LW.append(lv.width)
            LB.append(lv.rmin.block_size)
            LH.append(lv.high.n_bits)
        if not self.levels:
            z64 = np.zeros(1, dtype=np.uint64)
            DG.append(z64)
            TB.append(np.zeros(0, dtype=np.uint8))
            MNW.append(z64)
            MNT.append(np.zeros((1, 1), dtype=np.int32))
            MXW.append(z64)
            MXT.append(np.zeros((1, 1), dtype=np.int32))
            HW.append(z64)
            HSB.append(np.zeros(1, dtype=np.int64))
            HBLK.append(np.zeros(1, dtype=np.uint16))
            HS0.append(np.zeros(0, dtype=np.int64))
            LOW.append(z64)
            LW.append(1)
            LB.append(2)
            LH.append(0)
        wt = self.wt
        self._args = (
            self.n, self.L, self.c, self.LID,
            np.array(LW, dtype=np.int64), np.array(LB, dtype=np.int64), np.array(LH, dtype=np.int64),
            DG, TB, MNW, MNT, MXW, MXT, HW, HSB, HBLK, HS0, LOW,
            wt.W, wt.SB, wt.BLK, wt.S1, wt.S0, wt.NS1, wt.NS0,
        )

    def __len__(self) -> int:
        return self.n

    # -- queries ---------------------------------------------------------------

    def query(self, x1: int, x2: int, y2: int):
        if not 1 <= x1 <= x2 <= self.n:
            raise IndexError(f"invalid range [{x1}, {x2}] for n = {self.n}")
        xs, ys = self.query_batch([x1], [x2], [y2])
        return None if ys[0] == 0 else (int(xs[0]), int(ys[0]))

    def query_batch(self, x1, x2, y2):
        """Vectorised :meth:`query`; absent answers come back as ``(0, 0)``."""
        x1 = np.ascontiguousarray(x1, dtype=np.int64)
        x2 = np.ascontiguousarray(x2, dtype=np.int64)
        y2 = np.ascontiguousarray(y2, dtype=np.int64)
        if x1.size and (x1.min() < 1 or x2.max() > self.n or np.any(x1 > x2)):
            raise IndexError("invalid x range in batch")
        out_x = np.zeros(x1.size, dtype=np.int64)
        out_y = np.zeros(x1.size, dtype=np.int64)
        _k_rp_batch(*self._args, self.x_map.words, self.x_map.width, x1, x2, y2, out_x, out_y)
        return out_x, out_y

    def report_sorted(self, x1: int, x2: int, y1: int, y2: int, limit: int):
        """Points of ``[x1, x2] x [y1, y2]`` by decreasing y, at most ``limit``."""
        out = []
        if limit <= 0 or x1 > x2 or y1 > y2:
            return out
        x1 = max(1, x1)
        x2 = min(self.n, x2)
        if x1 > x2:
            return out
        while len(out) < limit and y2 >= max(1, y1):
            r = self.query(x1, x2, y2)
            if r is None or r[1] < y1:
                break
            out.append(r)
            y2 = r[1] - 1
        return out

    # -- inspection ------------------------------------------------------------

    def level_plan(self):
        """``(tier, depth, width)`` of every stored level, tier 1 first."""
        out = []
        for k, tier in enumerate(self.plan, start=1):
            out.extend((k, e, w) for e, w in tier)
        return out

    def _level(self, tier, depth):
        m = self.LID[tier - 1, depth] if tier - 1 < self.c and 0 <= depth <= self.L else -1
        if m < 0:
            raise LookupError(f"no stored level at tier {tier}, depth {depth}")
        return self.levels[m - 1]

    def node_sequence(self, tier: int, depth: int, prefix: int) -> np.ndarray:
        """Digits of the node with the given code prefix, in x order."""
        sh = self.L - depth
        start = prefix << sh
        end = min(self.n, (prefix + 1) << sh)
        if tier == self.c:
            # last tier: one bit per level of the wavelet tree
            bits = self.wt.level_bits(depth)
            return bits[start:end].astype(np.int64)
        lv = self._level(tier, depth)
        return lv.digits.to_numpy()[start:end]

    def node_rank(self, tier: int, depth: int, prefix: int, digit: int, i: int) -> int:
        """Occurrences of ``digit`` among the first ``i`` entries of a node."""
        lv = self._level(tier, depth)
        h = lv.high
        return int(_k_lvl_rank(h.words, h.sb, h.blk, h.s0, h.n_bits, lv.low, self.n, self.L,
                               depth, lv.width, prefix, digit, i - 1))

    def space_report(self) -> dict:
        rep = {"x_map": self.x_map.bits()}
        wt = self.wt.space_report()
        rep["wavelet_tree"] = wt["levels"] + wt["index"]
        digits = ef = rmq = 0
        for lv in self.levels:
            digits += lv.digits.bits()
            nlow = (lv.low.size - 1) * 64
            ef += 64 * lv.high.words.size + lv.high.index_bits() + nlow
            for r in (lv.rmin, lv.rmax):
                rep_r = r.space_report()
                rmq += rep_r["block_minima"] + rep_r["reduced_rmq"]
        rep["digits"] = digits
        rep["predecessor_sets"] = ef
        rep["range_min_max"] = rmq
        return rep

    def size_in_bits(self) -> int:
        return sum(self.space_report().values())


def rp_build(points, c: int = 2) -> RangePredIndex:
    return RangePredIndex(points, c)


def rp_query(idx: RangePredIndex, x1: int, x2: int, y2: int):
    return idx.query(x1, x2, y2)


def rp_report_sorted(idx: RangePredIndex, x1: int, x2: int, y1: int, y2: int, limit: int):
    return idx.report_sorted(x1, x2, y1, y2, limit)
