"""Rightmost (most recent) sources for the phrases of a greedy LZ77 parse.

The phrase boundaries come from the compact parser.  Every reference phrase
``X[i..i+l-1]`` is then located in the forward suffix array by backward
search, giving a row interval.  The task is to find the largest text
position ``p < i`` whose suffix row falls in that interval.

Basic method: the row intervals form a laminar family (a query tree).  The
text is scanned in increasing position order by walking the inverse of LF.
The visited row's nearest enclosing interval records the position.  A
phrase starting at ``i`` is answered just before position ``i`` is visited,
as the maximum over its subtree.  Subtrees are contiguous in preorder, so a
max segment tree over preorder ids does the bookkeeping.

Stratified method: phrases are routed by length and interval shape.

* Long phrases are anchored at sampled block ends and answered by a
  three-sided search over (reversed block, following suffix, block index).
* Short phrases whose interval crosses a block of suffix-array rows go to
  the basic method on a query tree holding only those intervals.
* The rest fall inside one row block.  Each block has a range-predecessor
  index over (row, visit order).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np
from numba import njit

from .elias_fano import EliasFanoSeq
from .errors import ConfigError
from .lz import Factor, LZParser, _to_codes
from .range_pred import PointSet, RangePredIndex
from .rmq import RmqIndex
from .text_index import Text, TextIndex, _k_bstep
from .wavelet import WaveletTree, _k_select_sym, _k_split_level, _lrank, _plane_words

MODES = ("basic", "stratified")


# -- scanning kernels ----------------------------------------------------------


@njit(cache=True)
def _k_isa(W, SB, BLK, S1, S0, NS1, NS0, depth, nwt, dpos, C, n):
    """Row of every suffix, by walking the inverse of LF from suffix 1.

    ``isa[p]`` for p in 1..n+1 (0-based rows; the sentinel suffix is row 0).
    """
    isa = np.empty(n + 2, dtype=np.int64)
    isa[0] = -1
    isa[n + 1] = 0
    row = dpos
    sigma = C.shape[0] - 1
    for p in range(1, n + 1):
        isa[p] = row
        if p == n:
            break
        c = 1
        while c + 1 < sigma and C[c + 1] <= row:
            c += 1
        k = row - C[c] + 1
        g = _k_select_sym(W, SB, BLK, S1, S0, NS1, NS0, depth, nwt, c - 1, k)
        row = g + 1 if g >= dpos else g
    return isa


@njit(cache=True)
def _k_intervals(X, starts, lens, W, SB, BLK, depth, nwt, dpos, C):
    """Half-open row interval of every phrase ``X[i..i+l-1]`` (1-based i)."""
    m = starts.shape[0]
    s_out = np.empty(m, dtype=np.int64)
    e_out = np.empty(m, dtype=np.int64)
    N = nwt + 1
    for f in range(m):
        s = 0
        e = N
        b = starts[f] - 1
        for k in range(lens[f] - 1, -1, -1):
            s, e = _k_bstep(W, SB, BLK, depth, nwt, dpos, C, s, e, X[b + k])
        s_out[f] = s
        e_out[f] = e
    return s_out, e_out


@njit(cache=True)
def _k_suffix_intervals(X, i, ln, r, W, SB, BLK, depth, nwt, dpos, C):
    """Row intervals of ``X[i+k..i+ln-1]`` for k = 1..r (index k of the output)."""
    s_out = np.zeros(r + 1, dtype=np.int64)
    e_out = np.zeros(r + 1, dtype=np.int64)
    N = nwt + 1
    s = 0
    e = N
    b = i - 1
    for k in range(ln, 0, -1):
        if k <= r:
            s_out[k] = s
            e_out[k] = e
        if k > 1:
            s, e = _k_bstep(W, SB, BLK, depth, nwt, dpos, C, s, e, X[b + k - 1])
    return s_out, e_out


@njit(cache=True)
def _k_nearest(ns, ne, nrows):
    """Deepest interval covering each row, by a stack sweep over preorder."""
    out = np.full(nrows, -1, dtype=np.int64)
    stack = np.empty(ns.shape[0] + 1, dtype=np.int64)
    top = 0
    j = 0
    m = ns.shape[0]
    for row in range(nrows):
        while top > 0 and ne[stack[top - 1]] <= row:
            top -= 1
        while j < m and ns[j] == row:
            stack[top] = j
            top += 1
            j += 1
        if top > 0:
            out[row] = stack[top - 1]
    return out


@njit(cache=True)
def _k_scan(isa, n, nearest, sub_end, nnodes, qpos, qnode):
    """Answer each query just before its start is visited.

    Queries are sorted by start position.  Returns the answers and the final
    per-node positions.
    """
    size = 1
    while size < nnodes:
        size <<= 1
    seg = np.zeros(2 * size, dtype=np.int64)
    out = np.zeros(qpos.shape[0], dtype=np.int64)
    qi = 0
    nq = qpos.shape[0]
    for p in range(1, n + 1):
        while qi < nq and qpos[qi] == p:
            lo = qnode[qi] + size
            hi = sub_end[qnode[qi]] + size
            best = 0
            while lo < hi:
                if lo & 1:
                    best = max(best, seg[lo])
                    lo += 1
                if hi & 1:
                    hi -= 1
                    best = max(best, seg[hi])
                lo >>= 1
                hi >>= 1
            out[qi] = best
            qi += 1
        a = nearest[isa[p]]
        if a >= 0:
            # positions only grow, so every ancestor's max becomes p
            k = a + size
            while k > 0:
                seg[k] = p
                k >>= 1
    return out, seg[size: size + nnodes].copy()


# -- query tree ----------------------------------------------------------------


class QueryTree:
    """Distinct row intervals in preorder, with parents and subtree ends.

    Intervals are half-open and 0-based.  ``node_of[f]`` is the node of the
    f-th input interval.
    """

    def __init__(self, starts, ends, n_rows: int):
        s = np.ascontiguousarray(starts, dtype=np.int64)
        e = np.ascontiguousarray(ends, dtype=np.int64)
        if s.size and (np.any(s >= e) or s.min() < 0 or e.max() > n_rows):
            raise ValueError("intervals must be non-empty and inside the rows")
        self.n_rows = int(n_rows)
        # preorder: by start, longer first; np.lexsort is stable
        order = np.lexsort((-e, s))
        ss, ee = s[order], e[order]
        keep = np.ones(s.size, dtype=bool)
        if s.size:
            keep[1:] = (ss[1:] != ss[:-1]) | (ee[1:] != ee[:-1])
        self.start = ss[keep]
        self.end = ee[keep]
        ids = np.cumsum(keep) - 1
        self.node_of = np.empty(s.size, dtype=np.int64)
        self.node_of[order] = ids
        m = self.start.size
        self.parent = np.full(m, -1, dtype=np.int64)
        self.sub_end = np.full(m, m, dtype=np.int64)
        stack = []
        for j in range(m):
            a, b = int(self.start[j]), int(self.end[j])
            while stack and self.end[stack[-1]] <= a:
                self.sub_end[stack.pop()] = j
            if stack:
                if b > self.end[stack[-1]]:
                    raise ValueError("intervals are not laminar")
                self.parent[j] = stack[-1]
            stack.append(j)
        self.nearest = _k_nearest(self.start, self.end, self.n_rows)
        self.last_pos = np.zeros(m, dtype=np.int64)

    def __len__(self) -> int:
        return int(self.start.size)

    def is_laminar(self) -> bool:
        for j in range(len(self)):
            p = self.parent[j]
            if p >= 0 and not (self.start[p] <= self.start[j] and self.end[j] <= self.end[p]):
                return False
            nxt = self.sub_end[j]
            if nxt < len(self) and self.start[nxt] < self.end[j]:
                return False
        return True

    def scan(self, isa, n: int, qpos, qnode):
        """Run the increasing-position scan; answers in the given query order."""
        qpos = np.ascontiguousarray(qpos, dtype=np.int64)
        qnode = np.ascontiguousarray(qnode, dtype=np.int64)
        order = np.argsort(qpos, kind="stable")
        ans, self.last_pos = _k_scan(isa, n, self.nearest, self.sub_end, max(1, len(self)),
                                     qpos[order], qnode[order])
        out = np.empty_like(ans)
        out[order] = ans
        return out


def _isa(ti: TextIndex) -> np.ndarray:
    w = ti.bwt
    return _k_isa(w.W, w.SB, w.BLK, w.S1, w.S0, w.NS1, w.NS0, w.depth, w.n, ti.dollar_row, ti.C, ti.n - 1)


def factor_intervals(ti: TextIndex, codes, starts, lens):
    """Half-open 0-based row intervals of the phrases, by backward search."""
    return _k_intervals(np.ascontiguousarray(codes, dtype=np.int64),
                        np.ascontiguousarray(starts, dtype=np.int64),
                        np.ascontiguousarray(lens, dtype=np.int64), *ti.fm)


def rightmost_basic(ti: TextIndex, starts, intervals, isa=None) -> np.ndarray:
    """Largest earlier position whose suffix row lies in each interval (0 if none)."""
    s, e = intervals
    if isa is None:
        isa = _isa(ti)
    if len(s) == 0:
        return np.zeros(0, dtype=np.int64)
    qt = QueryTree(s, e, ti.n)
    return qt.scan(isa, ti.n - 1, starts, qt.node_of)


def boundary_resolve(ti: TextIndex, starts, lens, intervals, block: int, ell: int, isa=None):
    """Basic scan restricted to short phrases whose interval crosses a row block."""
    s, e = (np.asarray(a, dtype=np.int64) for a in intervals)
    lens = np.asarray(lens, dtype=np.int64)
    if np.any(lens >= ell) or np.any(s // block == (e - 1) // block):
        raise ValueError("boundary_resolve needs short phrases crossing a block boundary")
    return rightmost_basic(ti, starts, (s, e), isa)


# -- long phrases ----------------------------------------------------------------


def reversal_table(sb: int):
    """Symbols per chunk and the table reversing a chunk of sb-bit symbols."""
    c = max(1, 16 // sb)
    v = np.arange(1 << (c * sb), dtype=np.int64)
    out = np.zeros_like(v)
    m = (1 << sb) - 1
    for k in range(c):
        out |= ((v >> (k * sb)) & m) << ((c - 1 - k) * sb)
    return c, out


def reverse_packed(v: int, m: int, sb: int, table) -> int:
    """Reverse a string of m sb-bit symbols packed first-symbol-high."""
    c, LT = table
    pad = (-m) % c
    v <<= pad * sb
    w = c * sb
    mask = (1 << w) - 1
    out = 0
    for _ in range((m + pad) // c):
        out = (out << w) | int(LT[v & mask])
        v >>= w
    # the padding ends up as leading zeros
    return out


def pack(symbols, sb: int) -> int:
    v = 0
    for a in symbols:
        v = (v << sb) | int(a)
    return v


class _Stratum:
    """Points of one z range: max z over an (x range, y range) box."""

    SMALL = 32

    def __init__(self, xs, ys, zs):
        order = np.argsort(xs, kind="stable")
        self.xs = xs[order]
        self.ys_sorted = np.sort(ys)
        yx = ys[order]
        zx = zs[order]
        self.size = int(xs.size)
        if self.size <= self.SMALL:
            self.yx, self.zx = yx, zx
            self.wt = None
            return
        yr = np.searchsorted(self.ys_sorted, yx)
        self.wt = WaveletTree(yr, self.size)
        self.depth = self.wt.depth
        self.zmax = [RmqIndex(zx, maximum=True)]
        self.zlev = [zx]
        vals, bounds = yr, np.array([0, self.size], dtype=np.int64)
        z = zx
        for l in range(self.depth):
            plane = _plane_words(vals, self.depth - 1 - l)
            z, _ = _k_split_level(z, plane, bounds)
            vals, bounds = _k_split_level(vals, plane, bounds)
            self.zlev.append(z)
            self.zmax.append(RmqIndex(z, maximum=True))

    def box_max(self, xlo, xhi, ylo, yhi) -> int:
        a = int(np.searchsorted(self.xs, xlo))
        b = int(np.searchsorted(self.xs, xhi))
        if a >= b:
            return 0
        if self.wt is None:
            sel = (self.yx[a:b] >= ylo) & (self.yx[a:b] < yhi)
            return int(self.zx[a:b][sel].max()) if sel.any() else 0
        vlo = int(np.searchsorted(self.ys_sorted, ylo))
        vhi = int(np.searchsorted(self.ys_sorted, yhi))
        if vlo >= vhi:
            return 0
        W, SB, BLK, D = self.wt.W, self.wt.SB, self.wt.BLK, self.depth
        best = 0
        stack = [(0, 0, self.size, a, b, 0)]
        while stack:
            l, S, E, a, b, v0 = stack.pop()
            if a >= b:
                continue
            v1 = v0 + (1 << (D - l))
            if v1 <= vlo or v0 >= vhi:
                continue
            if vlo <= v0 and v1 <= vhi:
                pos = self.zmax[l].query(a + 1, b)
                best = max(best, int(self.zlev[l][pos - 1]))
                continue
            rS = _lrank(W, SB, BLK, l, S)
            rE = _lrank(W, SB, BLK, l, E)
            ra = _lrank(W, SB, BLK, l, a)
            rb = _lrank(W, SB, BLK, l, b)
            z = (E - S) - (rE - rS)
            half = 1 << (D - l - 1)
            stack.append((l + 1, S, S + z, a - (ra - rS), b - (rb - rS), v0))
            stack.append((l + 1, S + z, E, S + z + (ra - rS), S + z + (rb - rS), v0 + half))
        return best


class LongFactorIndex:
    """Anchors of long phrases at sampled block ends.

    Block ``k`` is ``X[(k-1)r+1..kr]``.  Its point has x = rank of the
    reversed block among all reversed blocks, y = row of suffix ``kr+1`` and
    z = k.  An occurrence at ``p`` of a phrase of length at least r contains
    the end of block ``k = ceil(p/r)`` at offset ``kr - p + 1`` in 1..r.
    """

    def __init__(self, codes, isa, r: int, ell: int, ti: TextIndex):
        if r < 1 or r > ell:
            raise ConfigError(f"need 1 <= r <= ell, got r={r}, ell={ell}")
        self.codes = np.ascontiguousarray(codes, dtype=np.int64)
        self.n = int(self.codes.size)
        self.r = int(r)
        self.ell = int(ell)
        self.ti = ti
        self.sb = max(1, int(self.codes.max(initial=1)).bit_length())
        self.LT = reversal_table(self.sb)
        m = self.n // self.r
        self.m = m
        rev = [reverse_packed(pack(self.codes[k * r:(k + 1) * r].tolist(), self.sb), r, self.sb, self.LT)
               for k in range(m)]
        order = sorted(range(m), key=rev.__getitem__)
        self.table = [rev[k] for k in order]
        x = np.empty(m, dtype=np.int64)
        x[np.asarray(order, dtype=np.int64)] = np.arange(m)
        y = np.asarray(isa, dtype=np.int64)[np.arange(1, m + 1) * r + 1] if m else np.zeros(0, dtype=np.int64)
        z = np.arange(1, m + 1, dtype=np.int64)
        self.points = (x, y, z)
        self._strata = {}
        self._build(0, m, x, y, z)

    def __len__(self) -> int:
        return self.m

    def _build(self, lo, hi, x, y, z):
        if hi <= lo:
            return
        self._strata[(lo, hi)] = _Stratum(x[lo:hi], y[lo:hi], z[lo:hi])
        if hi - lo > 1:
            mid = (lo + hi) // 2
            self._build(lo, mid, x, y, z)
            self._build(mid, hi, x, y, z)

    def table_range(self, key: int, k: int):
        """Half-open range of table entries whose first k symbols equal ``key``."""
        sh = (self.r - k) * self.sb
        return bisect_left(self.table, key << sh), bisect_left(self.table, (key + 1) << sh)

    def strata_max(self, xlo, xhi, ylo, yhi, zmax) -> int:
        """Largest block index <= zmax with its point in the box; 0 if none."""
        zmax = min(zmax, self.m)

        def visit(lo, hi):
            if lo >= zmax or hi <= lo:
                return 0
            if hi <= zmax:
                return self._strata[(lo, hi)].box_max(xlo, xhi, ylo, yhi)
            mid = (lo + hi) // 2
            return visit(mid, hi) or visit(lo, mid)

        return visit(0, self.m)

    def query(self, i: int, length: int) -> int:
        """Rightmost source of the phrase ``X[i..i+length-1]``; 0 if none."""
        if length < self.ell:
            raise ValueError(f"phrase of length {length} is shorter than {self.ell}")
        r, sb = self.r, self.sb
        fm = self.ti.fm
        ys, ye = _k_suffix_intervals(self.codes, i, length, r, *fm)
        full = pack(self.codes[i - 1:i - 1 + r].tolist(), sb)
        rev = reverse_packed(full, r, sb, self.LT)
        best = 0
        for k in range(1, r + 1):
            zmax = (i + k - 2) // r
            if zmax <= 0 or zmax * r - k + 1 <= best:
                continue
            xlo, xhi = self.table_range(rev & ((1 << (k * sb)) - 1), k)
            if xlo >= xhi:
                continue
            blk = self.strata_max(xlo, xhi, int(ys[k]), int(ye[k]), zmax)
            if blk:
                best = max(best, blk * r - k + 1)
        return best


def long_build(text, r: int, ell: int) -> LongFactorIndex:
    codes = _to_codes(text)[0]
    ti = TextIndex(Text.from_codes(codes), keep_sa=False)
    return LongFactorIndex(codes, _isa(ti), r, ell, ti)


def long_query(idx: LongFactorIndex, factor) -> int:
    """``factor`` is ``(start, length)``."""
    return idx.query(int(factor[0]), int(factor[1]))


# -- in-block phrases ----------------------------------------------------------


class BlockPredIndex:
    """Per block of ``block`` suffix-array rows: points (row, visit order).

    Visit order is the rank of a row's text position among the block's
    positions, assigned by counters while scanning positions left to right.
    Each block keeps its positions in an Elias–Fano sequence to translate a
    position bound into a visit-order bound and back.  Per-block indexes are
    built on first use.
    """

    def __init__(self, isa, n: int, block: int, c: int = 2):
        if block < 2:
            raise ConfigError("block size must be at least 2")
        self.n = int(n)
        self.block = int(block)
        self.c = c
        rows = np.asarray(isa, dtype=np.int64)[1:n + 2]
        N = n + 1
        self.n_blocks = (N + block - 1) // block
        blk = rows // block
        counts = np.bincount(blk, minlength=self.n_blocks)
        self.offsets = np.zeros(self.n_blocks + 1, dtype=np.int64)
        self.offsets[1:] = np.cumsum(counts)
        # positions grouped by block, increasing inside each block
        order = np.argsort(blk, kind="stable")
        self.positions = order + 1
        self.visit = np.empty(N, dtype=np.int64)
        self.visit[rows[order]] = np.arange(N) - self.offsets[blk[order]] + 1
        self._cache = {}

    def _block(self, b):
        got = self._cache.get(b)
        if got is None:
            lo, hi = b * self.block, min(self.n + 1, (b + 1) * self.block)
            rp = RangePredIndex(PointSet(self.visit[lo:hi]), self.c)
            ef = EliasFanoSeq(self.positions[self.offsets[b]:self.offsets[b + 1]], self.n + 1)
            got = self._cache[b] = (rp, ef)
        return got

    def query(self, i: int, s: int, e: int) -> int:
        """Rightmost position ``p < i`` with row in ``[s, e)`` (one block)."""
        b = s // self.block
        if (e - 1) // self.block != b:
            raise ValueError("interval spans more than one block")
        rp, ef = self._block(b)
        y2 = ef.rank(i - 1)
        hit = rp.query(s - b * self.block + 1, e - b * self.block, y2) if y2 else None
        if hit is None:
            raise LookupError(f"no earlier occurrence for the phrase at {i}")
        return ef.select(hit[1])

    def space_report(self) -> dict:
        rp = ef = 0
        for r, e in self._cache.values():
            rp += r.size_in_bits()
            ef += e.size_in_bits()
        return {"range_pred": rp, "positions": ef}


def inblock_resolve(bp: BlockPredIndex, starts, intervals) -> np.ndarray:
    s, e = intervals
    out = np.zeros(len(starts), dtype=np.int64)
    for f in range(len(starts)):
        out[f] = bp.query(int(starts[f]), int(s[f]), int(e[f]))
    return out


# -- driver --------------------------------------------------------------------


@dataclass
class RightmostConfig:
    """Thresholds; None picks a default from the text length and alphabet."""

    ell: int | None = None
    r: int | None = None
    block: int | None = None
    mode: str = "stratified"

    def resolve(self, n: int, sigma: int):
        lg = math.ceil(math.log2(n)) if n > 1 else 0
        r = self.r if self.r is not None else max(2, lg)
        ell = self.ell if self.ell is not None else max(8, lg * lg)
        block = self.block if self.block is not None else max(16, r * r * min(max(sigma, 1), 16))
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if r < 1 or ell < 1:
            raise ConfigError("r and ell must be positive")
        if r > ell:
            raise ConfigError(f"r = {r} exceeds ell = {ell}")
        if block < 2:
            raise ConfigError(f"block size {block} is below 2")
        return ell, r, block


class RightmostParser:
    """Greedy parse with every reference pointing at its most recent source."""

    def __init__(self, data, config: RightmostConfig | None = None):
        self.config = config or RightmostConfig()
        self.lz = LZParser(data)
        self.codes = self.lz.codes
        self.n = self.lz.n
        sigma = len(self.lz.alphabet) - 1
        self.ell, self.r, self.block = self.config.resolve(self.n, sigma)
        self.routes = {"long": 0, "boundary": 0, "inblock": 0, "basic": 0}
        self._result = None

    def parse_arrays(self):
        if self._result is not None:
            return self._result
        src, ln = self.lz.parse_arrays()
        src = src.copy()
        ref = np.flatnonzero(ln > 0)
        if ref.size == 0:
            self._result = (src, ln)
            return src, ln
        span = np.where(ln == 0, 1, ln)
        starts_all = np.cumsum(span) - span + 1
        starts, lens = starts_all[ref], ln[ref]
        ti = TextIndex(Text.from_codes(self.codes), keep_sa=False)
        isa = _isa(ti)
        s, e = factor_intervals(ti, self.codes, starts, lens)
        out = np.zeros(ref.size, dtype=np.int64)
        if self.config.mode == "basic":
            out[:] = rightmost_basic(ti, starts, (s, e), isa)
            self.routes["basic"] = int(ref.size)
        else:
            B = self.block
            long_ = lens >= self.ell
            cross = ~long_ & (s // B != (e - 1) // B)
            inblk = ~long_ & ~cross
            self.routes["long"] = int(long_.sum())
            self.routes["boundary"] = int(cross.sum())
            self.routes["inblock"] = int(inblk.sum())
            if long_.any():
                li = LongFactorIndex(self.codes, isa, self.r, self.ell, ti)
                out[long_] = [li.query(int(i), int(l)) for i, l in zip(starts[long_], lens[long_])]
            if cross.any():
                out[cross] = boundary_resolve(ti, starts[cross], lens[cross], (s[cross], e[cross]),
                                              B, self.ell, isa)
            if inblk.any():
                bp = BlockPredIndex(isa, self.n, B)
                out[inblk] = inblock_resolve(bp, starts[inblk], (s[inblk], e[inblk]))
        if np.any(out <= 0) or np.any(out >= starts):
            raise AssertionError("a reference phrase lost its source")
        src[ref] = out
        self._result = (src, ln)
        return self._result

    def parse(self) -> list[Factor]:
        src, ln = self.parse_arrays()
        if self.lz._is_str:
            return [Factor(chr(a) if l == 0 else int(a), int(l)) for a, l in zip(src.tolist(), ln.tolist())]
        return [Factor(int(a), int(l)) for a, l in zip(src.tolist(), ln.tolist())]


def rightmost_parse(text, config: RightmostConfig | None = None) -> list[Factor]:
    return RightmostParser(text, config).parse()
