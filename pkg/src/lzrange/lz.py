"""Greedy LZ77 parsing in compact space over the FM-index of the reversed text.

With ``X' = reverse(X)``, the suffix of ``X'`` starting at ``q`` spells the
prefix of ``X`` ending at ``t = n - q + 1`` backwards.  Extending the
pattern ``X[i..i+j-1]`` by one symbol on the right is therefore one
backward-search step on ``X'``.  The pattern has an earlier occurrence iff
some suffix in its row range ends at ``t <= i + j - 2``.

The index of ``X'`` is inverted in lock step with the parse, which visits
suffixes in order of increasing ``t``.  Visited rows are flagged in a
bitvector ``B``, so "visited" means exactly ``q >= n - i - j + 3``.  A row
range is then tested in three parts:

* whole blocks, through range maximum over the per-block maxima of ``q``;
* the head and tail, through a word-masked scan of ``B``.

Each factor keeps one candidate: either a ``q`` value read from the block
maxima, or a row of ``B`` whose ``q`` a second inversion recovers.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from .rmq import RmqIndex, _k_rmq_query
from .succinct import PackedArray, _k_find_one, _k_get, _k_bit
from .text_index import Text, TextIndex, _k_bstep, _k_lf, _k_invert, dense_codes


class Factor(NamedTuple):
    """One phrase as the pair ``(src, length)``; ``length == 0`` marks a literal
    whose symbol is stored in ``src``."""

    src: int
    length: int

    @property
    def is_literal(self) -> bool:
        return self.length == 0

    @property
    def span(self) -> int:
        return 1 if self.length == 0 else self.length

    @staticmethod
    def literal(symbol) -> "Factor":
        return Factor(symbol, 0)


def block_size_for(N: int) -> int:
    return min(64, max(1, (max(N, 1).bit_length() - 1) // 2))


@njit(cache=True)
def _k_block_maxima(W, SB, BLK, depth, nwt, dpos, C, N, b):
    """Max suffix start per block of b rows, from one inversion pass.

    Starts are visited in decreasing order, so the first visit of a block
    already holds its maximum.
    """
    nb = (N + b - 1) // b
    A = np.zeros(nb, dtype=np.int64)
    p = 0
    for k in range(N):
        blk = p // b
        if A[blk] == 0:
            A[blk] = N - k
        p = _k_lf(W, SB, BLK, depth, nwt, dpos, C, p)
    return A


class BlockMaxima:
    """Per-block maxima of the reversed text's suffix array plus range maximum."""

    def __init__(self, ti: TextIndex, b: int | None = None):
        self.N = ti.n
        self.b = int(b) if b else block_size_for(self.N)
        A = _k_block_maxima(*ti.fm, self.N, self.b)
        self.A = PackedArray(A, max(1, self.N.bit_length()))
        self.rmax = RmqIndex(self.A, maximum=True)

    def __len__(self) -> int:
        return len(self.A)

    def values(self) -> np.ndarray:
        return self.A.to_numpy()

    def space_report(self) -> dict:
        return {"A": self.A.bits(), "rmax": self.rmax.space_report()["sparse_table"]}


@njit(cache=True)
def _k_gate(Bw, Aw, Awidth, table, b, s, e, thr):
    """Earlier occurrence among rows [s, e] with start >= thr.

    Returns (kind, value): kind 1 with a start q from the block maxima,
    kind 2 with a visited row, or (0, 0) when the gate fails.
    """
    fb = (s + b - 1) // b
    lb = (e + 1) // b - 1
    if fb <= lb:
        k = _k_rmq_query(Aw, Awidth, True, table, fb, lb)
        q = _k_get(Aw, Awidth, k)
        if q >= thr:
            return 1, q
        r = _k_find_one(Bw, s, fb * b - 1)
        if r < 0:
            r = _k_find_one(Bw, (lb + 1) * b, e)
    else:
        r = _k_find_one(Bw, s, e)
    if r >= 0:
        return 2, r
    return 0, 0


@njit(cache=True)
def _k_parse(X, W, SB, BLK, depth, nwt, dpos, C, Aw, Awidth, table, b):
    """Greedy parse; returns per-factor (kind, value, length) arrays and B.

    kind 0 = literal (value = code), 1 = start q known, 2 = row pending.
    """
    n = X.shape[0]
    N = n + 1
    Bw = np.zeros((N + 63) >> 6, dtype=np.uint64)
    cap = 1024
    kind = np.empty(cap, dtype=np.int8)
    val = np.empty(cap, dtype=np.int64)
    ln = np.empty(cap, dtype=np.int64)
    z = 0
    row = 0
    t_next = 0
    i = 1
    while i <= n:
        s = 0
        e = N - 1
        j = 0
        ck = 0
        cv = 0
        while i + j <= n:
            ns, ne = _k_bstep(W, SB, BLK, depth, nwt, dpos, C, s, e + 1, X[i + j - 1])
            jl = j + 1
            # visit every prefix ending at or before i + jl - 2
            while t_next <= i + jl - 2:
                Bw[row >> 6] |= np.uint64(1) << np.uint64(row & 63)
                row = _k_lf(W, SB, BLK, depth, nwt, dpos, C, row)
                t_next += 1
            if ne <= ns:
                break
            gk, gv = _k_gate(Bw, Aw, Awidth, table, b, ns, ne - 1, n - i - jl + 3)
            if gk == 0:
                break
            j = jl
            s = ns
            e = ne - 1
            ck = gk
            cv = gv
        if z == cap:
            cap *= 2
            kind2 = np.empty(cap, dtype=np.int8)
            val2 = np.empty(cap, dtype=np.int64)
            ln2 = np.empty(cap, dtype=np.int64)
            kind2[:z] = kind[:z]
            val2[:z] = val[:z]
            ln2[:z] = ln[:z]
            kind = kind2
            val = val2
            ln = ln2
        if j == 0:
            kind[z] = 0
            val[z] = X[i - 1]
            ln[z] = 0
            i += 1
        else:
            kind[z] = ck
            val[z] = cv
            ln[z] = j
            i += j
        z += 1
    return kind[:z], val[:z], ln[:z], Bw


@njit(cache=True)
def _k_gate_probe(X, W, SB, BLK, depth, nwt, dpos, C, Aw, Awidth, table, b, i, j):
    """The parser's gate for X[i..i+j-1], with B set up from scratch."""
    n = X.shape[0]
    N = n + 1
    Bw = np.zeros((N + 63) >> 6, dtype=np.uint64)
    row = 0
    for t in range(i + j - 1):
        Bw[row >> 6] |= np.uint64(1) << np.uint64(row & 63)
        row = _k_lf(W, SB, BLK, depth, nwt, dpos, C, row)
    s = 0
    e = N
    for k in range(j):
        s, e = _k_bstep(W, SB, BLK, depth, nwt, dpos, C, s, e, X[i + k - 1])
        if e <= s:
            return False
    gk, _ = _k_gate(Bw, Aw, Awidth, table, b, s, e - 1, n - i - j + 3)
    return gk > 0


@njit(cache=True)
def _k_resolve(kind, val, ln, W, SB, BLK, depth, nwt, dpos, C, N):
    """Turn candidates into 1-based sources; rows go through one more inversion."""
    n = N - 1
    z = kind.shape[0]
    m = 0
    for f in range(z):
        if kind[f] == 2:
            m += 1
    rows = np.empty(m, dtype=np.int64)
    k = 0
    for f in range(z):
        if kind[f] == 2:
            rows[k] = val[f]
            k += 1
    rows = np.unique(rows)
    qs = np.zeros(rows.shape[0], dtype=np.int64)
    if rows.shape[0]:
        flag = np.zeros((N + 63) >> 6, dtype=np.uint64)
        for r in rows:
            flag[r >> 6] |= np.uint64(1) << np.uint64(r & 63)
        p = 0
        for t in range(N):
            if _k_bit(flag, p):
                qs[np.searchsorted(rows, p)] = N - t
            p = _k_lf(W, SB, BLK, depth, nwt, dpos, C, p)
    src = np.empty(z, dtype=np.int64)
    for f in range(z):
        if kind[f] == 0:
            src[f] = val[f]
        else:
            q = val[f]
            if kind[f] == 2:
                q = qs[np.searchsorted(rows, val[f])]
            src[f] = n - q - ln[f] + 2
    return src


@njit(cache=True)
def _k_decode(src, ln, n):
    out = np.empty(n, dtype=np.int64)
    i = 0
    for f in range(src.shape[0]):
        if ln[f] == 0:
            out[i] = src[f]
            i += 1
        else:
            p = src[f] - 1
            for k in range(ln[f]):
                out[i] = out[p + k]
                i += 1
    return out


def _to_codes(data):
    """Codes 1..k, the alphabet list, and whether the input was a str."""
    if isinstance(data, Text):
        return data.body().copy(), data.alphabet, False
    if isinstance(data, str):
        raw = np.array([ord(ch) for ch in data], dtype=np.int64)
        codes, alpha = dense_codes(raw)
        return codes, alpha, True
    if isinstance(data, (bytes, bytearray, memoryview)):
        raw = np.frombuffer(bytes(data), dtype=np.uint8)
    else:
        raw = np.asarray(data)
    codes, alpha = dense_codes(raw)
    return codes, alpha, False


class LZParser:
    """Compact-space LZ77 parser; see the module docstring for the method."""

    def __init__(self, data, block_size: int | None = None):
        self.codes, self.alphabet, self._is_str = _to_codes(data)
        self.n = int(self.codes.size)
        rev = Text.from_codes(self.codes[::-1], self.alphabet)
        self.index = TextIndex(rev, keep_sa=False)
        self.maxima = BlockMaxima(self.index, block_size)
        self._result = None

    def _kernel_args(self):
        A = self.maxima.A
        return (*self.index.fm, A.words, A.width, self.maxima.rmax.table, self.maxima.b)

    def parse_arrays(self):
        """``(src, length)`` arrays; literals have length 0 and src = original symbol."""
        if self._result is None:
            if self.n == 0:
                self._result = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
                self._z = 0
                self._B_bits = 0
                return self._result
            kind, val, ln, Bw = _k_parse(self.codes, *self._kernel_args())
            src = _k_resolve(kind, val, ln, *self.index.fm, self.index.n)
            lit = ln == 0
            if lit.any():
                table = np.array([0 if a is None else a for a in self.alphabet], dtype=np.int64)
                src[lit] = table[src[lit]]
            self._z = int(kind.size)
            self._B_bits = 64 * int(Bw.size)
            self._result = (src, ln)
        return self._result

    def parse(self) -> list[Factor]:
        src, ln = self.parse_arrays()
        if self._is_str:
            return [Factor(chr(s) if l == 0 else int(s), int(l)) for s, l in zip(src.tolist(), ln.tolist())]
        return [Factor(int(s), int(l)) for s, l in zip(src.tolist(), ln.tolist())]

    def gate(self, i: int, j: int) -> bool:
        """Whether ``X[i..i+j-1]`` occurs starting before ``i`` (parser machinery)."""
        if not (1 <= i and j >= 1 and i + j - 1 <= self.n):
            raise IndexError((i, j))
        return bool(_k_gate_probe(self.codes, *self._kernel_args(), i, j))

    def aux_space_report(self) -> dict:
        self.parse_arrays()
        rep = self.maxima.space_report()
        rep["B"] = self._B_bits
        rep["candidates"] = self._z * (max(1, self.index.n.bit_length()) + 2)
        return rep


def lz_parse(data) -> list[Factor]:
    return LZParser(data).parse()


def decode(factors, as_str: bool | None = None):
    """Inverse of the parse.  Returns a str when literals are characters."""
    out = []
    for f in factors:
        src, length = f
        i = len(out) + 1
        if length == 0:
            out.append(src)
            continue
        if not 1 <= src < i:
            raise ValueError(f"reference at {i} has invalid source {src}")
        for k in range(length):
            out.append(out[src - 1 + k])
    if as_str is None:
        as_str = bool(out) and isinstance(out[0], str)
    if as_str:
        return "".join(out)
    return out


def decode_arrays(src, ln) -> np.ndarray:
    src = np.ascontiguousarray(src, dtype=np.int64)
    ln = np.ascontiguousarray(ln, dtype=np.int64)
    pos = np.cumsum(np.where(ln == 0, 1, ln)) - np.where(ln == 0, 1, ln) + 1
    bad = (ln > 0) & ((src < 1) | (src >= pos))
    if bad.any():
        f = int(np.flatnonzero(bad)[0])
        raise ValueError(f"factor {f + 1} at {int(pos[f])} has invalid source {int(src[f])}")
    n = int(np.where(ln == 0, 1, ln).sum())
    return _k_decode(src, ln, n)
