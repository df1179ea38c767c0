"""Suffix array, BWT and FM-index navigation.

Texts are dense code sequences ending in a unique sentinel 0.  The suffix
array is built by induced sorting (SA-IS).  The BWT is kept as a wavelet
tree over the non-sentinel symbols only; the single sentinel row is
remembered separately, which keeps the tree depth at ``ceil(log2 sigma)``
for the real alphabet.

Public positions are 1-based.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .succinct import BitVector, PackedArray, _k_bit, _k_get, _k_rank1
from .wavelet import WaveletTree, _k_access_rank, _k_rank


class Text:
    """Dense code sequence terminated by the sentinel 0.

    ``alphabet[c]`` is the original symbol behind code ``c`` (``None`` for
    the sentinel).
    """

    def __init__(self, symbols, alphabet=None):
        s = np.ascontiguousarray(symbols, dtype=np.int64)
        if s.size == 0 or s[-1] != 0:
            raise ValueError("text must end with the sentinel 0")
        if np.count_nonzero(s == 0) != 1:
            raise ValueError("sentinel must occur exactly once")
        if s.min() < 0:
            raise ValueError("negative symbol")
        sigma = int(s.max()) + 1
        if np.unique(s).size != sigma:
            raise ValueError("alphabet must be dense (every code 0..max present)")
        self.symbols = s
        self.n = int(s.size)
        self.sigma = sigma
        self.alphabet = list(alphabet) if alphabet is not None else [None] + list(range(1, sigma))

    @classmethod
    def from_bytes(cls, data) -> "Text":
        """Map symbols to codes 1.. by first occurrence and append the sentinel."""
        raw = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
        codes, alphabet = dense_codes(raw)
        return cls(np.append(codes, 0), alphabet)

    @classmethod
    def from_codes(cls, codes, alphabet=None) -> "Text":
        return cls(np.append(np.asarray(codes, dtype=np.int64), 0), alphabet)

    def body(self) -> np.ndarray:
        """Codes without the sentinel."""
        return self.symbols[:-1]

    def reversed(self) -> "Text":
        """Reversed body with its own sentinel and the same code map."""
        return Text(np.append(self.symbols[-2::-1], 0), self.alphabet)

    def decode(self, codes=None) -> list:
        codes = self.body() if codes is None else codes
        return [self.alphabet[c] for c in codes]

    def __len__(self) -> int:
        return self.n


def dense_codes(raw):
    """Codes ``1..k`` by order of first occurrence, and the alphabet list."""
    raw = np.asarray(raw)
    if raw.size == 0:
        return np.zeros(0, dtype=np.int64), [None]
    uniq, first, inv = np.unique(raw, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    code_of = np.empty(uniq.size, dtype=np.int64)
    code_of[order] = np.arange(1, uniq.size + 1)
    alphabet = [None] + [uniq[k].item() for k in order]
    return code_of[inv.ravel()], alphabet


# -- SA-IS ---------------------------------------------------------------------


@njit(cache=True)
def _k_types(s):
    n = s.shape[0]
    t = np.zeros(n, dtype=np.uint8)
    t[n - 1] = 1
    for i in range(n - 2, -1, -1):
        if s[i] < s[i + 1] or (s[i] == s[i + 1] and t[i + 1] == 1):
            t[i] = 1
    return t


@njit(cache=True, inline="always")
def _is_lms(t, i):
    return i > 0 and t[i] == 1 and t[i - 1] == 0


@njit(cache=True)
def _k_bucket_bounds(s, K, ends):
    b = np.zeros(K, dtype=np.int64)
    for i in range(s.shape[0]):
        b[s[i]] += 1
    tot = 0
    for c in range(K):
        tot += b[c]
        b[c] = tot if ends else tot - b[c]
    return b


@njit(cache=True)
def _k_induce(s, K, t, SA):
    n = s.shape[0]
    bkt = _k_bucket_bounds(s, K, False)
    for i in range(n):
        j = SA[i] - 1
        if SA[i] > 0 and t[j] == 0:
            SA[bkt[s[j]]] = j
            bkt[s[j]] += 1
    bkt = _k_bucket_bounds(s, K, True)
    for i in range(n - 1, -1, -1):
        j = SA[i] - 1
        if SA[i] > 0 and t[j] == 1:
            bkt[s[j]] -= 1
            SA[bkt[s[j]]] = j


@njit(cache=True)
def _k_stage1(s, K, t):
    n = s.shape[0]
    SA = np.full(n, -1, dtype=np.int64)
    bkt = _k_bucket_bounds(s, K, True)
    for i in range(1, n):
        if _is_lms(t, i):
            bkt[s[i]] -= 1
            SA[bkt[s[i]]] = i
    _k_induce(s, K, t, SA)
    return SA


@njit(cache=True)
def _k_name(s, t, SA):
    """Name sorted LMS substrings; return reduced string, LMS positions, name count."""
    n = s.shape[0]
    m = 0
    for i in range(n):
        if _is_lms(t, SA[i]):
            SA[m] = SA[i]
            m += 1
    names = np.full(n // 2 + 1, -1, dtype=np.int64)
    name = -1
    prev = -1
    for k in range(m):
        pos = SA[k]
        diff = False
        d = 0
        while True:
            if prev == -1 or s[pos + d] != s[prev + d] or t[pos + d] != t[prev + d]:
                diff = True
                break
            if d > 0 and (_is_lms(t, pos + d) or _is_lms(t, prev + d)):
                break
            d += 1
        if diff:
            name += 1
            prev = pos
        names[pos // 2] = name
    s1 = np.empty(m, dtype=np.int64)
    P1 = np.empty(m, dtype=np.int64)
    j = 0
    for i in range(1, n):
        if _is_lms(t, i):
            s1[j] = names[i // 2]
            P1[j] = i
            j += 1
    return s1, P1, name + 1


@njit(cache=True)
def _k_stage2(s, K, t, lms_sorted):
    n = s.shape[0]
    SA = np.full(n, -1, dtype=np.int64)
    bkt = _k_bucket_bounds(s, K, True)
    for i in range(lms_sorted.shape[0] - 1, -1, -1):
        j = lms_sorted[i]
        bkt[s[j]] -= 1
        SA[bkt[s[j]]] = j
    _k_induce(s, K, t, SA)
    return SA


def suffix_array(s, K: int) -> np.ndarray:
    """0-based suffix array of ``s`` (last symbol 0, unique) over ``0..K-1``."""
    s = np.ascontiguousarray(s, dtype=np.int64)
    n = s.size
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    t = _k_types(s)
    SA = _k_stage1(s, K, t)
    s1, P1, names = _k_name(s, t, SA)
    del SA
    if names < s1.size:
        SA1 = suffix_array(s1, names)
    else:
        SA1 = np.empty(s1.size, dtype=np.int64)
        SA1[s1] = np.arange(s1.size)
    return _k_stage2(s, K, t, P1[SA1])


# -- FM-index kernels ----------------------------------------------------------


@njit(cache=True, inline="always")
def _k_occ(W, SB, BLK, depth, nwt, dpos, c, i):
    """Occurrences of code c >= 1 among BWT rows [0, i)."""
    if i > dpos:
        i -= 1
    return _k_rank(W, SB, BLK, depth, nwt, c - 1, i)


@njit(cache=True, inline="always")
def _k_bstep(W, SB, BLK, depth, nwt, dpos, C, s, e, c):
    """Backward step on the half-open row range [s, e) with code c >= 1."""
    return (C[c] + _k_occ(W, SB, BLK, depth, nwt, dpos, c, s),
            C[c] + _k_occ(W, SB, BLK, depth, nwt, dpos, c, e))


@njit(cache=True, inline="always")
def _k_lf(W, SB, BLK, depth, nwt, dpos, C, i):
    if i == dpos:
        return 0
    if i > dpos:
        i -= 1
    a, r = _k_access_rank(W, SB, BLK, depth, nwt, i)
    return C[a + 1] + r


@njit(cache=True)
def _k_invert(W, SB, BLK, depth, nwt, dpos, C, n):
    """Rows visited from the sentinel row onward (text positions n, n-1, ..., 1)."""
    out = np.empty(n, dtype=np.int64)
    p = 0
    for k in range(n):
        out[k] = p
        p = _k_lf(W, SB, BLK, depth, nwt, dpos, C, p)
    return out


@njit(cache=True)
def _k_sa_lookup(W, SB, BLK, depth, nwt, dpos, C, mw, msb, mblk, samples, swidth, stride, j):
    k = 0
    while not _k_bit(mw, j):
        j = _k_lf(W, SB, BLK, depth, nwt, dpos, C, j)
        k += 1
    r = _k_rank1(mw, msb, mblk, j)
    return _k_get(samples, swidth, r) * stride + k


@njit(cache=True)
def _k_bwt_codes(s, SA):
    n = s.shape[0]
    out = np.empty(n - 1, dtype=np.int64)
    dpos = -1
    k = 0
    for i in range(n):
        if SA[i] == 0:
            dpos = i
        else:
            out[k] = s[SA[i] - 1] - 1
            k += 1
    return out, dpos


class TextIndex:
    """Suffix array, BWT wavelet tree, counts and sampled SA of a :class:`Text`.

    ``C[c]`` counts symbols smaller than ``c`` (sentinel included).  The
    sampled SA keeps text positions ``1, 1 + s, 1 + 2s, ...`` with
    ``s = max(1, ceil(log2 n))`` so a lookup takes fewer than ``s`` LF steps.
    """

    def __init__(self, text: Text, keep_sa: bool = True, stride: int | None = None):
        if not isinstance(text, Text):
            raise ValueError("expected a Text")
        s = text.symbols
        n = text.n
        self.text = text
        self.n = n
        self.sigma = text.sigma
        SA = suffix_array(s, self.sigma)
        counts = np.bincount(s, minlength=self.sigma)
        self.C = np.zeros(self.sigma + 1, dtype=np.int64)
        self.C[1:] = np.cumsum(counts)
        codes, dpos = _k_bwt_codes(s, SA)
        self.dollar_row = int(dpos)
        self.bwt = WaveletTree(codes, max(1, self.sigma - 1))
        del codes
        self.stride = int(stride) if stride else max(1, (n - 1).bit_length())
        marked = (SA % self.stride) == 0
        self.marker = BitVector(marked)
        smax = (n - 1) // self.stride
        self.samples = PackedArray(SA[marked] // self.stride, max(1, smax.bit_length()))
        self.sa = SA + 1 if keep_sa else None
        self.isa_first = self.dollar_row + 1

    # kernel argument bundle
    @property
    def fm(self):
        w = self.bwt
        return (w.W, w.SB, w.BLK, w.depth, w.n, self.dollar_row, self.C)

    def __len__(self) -> int:
        return self.n

    def bwt_symbol(self, i: int) -> int:
        """Code of BWT row ``i`` (0 for the sentinel)."""
        self._check_row(i)
        r = i - 1
        if r == self.dollar_row:
            return 0
        return self.bwt.access(r + 1 - (r > self.dollar_row)) + 1

    def occ(self, c: int, i: int) -> int:
        """Occurrences of code ``c`` among BWT rows ``1..i``."""
        if not 0 <= i <= self.n:
            raise IndexError(i)
        if c == 0:
            return int(i > self.dollar_row)
        if not 0 < c < self.sigma:
            return 0
        W, SB, BLK, depth, nwt, dpos, _ = self.fm
        return int(_k_occ(W, SB, BLK, depth, nwt, dpos, c, i))

    def backward_search_step(self, s: int, e: int, c: int):
        """Rows of ``c`` + pattern given the pattern's rows ``[s, e]``; None if empty."""
        if not 1 <= s <= e <= self.n:
            raise IndexError(f"invalid row range [{s}, {e}]")
        if not 0 <= c < self.sigma:
            return None
        ns = int(self.C[c]) + self.occ(c, s - 1) + 1
        ne = int(self.C[c]) + self.occ(c, e)
        return (ns, ne) if ns <= ne else None

    def lf(self, i: int) -> int:
        self._check_row(i)
        return int(_k_lf(*self.fm, i - 1)) + 1

    def invert_bwt_visit(self, visitor) -> None:
        """Call ``visitor(row, text_pos)`` for text positions n, n-1, ..., 1."""
        rows = _k_invert(*self.fm, self.n)
        for k in range(self.n):
            visitor(int(rows[k]) + 1, self.n - k)

    def inversion_rows(self) -> np.ndarray:
        """Rows in inversion order (1-based), as an array."""
        return _k_invert(*self.fm, self.n) + 1

    def sa_lookup(self, j: int) -> int:
        self._check_row(j)
        m = self.marker
        return int(_k_sa_lookup(*self.fm, m.words, m.sb, m.blk, self.samples.words, self.samples.width,
                                self.stride, j - 1)) + 1

    def _check_row(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"row {i} outside 1..{self.n}")

    def space_report(self) -> dict:
        wt = self.bwt.space_report()
        rep = {
            "bwt_levels": wt["levels"],
            "bwt_index": wt["index"],
            "counts": 64 * int(self.C.size),
            "sa_marker": self.marker.size_in_bits(),
            "sa_samples": self.samples.bits(),
        }
        if self.sa is not None:
            rep["suffix_array"] = 64 * int(self.sa.size)
        return rep


def build_text_index(text: Text, keep_sa: bool = True) -> TextIndex:
    return TextIndex(text, keep_sa)


def backward_search_step(ti: TextIndex, rng, c: int):
    return ti.backward_search_step(rng[0], rng[1], c)


def lf_step(ti: TextIndex, i: int) -> int:
    return ti.lf(i)


def invert_bwt_visit(ti: TextIndex, visitor) -> None:
    ti.invert_bwt_visit(visitor)


def sa_lookup(ti: TextIndex, j: int) -> int:
    return ti.sa_lookup(j)
