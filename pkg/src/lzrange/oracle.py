"""Brute-force references for the property tests and the ``verify`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .lz import Factor, _to_codes


@dataclass(frozen=True)
class OracleConfig:
    max_n: int = 100_000
    seed: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@njit(cache=True)
def _k_oracle_lz(x, rightmost):
    """Greedy longest previous factors by direct comparison.

    Returns (src, length) arrays, 1-based sources; literals carry length 0
    and the 0-based text position in src (the caller swaps in the symbol).
    """
    n = x.shape[0]
    src = np.empty(n, dtype=np.int64)
    ln = np.empty(n, dtype=np.int64)
    z = 0
    i = 0
    while i < n:
        best = 0
        bp = -1
        for p in range(i):
            l = 0
            while i + l < n and x[p + l] == x[i + l]:
                l += 1
            if l > best or (rightmost and l > 0 and l == best):
                best = l
                bp = p
        if best == 0:
            src[z] = i
            ln[z] = 0
            i += 1
        else:
            src[z] = bp + 1
            ln[z] = best
            i += best
        z += 1
    return src[:z], ln[:z]


def _oracle(text, rightmost):
    codes, _, is_str = _to_codes(text)
    src, ln = _k_oracle_lz(codes, rightmost)
    if isinstance(text, str):
        raw = text
    elif isinstance(text, (bytes, bytearray, memoryview)):
        raw = bytes(text)
    else:
        raw = list(np.asarray(text).tolist()) if not hasattr(text, "body") else None
    out = []
    for s, l in zip(src.tolist(), ln.tolist()):
        if l == 0:
            sym = raw[s] if raw is not None else text.alphabet[codes[s]]
            out.append(Factor(sym, 0))
        else:
            out.append(Factor(s, l))
    return out


def oracle_lz(text) -> list[Factor]:
    """Greedy parse with the leftmost source among the longest matches."""
    return _oracle(text, False)


def oracle_rightmost(text) -> list[Factor]:
    """Greedy parse with the rightmost (most recent) source of each phrase."""
    return _oracle(text, True)


def oracle_range_pred(points, x1: int, x2: int, y2: int):
    """Point with ``x1 <= x <= x2`` and the largest ``y <= y2``, by linear scan."""
    Y = points.y_of_x if hasattr(points, "y_of_x") else np.asarray(points)
    best = None
    for x in range(max(1, x1), min(len(Y), x2) + 1):
        y = int(Y[x - 1])
        if y <= y2 and (best is None or y > best[1]):
            best = (x, y)
    return best


@njit(cache=True)
def _k_rp_scan(Y, x1, x2, y2, out_x, out_y):
    for q in range(x1.shape[0]):
        bx = 0
        by = 0
        for x in range(x1[q], x2[q] + 1):
            y = Y[x - 1]
            if y <= y2[q] and y > by:
                bx = x
                by = y
        out_x[q] = bx
        out_y[q] = by


def oracle_range_pred_batch(points, x1, x2, y2):
    """Vectorised scan oracle; absent answers are ``(0, 0)``."""
    Y = np.ascontiguousarray(points.y_of_x if hasattr(points, "y_of_x") else points, dtype=np.int64)
    x1 = np.ascontiguousarray(x1, dtype=np.int64)
    x2 = np.ascontiguousarray(x2, dtype=np.int64)
    y2 = np.ascontiguousarray(y2, dtype=np.int64)
    ox = np.zeros(x1.size, dtype=np.int64)
    oy = np.zeros(x1.size, dtype=np.int64)
    _k_rp_scan(Y, x1, x2, y2, ox, oy)
    return ox, oy


def phrase_starts(factors) -> list[int]:
    out = []
    i = 1
    for f in factors:
        out.append(i)
        i += 1 if f[1] == 0 else f[1]
    return out


def is_valid_source(text, i: int, src: int, length: int) -> bool:
    """``text[src..src+length-1] == text[i..i+length-1]`` with ``src < i`` (1-based)."""
    if not 1 <= src < i:
        return False
    return all(text[src - 1 + k] == text[i - 1 + k] for k in range(length))
