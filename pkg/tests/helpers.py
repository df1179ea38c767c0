"""Naive reference computations shared by the test modules."""

from pathlib import Path

import numpy as np

CORPUS = Path(__file__).parent / "corpus"
CORPUS_FILES = ["text.txt", "dna.txt", "binary.bin", "repetitive.txt"]


def corpus(name: str) -> bytes:
    return (CORPUS / name).read_bytes()


def naive_sa(s) -> list[int]:
    """1-based suffix array of a code sequence (sentinel included)."""
    s = list(s)
    return [i + 1 for i in sorted(range(len(s)), key=lambda i: s[i:])]


def naive_rmq(vals, i, j, maximum=False):
    seg = list(vals[i - 1:j])
    best = max(seg) if maximum else min(seg)
    return i + seg.index(best)


def random_text(rng, n, sigma, alphabet="abcdefghijklmnopqrstuvwxyz"):
    return "".join(alphabet[k] for k in rng.integers(0, sigma, n))


def repetitive_text(rng, n, sigma, period=None, edits=3):
    period = period or int(rng.integers(1, 40))
    base = random_text(rng, period, sigma)
    t = list((base * (n // period + 1))[:n])
    for _ in range(edits):
        if n:
            t[int(rng.integers(0, n))] = "abcdefghijklmnopqrstuvwxyz"[int(rng.integers(0, sigma))]
    return "".join(t)


def lpf(text, i):
    """Longest previous factor length at 1-based i, by brute force."""
    n = len(text)
    best = 0
    for p in range(i - 1):
        l = 0
        while i - 1 + l < n and text[p + l] == text[i - 1 + l]:
            l += 1
        best = max(best, l)
    return best
