"""Regenerate the bundled corpus: python tests/corpus/generate.py"""

from pathlib import Path

import numpy as np

HERE = Path(__file__).parent

WORDS = """the of and to in is that for it as with was on be by at this are from or
an which have not but had they were all their has more one been can there its
would if some other into than time only new these two may first any such well
over after also most made between many where should under long each same both
through state water river north south city small great part place house world
line light paper order number point house across before again while little""".split()


def text(rng, n=60_000):
    out = []
    size = 0
    while size < n:
        k = rng.integers(6, 18)
        w = [WORDS[i] for i in rng.integers(0, len(WORDS), k)]
        s = " ".join(w).capitalize() + ". "
        if rng.random() < 0.1:
            s += "\n"
        out.append(s)
        size += len(s)
    return "".join(out).encode("ascii")[:n]


def dna(rng, n=80_000):
    base = rng.choice(list(b"ACGT"), 4000)
    out = bytearray()
    while len(out) < n:
        if rng.random() < 0.5:
            a = rng.integers(0, base.size - 400)
            seg = base[a:a + rng.integers(50, 400)].copy()
            flips = rng.random(seg.size) < 0.02
            seg[flips] = rng.choice(list(b"ACGT"), int(flips.sum()))
        else:
            seg = rng.choice(list(b"ACGT"), rng.integers(20, 200))
        out += bytes(seg.astype(np.uint8))
    return bytes(out[:n])


def binary(rng, n=50_000):
    ramp = np.arange(n // 8, dtype="<i4").tobytes()
    noise = rng.integers(0, 256, n // 4, dtype=np.uint8).tobytes()
    table = (np.sin(np.arange(n // 8) / 7.0) * 1000).astype("<i2").tobytes()
    blob = ramp + noise + table
    return (blob + bytes(range(256)) * (n // 256))[:n]


def repetitive(rng, n=100_000):
    unit = bytearray(text(rng, 1500))
    out = bytearray()
    while len(out) < n:
        out += unit
        for _ in range(2):
            unit[rng.integers(0, len(unit))] = rng.integers(97, 123)
    return bytes(out[:n])


def main():
    rng = np.random.default_rng(20240611)
    for name, fn in [("text.txt", text), ("dna.txt", dna), ("binary.bin", binary), ("repetitive.txt", repetitive)]:
        (HERE / name).write_bytes(fn(rng))


if __name__ == "__main__":
    main()
