"""Command-line front end: ``lzrange parse|decode|verify|stats``.

Factor files come in two formats.  Text: one record per line, ``L <byte>``
for a literal and ``R <src> <len>`` for a reference (1-based).  Binary: the
magic ``LZC1`` followed by records, tag 0 plus one byte for a literal and
tag 1 plus two LEB128 varints for a reference.

Exit codes: 0 ok, 1 verification mismatch, 2 I/O error, 3 configuration
error or oversized input, 4 malformed factor file.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .errors import ConfigError
from .lz import LZParser, decode_arrays
from .oracle import oracle_lz, oracle_rightmost
from .rightmost import MODES, RightmostConfig, RightmostParser

MAGIC = b"LZC1"
EXIT_OK, EXIT_MISMATCH, EXIT_IO, EXIT_CONFIG, EXIT_MALFORMED = 0, 1, 2, 3, 4
VERIFY_MAX_N = 100_000


class MalformedFile(ValueError):
    pass


# -- factor file formats -------------------------------------------------------


def _varint(x: int, out: bytearray):
    while True:
        b = x & 0x7F
        x >>= 7
        if x:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def encode_text(src, ln) -> bytes:
    lines = [f"L {s}" if l == 0 else f"R {s} {l}" for s, l in zip(src.tolist(), ln.tolist())]
    return "".join(line + "\n" for line in lines).encode("ascii")


def encode_binary(src, ln) -> bytes:
    out = bytearray(MAGIC)
    for s, l in zip(src.tolist(), ln.tolist()):
        if l == 0:
            out.append(0)
            out.append(s)
        else:
            out.append(1)
            _varint(s, out)
            _varint(l, out)
    return bytes(out)


def _read_varint(buf: bytes, i: int):
    x = 0
    sh = 0
    while True:
        if i >= len(buf):
            raise MalformedFile("truncated varint")
        b = buf[i]
        i += 1
        x |= (b & 0x7F) << sh
        if not b & 0x80:
            return x, i
        sh += 7
        if sh > 63:
            raise MalformedFile("varint too long")


def read_factors(buf: bytes):
    """``(src, ln)`` arrays from either format."""
    src, ln = [], []
    if buf.startswith(MAGIC):
        i = len(MAGIC)
        while i < len(buf):
            tag = buf[i]
            i += 1
            if tag == 0:
                if i >= len(buf):
                    raise MalformedFile("truncated literal")
                src.append(buf[i])
                ln.append(0)
                i += 1
            elif tag == 1:
                s, i = _read_varint(buf, i)
                l, i = _read_varint(buf, i)
                if l == 0:
                    raise MalformedFile("reference of length 0")
                src.append(s)
                ln.append(l)
            else:
                raise MalformedFile(f"unknown tag {tag} at byte {i - 1}")
    else:
        for no, line in enumerate(buf.split(b"\n"), start=1):
            if not line.strip():
                continue
            parts = line.split()
            try:
                if parts[0] == b"L" and len(parts) == 2:
                    v = int(parts[1])
                    if not 0 <= v <= 255:
                        raise ValueError
                    src.append(v)
                    ln.append(0)
                elif parts[0] == b"R" and len(parts) == 3:
                    s, l = int(parts[1]), int(parts[2])
                    if s < 1 or l < 1:
                        raise ValueError
                    src.append(s)
                    ln.append(l)
                else:
                    raise ValueError
            except ValueError:
                raise MalformedFile(f"bad record on line {no}") from None
    return np.array(src, dtype=np.int64), np.array(ln, dtype=np.int64)


def decode_factors(src, ln) -> bytes:
    try:
        out = decode_arrays(src, ln)
    except ValueError as exc:
        raise MalformedFile(str(exc)) from None
    return out.astype(np.uint8).tobytes()


# -- commands ------------------------------------------------------------------


def _read(path) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data: bytes):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def _stats(**kv):
    for k, v in kv.items():
        if isinstance(v, float):
            v = f"{v:.4f}"
        print(f"{k}={v}", file=sys.stderr)


def _config(args) -> RightmostConfig:
    return RightmostConfig(ell=args.ell, r=args.r, block=args.block, mode=args.mode)


def library_parse(data: bytes, rightmost: bool, config: RightmostConfig | None = None):
    if rightmost:
        p = RightmostParser(data, config)
        return p.parse_arrays(), p
    p = LZParser(data)
    return p.parse_arrays(), p


def cmd_parse(args) -> int:
    data = _read(args.input)
    t0 = time.perf_counter()
    (src, ln), p = library_parse(data, args.rightmost, _config(args))
    secs = time.perf_counter() - t0
    blob = encode_binary(src, ln) if args.format == "binary" else encode_text(src, ln)
    _write(args.output, blob)
    z = int(ln.size)
    aux = p.lz.aux_space_report() if args.rightmost else p.aux_space_report()
    _stats(n=len(data), z=z, seconds=secs,
           bits_per_factor=(8 * len(blob) / z if z else 0.0),
           **{f"aux_bits_{k}": v for k, v in aux.items()},
           aux_bits_per_symbol=(sum(aux.values()) / len(data) if data else 0.0))
    if args.rightmost:
        _stats(**{f"route_{k}": v for k, v in p.routes.items()})
    return EXIT_OK


def cmd_decode(args) -> int:
    src, ln = read_factors(_read(args.input))
    _write(args.output, decode_factors(src, ln))
    return EXIT_OK


def _first_divergence(got, want):
    for k, (a, b) in enumerate(zip(got, want)):
        if a != b:
            return k
    return min(len(got), len(want))


def cmd_verify(args) -> int:
    data = _read(args.input)
    if len(data) > args.max_n and not args.force:
        print(f"input has {len(data)} symbols, above the oracle cap {args.max_n}; use --force",
              file=sys.stderr)
        return EXIT_CONFIG
    (src, ln), _ = library_parse(data, args.rightmost, _config(args))
    got = list(zip(src.tolist(), ln.tolist()))
    want = [tuple(f) for f in (oracle_rightmost if args.rightmost else oracle_lz)(data)]
    ok = got == want and decode_factors(src, ln) == data
    if not ok:
        k = _first_divergence(got, want)
        pos = 1 + sum(1 if l == 0 else l for _, l in got[:k])
        g = got[k] if k < len(got) else None
        w = want[k] if k < len(want) else None
        print(f"mismatch at factor {k + 1} (text position {pos}): got {g}, expected {w}", file=sys.stderr)
        return EXIT_MISMATCH
    _stats(n=len(data), z=len(got), verified="yes")
    return EXIT_OK


def cmd_stats(args) -> int:
    data = _read(args.input)
    t0 = time.perf_counter()
    p = LZParser(data)
    src, ln = p.parse_arrays()
    secs = time.perf_counter() - t0
    n = len(data)
    ti = p.index.space_report()
    aux = p.aux_space_report()
    sigma = len(p.alphabet) - 1
    _stats(n=n, sigma=sigma, z=int(ln.size), literals=int((ln == 0).sum()), seconds=secs,
           **{f"index_bits_{k}": v for k, v in ti.items()},
           **{f"aux_bits_{k}": v for k, v in aux.items()},
           bwt_bits_per_symbol=(ti["bwt_levels"] / n if n else 0.0),
           aux_bits_per_symbol=(sum(aux.values()) / n if n else 0.0))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzrange", description="LZ77 parsing in compact space")
    sub = ap.add_subparsers(dest="command", required=True)

    def rightmost_opts(p):
        p.add_argument("--rightmost", action="store_true", help="pick the most recent source of every phrase")
        p.add_argument("--mode", choices=MODES, default="stratified")
        p.add_argument("--ell", type=int, default=None, help="long-phrase threshold")
        p.add_argument("--r", type=int, default=None, help="sample block length for long phrases")
        p.add_argument("--block", type=int, default=None, help="suffix-array block size")

    p = sub.add_parser("parse", help="write the factor file of INPUT")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--format", choices=("text", "binary"), default="text")
    rightmost_opts(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("decode", help="rebuild the bytes from a factor file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="compare the parse with a brute-force oracle")
    p.add_argument("input")
    p.add_argument("--force", action="store_true", help="lift the size cap")
    p.add_argument("--max-n", type=int, default=VERIFY_MAX_N)
    rightmost_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="report index and parser space")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MalformedFile as exc:
        print(f"malformed factor file: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
