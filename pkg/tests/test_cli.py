import numpy as np
import pytest

from helpers import CORPUS_FILES, CORPUS
from lzrange import cli


def run(*args):
    return cli.main([str(a) for a in args])


@pytest.fixture
def ar(tmp_path):
    p = tmp_path / "ar.txt"
    p.write_bytes(b"araarraaa")
    return p


def test_parse_text_records(ar, tmp_path, capsys):
    out = tmp_path / "f.txt"
    assert run("parse", ar, out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6
    assert lines[:2] == ["L 97", "L 114"]
    err = capsys.readouterr().err
    assert "n=9" in err and "z=6" in err
    assert run("parse", ar, out, "--rightmost") == 0
    assert out.read_text().splitlines()[-1] == "R 8 1"
    assert run("parse", ar, out, "--rightmost", "--mode", "basic") == 0
    assert out.read_text().splitlines()[-1] == "R 8 1"


def test_empty_files(tmp_path):
    src = tmp_path / "e"
    src.write_bytes(b"")
    f = tmp_path / "e.lz"
    d = tmp_path / "e.out"
    assert run("parse", src, f) == 0
    assert f.read_bytes() == b""
    assert run("decode", f, d) == 0
    assert d.read_bytes() == b""


@pytest.mark.parametrize("name", CORPUS_FILES)
@pytest.mark.parametrize("fmt", ["text", "binary"])
def test_corpus_roundtrip(tmp_path, name, fmt):
    src = CORPUS / name
    f = tmp_path / "f"
    d = tmp_path / "d"
    assert run("parse", src, f, "--format", fmt) == 0
    assert run("decode", f, d) == 0
    assert d.read_bytes() == src.read_bytes()


def test_formats_equivalent(ar, tmp_path):
    t, b = tmp_path / "t", tmp_path / "b"
    run("parse", ar, t, "--rightmost")
    run("parse", ar, b, "--rightmost", "--format", "binary")
    assert b.read_bytes().startswith(b"LZC1")
    ts = cli.read_factors(t.read_bytes())
    bs = cli.read_factors(b.read_bytes())
    assert all(np.array_equal(x, y) for x, y in zip(ts, bs))
    assert cli.encode_text(*bs) == t.read_bytes()


def test_malformed(ar, tmp_path):
    b = tmp_path / "b"
    run("parse", ar, b, "--format", "binary")
    cut = tmp_path / "cut"
    cut.write_bytes(b.read_bytes()[:-1])
    assert run("decode", cut, tmp_path / "o") == 4
    for bad in (b"X 1\n", b"R 5 1\n", b"L 300\n", b"L 97\nR 2 1\n", b"LZC1\x07"):
        p = tmp_path / "bad"
        p.write_bytes(bad)
        assert run("decode", p, tmp_path / "o") == 4


def test_io_and_config_errors(ar, tmp_path):
    assert run("parse", tmp_path / "missing", tmp_path / "o") == 2
    assert run("decode", tmp_path / "missing", tmp_path / "o") == 2
    assert run("parse", ar, tmp_path / "o", "--rightmost", "--r", "9", "--ell", "4") == 3
    assert run("parse", ar, tmp_path / "o", "--rightmost", "--block", "1") == 3


def test_verify(ar, tmp_path, monkeypatch, capsys):
    assert run("verify", ar) == 0
    assert run("verify", ar, "--rightmost") == 0
    big = tmp_path / "big"
    big.write_bytes(b"ab" * 60000)
    assert run("verify", big) == 3
    assert run("verify", big, "--max-n", "10") == 3
    small = tmp_path / "small"
    small.write_bytes(b"ab" * 100)
    assert run("verify", small, "--force", "--max-n", "10") == 0

    real = cli.library_parse

    def faulty(data, rightmost, config=None):
        (src, ln), p = real(data, rightmost, config)
        src = src.copy()
        k = int(np.flatnonzero(ln > 0)[-1])
        src[k] -= 1
        return (src, ln), p

    monkeypatch.setattr(cli, "library_parse", faulty)
    capsys.readouterr()
    assert run("verify", ar, "--rightmost") == 1
    assert "mismatch at factor 6" in capsys.readouterr().err


def test_stats(ar, capsys):
    assert run("stats", ar) == 0
    err = capsys.readouterr().err
    kv = dict(line.split("=", 1) for line in err.strip().splitlines())
    assert kv["n"] == "9" and kv["z"] == "6" and kv["sigma"] == "2"
    assert "aux_bits_A" in kv and "bwt_bits_per_symbol" in kv


def test_console_entry_point_is_declared():
    from importlib.metadata import entry_points

    eps = [e for e in entry_points(group="console_scripts") if e.name == "lzrange"]
    assert eps and eps[0].value == "lzrange.cli:main"
