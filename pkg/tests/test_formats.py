"""Artifact writer tests: byte determinism, round-trip exactness, overwrite
protection."""

import math

import numpy as np
import pytest

from lozi_pruning import formats


# ------------------------------------------------------------- value text


def test_format_value_floats_round_trip():
    for x in (0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, -0.0, 3.0):
        assert float(formats.format_value(x)) == x


def test_format_value_scalar_kinds():
    assert formats.format_value(None) == ""
    assert formats.format_value("verdict") == "verdict"
    assert formats.format_value(True) == "true"
    assert formats.format_value(False) == "false"
    assert formats.format_value(42) == "42"
    assert formats.format_value(np.int64(7)) == "7"
    assert formats.format_value(math.nan) == "nan"


def test_parse_value_inverts_format():
    assert formats.parse_value("true", bool) is True
    assert formats.parse_value("false", bool) is False
    with pytest.raises(ValueError):
        formats.parse_value("yes", bool)
    assert formats.parse_value("17", int) == 17
    assert formats.parse_value(formats.format_value(1.0 / 3.0), float) == 1.0 / 3.0
    assert formats.parse_value("plain", str) == "plain"


# ------------------------------------------------------------ atomic write


def test_atomic_write_refuses_overwrite(tmp_path):
    target = tmp_path / "out.bin"
    formats.atomic_write_bytes(str(target), b"first")
    with pytest.raises(FileExistsError):
        formats.atomic_write_bytes(str(target), b"second")
    assert target.read_bytes() == b"first"
    formats.atomic_write_bytes(str(target), b"second", force=True)
    assert target.read_bytes() == b"second"


def test_atomic_write_leaves_no_temp_files(tmp_path):
    formats.atomic_write_text(str(tmp_path / "a.txt"), "hello\n")
    leftovers = [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp")]
    assert leftovers == []


# -------------------------------------------------------------------- pgm


def test_pgm_round_trip(tmp_path):
    grid = np.arange(12, dtype=np.uint8).reshape(3, 4)
    path = str(tmp_path / "g.pgm")
    formats.write_pgm(path, grid)
    back = formats.read_pgm(path)
    assert back.shape == (3, 4)
    assert np.array_equal(back, grid)


def test_pgm_header_layout():
    data = formats.pgm_bytes(np.zeros((2, 5), dtype=np.uint8))
    assert data.startswith(b"P5\n5 2\n255\n")
    assert len(data) == len(b"P5\n5 2\n255\n") + 10


def test_pgm_rejects_bad_grids():
    with pytest.raises(ValueError):
        formats.pgm_bytes(np.zeros((2, 2, 2), dtype=np.uint8))
    with pytest.raises(ValueError):
        formats.pgm_bytes(np.array([[300, 0]]))


def test_pgm_bytes_deterministic():
    grid = np.array([[0, 128], [255, 1]], dtype=np.uint8)
    assert formats.pgm_bytes(grid) == formats.pgm_bytes(grid.copy())


# -------------------------------------------------------------------- csv


def test_csv_round_trip_exact(tmp_path):
    rows = [(1.0 / 3.0, -1, "yes"), (2.5e-17, 7, "no")]
    path = str(tmp_path / "t.csv")
    formats.write_csv(path, ("x", "k", "tag"), rows)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "x,k,tag"
    for line, (x, k, tag) in zip(lines[1:], rows):
        fx, fk, ftag = line.split(",")
        assert float(fx) == x and int(fk) == k and ftag == tag


def test_csv_none_becomes_empty():
    data = formats.csv_bytes(("a", "w"), [(1.5, None)])
    assert data == b"a,w\n1.5,\n"


# ------------------------------------------------------------ config file


def test_read_config_parses_and_strips(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# settings\n"
        "a = 1.7\n"
        "word_len=8   # trailing comment\n"
        "\n"
        "out=/tmp/x.pgm\n"
    )
    assert formats.read_config(str(path)) == {
        "a": "1.7",
        "word_len": "8",
        "out": "/tmp/x.pgm",
    }


def test_read_config_rejects_bad_lines(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("just words\n")
    with pytest.raises(ValueError):
        formats.read_config(str(path))


def test_sidecar_preserves_order_and_values():
    text = formats.sidecar_text({"a": 1.7, "flag": True, "n": 12})
    assert text == "a=1.7\nflag=true\nn=12\n"
