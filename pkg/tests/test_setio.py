import struct
import time

import numpy as np
import pytest

from addrep import (
    FormatError,
    IntegerSet,
    constant,
    cumulative_rep,
    error_series,
    read_set,
    read_set_binary,
    read_set_text,
    repfn_naive,
    write_error_csv,
    write_profile_csv,
    write_set_binary,
    write_set_text,
)


@pytest.fixture
def sample():
    return IntegerSet.from_elements([0, 2, 5], n_max=12)


def test_binary_roundtrip(sample, tmp_path):
    path = tmp_path / "a.efset"
    write_set_binary(sample, path)
    back = read_set_binary(path)
    assert back == sample
    assert back.n_max == 12  # trailing empty range survives


def test_text_roundtrip(sample, tmp_path):
    path = tmp_path / "a.txt"
    write_set_text(sample, path)
    assert read_set_text(path, n_max=12) == sample
    # without a declared n_max the range shrinks to the largest element
    assert read_set_text(path).n_max == 5


def test_auto_format_detection(sample, tmp_path):
    b = tmp_path / "a.efset"
    t = tmp_path / "a.txt"
    write_set_binary(sample, b)
    write_set_text(sample, t)
    assert read_set(b) == sample
    assert read_set(t).elements().tolist() == sample.elements().tolist()


def test_random_roundtrips(tmp_path):
    rng = np.random.default_rng(3)
    for _ in range(10):
        n_max = int(rng.integers(0, 300))
        mask = (rng.random(n_max + 1) < 0.3).astype(np.uint8)
        A = IntegerSet.from_bool(mask)
        write_set_binary(A, tmp_path / "r.efset")
        assert read_set_binary(tmp_path / "r.efset") == A


def test_text_rejections(tmp_path):
    cases = {
        "negative.txt": "-3\n",
        "nonincreasing.txt": "1\n1\n",
        "decreasing.txt": "5\n2\n",
        "junk.txt": "1\ntwo\n",
    }
    for name, content in cases.items():
        path = tmp_path / name
        path.write_text(content)
        with pytest.raises(FormatError):
            read_set_text(path)
    over = tmp_path / "over.txt"
    over.write_text("1\n9\n")
    with pytest.raises(FormatError):
        read_set_text(over, n_max=8)


def test_binary_rejections(tmp_path, sample):
    good = tmp_path / "good.efset"
    write_set_binary(sample, good)
    raw = good.read_bytes()

    bad_magic = tmp_path / "m.efset"
    bad_magic.write_bytes(b"XXSET1" + raw[6:])
    with pytest.raises(FormatError):
        read_set_binary(bad_magic)

    truncated = tmp_path / "t.efset"
    truncated.write_bytes(raw[:-1])
    with pytest.raises(FormatError):
        read_set_binary(truncated)

    padded = tmp_path / "p.efset"
    padded.write_bytes(raw + b"\x00")
    with pytest.raises(FormatError):
        read_set_binary(padded)

    # payload bit above the declared n_max
    stray = tmp_path / "s.efset"
    header = b"EFSET1" + struct.pack("<Q", 3)
    stray.write_bytes(header + bytes([0b0010_0001]))
    with pytest.raises(FormatError):
        read_set_binary(stray)


def test_profile_csv_golden(tmp_path):
    A = IntegerSet.from_elements([0, 1], n_max=2)
    profile = repfn_naive(A)
    path = tmp_path / "p.csv"
    write_profile_csv(profile, cumulative_rep(profile), path)
    assert path.read_text() == "n,R,S\n0,1,1\n1,2,3\n2,1,4\n"


def test_error_csv_blank_for_undefined(tmp_path):
    A = IntegerSet.from_elements([0, 1], n_max=3)
    series = error_series(repfn_naive(A), constant(0.25))
    path = tmp_path / "e.csv"
    write_error_csv(series, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,e,E,norm_pt,norm_cum"
    # normalized columns are empty below n = 2
    assert lines[1].split(",")[3] == "" and lines[1].split(",")[4] == ""
    assert lines[2].split(",")[3] == "" and lines[2].split(",")[4] == ""
    assert lines[3].split(",")[3] != "" and lines[3].split(",")[4] != ""


def test_large_binary_roundtrip_under_one_second(tmp_path):
    rng = np.random.default_rng(9)
    A = IntegerSet.from_bool((rng.random(10**6) < 0.9).astype(np.uint8))
    path = tmp_path / "big.efset"
    start = time.perf_counter()
    write_set_binary(A, path)
    back = read_set_binary(path)
    elapsed = time.perf_counter() - start
    assert back == A
    assert elapsed < 1.0
