"""Set and profile file formats.

Sets are stored either as text (one decimal integer per line, strictly
increasing) or in the EFSET1 binary layout:

    magic "EFSET1" | u64 little-endian n_max | ceil((n_max+1)/8) payload bytes

where bit k of the payload stream (LSB-first within each byte) is the
membership indicator of k.  Profiles export as CSV with header ``n,R,S``;
error series export with header ``n,e,E,norm_pt,norm_cum`` where undefined
normalized entries are left empty.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .exceptions import FormatError
from .intset import IntegerSet

MAGIC = b"EFSET1"


def write_set_binary(A: IntegerSet, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", A.n_max))
        fh.write(A.bits.tobytes())


def read_set_binary(path) -> IntegerSet:
    data = Path(path).read_bytes()
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: bad magic")
    if len(data) < len(MAGIC) + 8:
        raise FormatError(f"{path}: truncated header")
    (n_max,) = struct.unpack_from("<Q", data, len(MAGIC))
    if n_max > (1 << 62):
        raise FormatError(f"{path}: implausible n_max {n_max}")
    payload = data[len(MAGIC) + 8 :]
    expected = (n_max + 8) // 8
    if len(payload) != expected:
        raise FormatError(f"{path}: payload is {len(payload)} bytes, expected {expected}")
    bits = np.frombuffer(payload, dtype=np.uint8).copy()
    tail = (n_max + 1) % 8
    if tail and (bits[-1] >> tail):
        raise FormatError(f"{path}: payload sets bits beyond declared n_max")
    return IntegerSet(int(n_max), bits)


def write_set_text(A: IntegerSet, path) -> None:
    with open(path, "w") as fh:
        for e in A.elements():
            fh.write(f"{e}\n")


def read_set_text(path, n_max: int | None = None) -> IntegerSet:
    elems: list[int] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                value = int(line)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not an integer: {line!r}") from None
            if value < 0:
                raise FormatError(f"{path}:{lineno}: negative element {value}")
            if elems and value <= elems[-1]:
                raise FormatError(f"{path}:{lineno}: elements must be strictly increasing")
            if n_max is not None and value > n_max:
                raise FormatError(f"{path}:{lineno}: element {value} > declared n_max {n_max}")
            elems.append(value)
    if n_max is None:
        if not elems:
            raise FormatError(f"{path}: empty set needs an explicit n_max")
        n_max = elems[-1]
    return IntegerSet.from_elements(elems, n_max)


def read_set(path, fmt: str = "auto", n_max: int | None = None) -> IntegerSet:
    if fmt == "auto":
        with open(path, "rb") as fh:
            fmt = "binary" if fh.read(len(MAGIC)) == MAGIC else "text"
    if fmt == "binary":
        return read_set_binary(path)
    if fmt == "text":
        return read_set_text(path, n_max)
    raise FormatError(f"unknown set format {fmt!r}")


def write_set(A: IntegerSet, path, fmt: str = "binary") -> None:
    if fmt == "binary":
        write_set_binary(A, path)
    elif fmt == "text":
        write_set_text(A, path)
    else:
        raise FormatError(f"unknown set format {fmt!r}")


def _fmt_float(x: float) -> str:
    return "" if np.isnan(x) else repr(float(x))


def write_profile_csv(profile, cumulative, path) -> None:
    """Header ``n,R,S``."""
    with open(path, "w") as fh:
        fh.write("n,R,S\n")
        for n, (r, s) in enumerate(zip(profile.R.tolist(), cumulative.S.tolist())):
            fh.write(f"{n},{r},{s}\n")


def write_error_csv(series, path) -> None:
    """Header ``n,e,E,norm_pt,norm_cum``; undefined normalized values are empty."""
    with open(path, "w") as fh:
        fh.write("n,e,E,norm_pt,norm_cum\n")
        for n in range(series.n_max + 1):
            fh.write(
                f"{n},{_fmt_float(series.e[n])},{_fmt_float(series.E[n])},"
                f"{_fmt_float(series.norm_pt[n])},{_fmt_float(series.norm_cum[n])}\n"
            )
