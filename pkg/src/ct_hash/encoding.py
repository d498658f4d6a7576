"""Bit-level encodings of marginal sums.

Bit strings are ``bitarray.frozenbitarray`` values: exact length, hashable,
MSB-first when packed to bytes.
"""

from __future__ import annotations

import numpy as np
from bitarray import bitarray, frozenbitarray
from bitarray.util import ba2int

from .errors import FormatError, ShapeMismatchError
from .tensor import MarginalTriple, marginals2, marginals3

BitString = frozenbitarray

EMPTY = frozenbitarray()


def bits(text: str) -> BitString:
    """Parse an ASCII 0/1 string, ignoring whitespace."""
    cleaned = "".join(text.split())
    if any(c not in "01" for c in cleaned):
        raise FormatError("bit strings may only contain '0' and '1'")
    return frozenbitarray(cleaned)


def concat(parts) -> BitString:
    buf = bitarray()
    for p in parts:
        buf.extend(p)
    return frozenbitarray(buf)


def binary(a: int, p: int) -> BitString:
    """``a`` written in base 2 on exactly ``p`` positions, most significant first."""
    if p < 0 or a < 0 or a > (1 << p) - 1:
        raise ValueError(f"{a} does not fit in {p} bits")
    if p == 0:
        return EMPTY
    return frozenbitarray(format(a, f"0{p}b"))


def f0(n: int) -> int:
    """ceil(log2(n + 1)): bits needed for any integer in [0, n]."""
    if n < 0:
        raise ValueError("f0 is defined on naturals")
    return int(n).bit_length()


def f1(t: np.ndarray) -> int:
    """Largest row sum R(i, k)."""
    return int(marginals3(t).R.max(initial=0))


def f2(t: np.ndarray) -> int:
    """Largest column sum C(j, k)."""
    return int(marginals3(t).C.max(initial=0))


def f3(t: np.ndarray) -> int:
    """Largest file sum F(i, j)."""
    return int(marginals3(t).F.max(initial=0))


def f4(t: np.ndarray) -> int:
    """Largest sum of n entries lying on one row, column or file."""
    return _max_line_sum(marginals3(t))


def _max_line_sum(m: MarginalTriple) -> int:
    return max(int(x.max(initial=0)) for x in (m.R, m.C, m.F))


def g1(a: np.ndarray) -> tuple[int, ...]:
    """Row sums then column sums of a matrix."""
    R, S = marginals2(a)
    return (*R, *S)


def encode_marginals(m: MarginalTriple, width: int) -> BitString:
    """Pack every marginal sum into ``width`` bits, R then C then F."""
    values = m.entries()
    limit = 1 << width
    acc = 0
    for v in values:
        if v >= limit:
            raise ValueError(f"marginal {v} does not fit in {width} bits")
        acc = (acc << width) | v
    total = width * len(values)
    if total == 0:
        return EMPTY
    return frozenbitarray(format(acc, f"0{total}b"))


def g2_width(t: np.ndarray) -> int:
    return max(1, f0(f4(t)))


def g2(t: np.ndarray) -> BitString:
    """Marginal encoding with adaptive field width max(1, f0(f4(t)))."""
    m = marginals3(t)
    return encode_marginals(m, max(1, f0(_max_line_sum(m))))


def g2_fixed(t: np.ndarray, width: int) -> BitString:
    """Marginal encoding with a caller-chosen field width."""
    return encode_marginals(marginals3(t), width)


def decode_marginals(x: BitString, n: int, width: int) -> MarginalTriple:
    """Read back the 3n^2 fields of an encoding produced with ``width``."""
    if width < 1 or len(x) != 3 * n * n * width:
        raise ShapeMismatchError(
            f"bit string of length {len(x)} is not 3*{n}^2 fields of {width} bits"
        )
    fields = [ba2int(x[p : p + width]) for p in range(0, len(x), width)]
    return MarginalTriple.from_entries(fields, n)


def to_bytes(x: BitString) -> bytes:
    """MSB-first packing, final partial byte zero-padded."""
    return x.tobytes()


def from_bytes(data: bytes, bit_length: int | None = None) -> BitString:
    buf = bitarray(endian="big")
    buf.frombytes(data)
    full = frozenbitarray(buf)
    if bit_length is None:
        return full
    if bit_length > len(full):
        raise ValueError("bit_length exceeds the available data")
    return full[:bit_length]

