"""H1 (pad, cut into n^3-bit blocks, encode weighted marginals), the inner
digest H2 and their composition H3."""

from __future__ import annotations

import enum
import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from bitarray import bitarray, frozenbitarray
from bitarray.util import int2ba, zeros

from .encoding import BitString, concat, from_bytes, g2, to_bytes
from .errors import InvalidParameters, MessageTooLong, ShapeMismatchError
from .params import ParameterPair
from .tensor import elem_product3

LENGTH_FIELD_BITS = 64


@dataclass(frozen=True)
class Message:
    """A message of ``bit_length`` bits stored MSB-first in ``data``."""

    data: bytes
    bit_length: int | None = None

    def __post_init__(self):
        if self.bit_length is None:
            object.__setattr__(self, "bit_length", 8 * len(self.data))
        if not 0 <= self.bit_length <= 8 * len(self.data):
            raise ValueError("bit_length out of range for the given bytes")
        if 8 * len(self.data) - self.bit_length > 7:
            raise ValueError("data carries whole unused bytes beyond bit_length")
        spare = 8 * len(self.data) - self.bit_length
        if spare and self.data[-1] & ((1 << spare) - 1):
            raise ValueError("unused trailing bits of the last byte must be zero")

    @classmethod
    def from_bits(cls, x: BitString) -> "Message":
        return cls(to_bytes(x), len(x))

    def bits(self) -> BitString:
        return from_bytes(self.data, self.bit_length)


def _as_message(m) -> Message:
    if isinstance(m, Message):
        return m
    if isinstance(m, (bytes, bytearray, memoryview)):
        return Message(bytes(m))
    if isinstance(m, bitarray):
        return Message.from_bits(frozenbitarray(m))
    raise TypeError(f"cannot hash object of type {type(m).__name__}")


def padded_length(bit_length: int, n: int) -> int:
    block = n**3
    need = bit_length + 1 + LENGTH_FIELD_BITS
    return -(-need // block) * block


def pad(m, n: int) -> BitString:
    """Append a 1 bit, zero fill, then the 64-bit big-endian bit length, so the
    total is the smallest multiple of n^3 that fits."""
    if n < 2:
        raise ValueError("block side n must be at least 2")
    m = _as_message(m)
    L = m.bit_length
    if L >= 1 << LENGTH_FIELD_BITS:
        raise MessageTooLong(f"message of {L} bits exceeds the 64-bit length field")
    total = padded_length(L, n)
    out = bitarray(m.bits(), endian="big")
    out.append(1)
    out.extend(zeros(total - L - 1 - LENGTH_FIELD_BITS, endian="big"))
    out.extend(int2ba(L, LENGTH_FIELD_BITS, endian="big"))
    return frozenbitarray(out)


def vect_mat(block: BitString, n: int) -> np.ndarray:
    """Fill an n x n x n 0/1 tensor from consecutive bits, k innermost."""
    if len(block) != n**3:
        raise ShapeMismatchError(f"block has {len(block)} bits, expected {n**3}")
    arr = np.frombuffer(block.unpack(), dtype=np.uint8).astype(np.int64).reshape(n, n, n)
    arr.setflags(write=False)
    return arr


def blocks(padded: BitString, n: int) -> list[BitString]:
    size = n**3
    if len(padded) % size:
        raise ShapeMismatchError("padded message is not a whole number of blocks")
    return [padded[p : p + size] for p in range(0, len(padded), size)]


def encode_block(block: BitString, params: ParameterPair) -> BitString:
    """g2(A .* V) followed by g2(A .* W) for the block's tensor A."""
    A = vect_mat(block, params.n)
    return g2(elem_product3(A, params.V)) + g2(elem_product3(A, params.W))


def default_workers() -> int:
    env = os.environ.get("CT_HASH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _require_valid(params: ParameterPair, allow_unvalidated: bool) -> None:
    if not params.validated and not allow_unvalidated:
        raise InvalidParameters("parameter pair has not been validated")


def h1(m, params: ParameterPair, *, workers: int | None = None, allow_unvalidated: bool = False) -> BitString:
    """Variable-length intermediate message: per-block marginal encodings."""
    _require_valid(params, allow_unvalidated)
    parts = blocks(pad(m, params.n), params.n)
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            encoded = list(pool.map(lambda b: encode_block(b, params), parts))
    else:
        encoded = [encode_block(b, params) for b in parts]
    return concat(encoded)


class InnerDigest(str, enum.Enum):
    MD5 = "md5"
    SHA256 = "sha256"

    @property
    def size(self) -> int:
        return hashlib.new(self.value).digest_size


def h2(data: bytes, inner: InnerDigest | str = InnerDigest.MD5) -> bytes:
    return hashlib.new(InnerDigest(inner).value, bytes(data)).digest()


def h3(m, params: ParameterPair, inner: InnerDigest | str = InnerDigest.MD5, **kwargs) -> bytes:
    """Inner digest of the byte-packed H1 output."""
    return h2(to_bytes(h1(m, params, **kwargs)), inner)
