"""Integer matrices and cubic tables: element products, marginal sums and
Ryser interchanges on 0/1 matrices.

Matrices and tensors are plain numpy ``int64`` arrays marked read-only.
Indices are 0-based here; text formats and the CLI print 1-based indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    FormatError,
    InterchangeNotApplicable,
    SearchLimitExceeded,
    ShapeMismatchError,
)

INT64_MAX = np.iinfo(np.int64).max
DEFAULT_STATE_LIMIT = 10**6

B0 = ((1, 0), (0, 1))
B1 = ((0, 1), (1, 0))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _as_natural_array(values, ndim: int, what: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=object)
    except ValueError as exc:  # ragged nesting
        raise ShapeMismatchError(f"{what}: ragged input") from exc
    if arr.ndim != ndim:
        raise ShapeMismatchError(f"{what} must have {ndim} dimensions, got {arr.ndim}")
    flat = [int(v) for v in arr.ravel()]
    if any(v < 0 for v in flat):
        raise ValueError(f"{what} entries must be natural numbers")
    if any(v > INT64_MAX for v in flat):
        raise OverflowError(f"{what} entry exceeds the 64-bit range")
    return np.array(flat, dtype=np.int64).reshape(arr.shape)


def matrix(values) -> np.ndarray:
    """Build an immutable m x n natural matrix from nested sequences."""
    return _freeze(_as_natural_array(values, 2, "matrix"))


def tensor(values) -> np.ndarray:
    """Build an immutable n x n x n natural tensor from nested sequences."""
    arr = _as_natural_array(values, 3, "tensor")
    n = arr.shape[0]
    if arr.shape != (n, n, n):
        raise ShapeMismatchError(f"tensor must be cubic, got shape {arr.shape}")
    return _freeze(arr)


def zeros(n: int) -> np.ndarray:
    return _freeze(np.zeros((n, n, n), dtype=np.int64))


def ones(n: int) -> np.ndarray:
    return _freeze(np.ones((n, n, n), dtype=np.int64))


def is_binary(a: np.ndarray) -> bool:
    return bool(np.all((a == 0) | (a == 1)))


def _checked_sum_bound(a: np.ndarray, count: int) -> None:
    # every marginal is a sum of `count` entries
    if a.size and int(a.max()) > INT64_MAX // max(count, 1):
        raise OverflowError("marginal sum would exceed the 64-bit range")


def _elem_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size:
        amax, bmax = int(a.max()), int(b.max())
        if amax and bmax > INT64_MAX // amax:
            raise OverflowError("element product would exceed the 64-bit range")
    return _freeze(np.multiply(a, b))


def elem_product2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise product of two equally shaped matrices."""
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeMismatchError("elem_product2 expects two matrices")
    return _elem_product(a, b)


def elem_product3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise product of two tensors of the same side."""
    if a.ndim != 3 or b.ndim != 3:
        raise ShapeMismatchError("elem_product3 expects two cubic tensors")
    return _elem_product(a, b)


class RowColPair(NamedTuple):
    R: tuple[int, ...]
    S: tuple[int, ...]


def marginals2(a: np.ndarray) -> RowColPair:
    _checked_sum_bound(a, max(a.shape))
    return RowColPair(
        tuple(int(x) for x in a.sum(axis=1)),
        tuple(int(x) for x in a.sum(axis=0)),
    )


@dataclass(frozen=True, eq=False)
class MarginalTriple:
    """Row sums R[i, k], column sums C[j, k] and file sums F[i, j]."""

    R: np.ndarray
    C: np.ndarray
    F: np.ndarray

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def total(self) -> int:
        return int(self.R.sum())

    def entries(self) -> list[int]:
        """All 3n^2 sums in encoding order: R, then C, then F, first index outer."""
        return [int(x) for m in (self.R, self.C, self.F) for x in m.ravel()]

    def key(self) -> tuple[int, ...]:
        return (self.n, *self.entries())

    def __eq__(self, other):
        if not isinstance(other, MarginalTriple):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @classmethod
    def from_entries(cls, values: Iterable[int], n: int) -> "MarginalTriple":
        vals = np.array(list(values), dtype=np.int64)
        if vals.size != 3 * n * n:
            raise ShapeMismatchError(f"expected {3 * n * n} sums, got {vals.size}")
        R, C, F = (_freeze(m.reshape(n, n).copy()) for m in np.split(vals, 3))
        return cls(R, C, F)


def marginals3(t: np.ndarray) -> MarginalTriple:
    """R(i,k) sums over j, C(j,k) over i, F(i,j) over k."""
    if t.ndim != 3:
        raise ShapeMismatchError("marginals3 expects a cubic tensor")
    _checked_sum_bound(t, t.shape[0])
    return MarginalTriple(
        _freeze(t.sum(axis=1)),
        _freeze(t.sum(axis=0)),
        _freeze(t.sum(axis=2)),
    )


def _submatrix(a: np.ndarray, k: int, l: int, u: int, v: int) -> tuple:
    return ((int(a[k, u]), int(a[k, v])), (int(a[l, u]), int(a[l, v])))


def interchange(a: np.ndarray, k: int, l: int, u: int, v: int) -> np.ndarray:
    """Apply the (k, l; u, v)-interchange: swap B0 <-> B1 in rows k, l and
    columns u, v. Raises InterchangeNotApplicable otherwise."""
    m, n = a.shape
    if not (0 <= k < m and 0 <= l < m and 0 <= u < n and 0 <= v < n) or k == l or u == v:
        raise InterchangeNotApplicable(f"bad interchange indices ({k}, {l}; {u}, {v})")
    sub = _submatrix(a, k, l, u, v)
    if sub not in (B0, B1):
        raise InterchangeNotApplicable(f"submatrix {sub} is neither B0 nor B1")
    out = a.copy()
    out[k, u], out[k, v], out[l, u], out[l, v] = sub[1][0], sub[1][1], sub[0][0], sub[0][1]
    return _freeze(out)


def interchange_neighbors(a: np.ndarray):
    """Yield every matrix one interchange away from ``a``."""
    m, n = a.shape
    for k in range(m):
        for l in range(k + 1, m):
            for u in range(n):
                for v in range(u + 1, n):
                    if _submatrix(a, k, l, u, v) in (B0, B1):
                        yield interchange(a, k, l, u, v)


def interchange_reachable(a: np.ndarray, b: np.ndarray, limit: int = DEFAULT_STATE_LIMIT) -> bool:
    """Breadth-first search over the interchange graph starting at ``a``."""
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    if not (is_binary(a) and is_binary(b)):
        raise ValueError("interchange_reachable expects 0/1 matrices")
    if marginals2(a) != marginals2(b):
        return False
    target = b.tobytes()
    seen = {a.tobytes()}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        if cur.tobytes() == target:
            return True
        for nxt in interchange_neighbors(cur):
            key = nxt.tobytes()
            if key not in seen:
                if len(seen) >= limit:
                    raise SearchLimitExceeded(f"interchange search exceeded {limit} states")
                seen.add(key)
                queue.append(nxt)
    return False


# text formats ---------------------------------------------------------------

def format_tensor(t: np.ndarray) -> str:
    n = t.shape[0]
    lines = [str(n)]
    for i in range(n):
        for j in range(n):
            lines.append(" ".join(str(int(x)) for x in t[i, j]))
    return "\n".join(lines) + "\n"


def parse_tensor_tokens(tokens: list[str], pos: int = 0) -> tuple[np.ndarray, int]:
    """Parse one tensor starting at ``tokens[pos]``; return it and the next position."""
    try:
        n = int(tokens[pos])
        if n < 1:
            raise FormatError(f"tensor side must be positive, got {n}")
        count = n**3
        body = tokens[pos + 1 : pos + 1 + count]
        if len(body) != count:
            raise FormatError(f"expected {count} tensor entries, got {len(body)}")
        vals = [int(x) for x in body]
    except (IndexError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed tensor: {exc}") from exc
    return tensor(np.array(vals, dtype=object).reshape(n, n, n)), pos + 1 + count


def parse_tensor(text: str) -> np.ndarray:
    tokens = text.split()
    t, end = parse_tensor_tokens(tokens)
    if end != len(tokens):
        raise FormatError("trailing data after tensor")
    return t


def format_matrix(a: np.ndarray) -> str:
    m, n = a.shape
    rows = [" ".join(str(int(x)) for x in row) for row in a]
    return "\n".join([f"{m} {n}", *rows]) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    tokens = text.split()
    try:
        m, n = int(tokens[0]), int(tokens[1])
        vals = [int(x) for x in tokens[2:]]
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed matrix: {exc}") from exc
    if len(vals) != m * n:
        raise FormatError(f"expected {m * n} matrix entries, got {len(vals)}")
    return matrix(np.array(vals, dtype=object).reshape(m, n))
