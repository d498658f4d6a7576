"""Machinery that lifts a 3DCT instance of side n to an instance of side 2n
with two distinct 0/1 solutions, plus an exhaustive 3DCT solver standing in
for the hypothetical solver the lift assumes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .encoding import BitString, concat, decode_marginals, f0, g2_fixed
from .errors import NoSolution, SearchLimitExceeded, ShapeMismatchError
from .tensor import MarginalTriple, is_binary

DEFAULT_SOLVER_CAP = 3
DEFAULT_DEMO_CAP = 2


@dataclass(frozen=True)
class DuplicLayout:
    n: int

    @property
    def width(self) -> int:
        return f0(self.n)

    @property
    def p(self) -> int:
        return 3 * self.n * self.n * self.width


def t_offset(i: int, n: int) -> int:
    """End (exclusive, 0-based) of the i-th group of n fields of f0(n) bits."""
    if not 0 <= i <= 3 * n:
        raise ValueError(f"group index {i} outside [0, {3 * n}]")
    return i * n * f0(n)


def strcopy(x: BitString, i: int, n: int) -> BitString:
    """Group i (1-based): bits t(i-1)+1 .. t(i)."""
    if not 1 <= i <= 3 * n:
        raise ValueError(f"group index {i} outside [1, {3 * n}]")
    end = t_offset(i, n)
    if len(x) < end:
        raise ShapeMismatchError(f"bit string of length {len(x)} has no group {i}")
    return x[t_offset(i - 1, n) : end]


def dcopy(x: BitString, i: int, n: int) -> BitString:
    s = strcopy(x, i, n)
    return s + s


def duplic(x: BitString, n: int) -> BitString:
    """Rewrite an encoding of a side-n tensor as the encoding of its doubled
    side-2n counterpart: each marginal row is repeated, and each of the three
    marginal blocks is emitted twice."""
    layout = DuplicLayout(n)
    if len(x) != layout.p:
        raise ShapeMismatchError(f"duplic expects {layout.p} bits for n={n}, got {len(x)}")
    parts = []
    for seg in range(3):
        line = [dcopy(x, seg * n + g, n) for g in range(1, n + 1)]
        parts.extend(line)
        parts.extend(line)
    return concat(parts)


# block layouts (I, J, K) in {0, 1}^3: which octants of the doubled tensor hold A
_C_BLOCKS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))
_D_BLOCKS = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))


def _place(a: np.ndarray, octants) -> np.ndarray:
    if a.ndim != 3 or a.shape != (a.shape[0],) * 3:
        raise ShapeMismatchError("expected a cubic tensor")
    if not is_binary(a):
        raise ValueError("build_c/build_d expect a 0/1 tensor")
    n = a.shape[0]
    out = np.zeros((2 * n,) * 3, dtype=np.int64)
    for I, J, K in octants:
        out[I * n : (I + 1) * n, J * n : (J + 1) * n, K * n : (K + 1) * n] = a
    out.setflags(write=False)
    return out


def build_c(a: np.ndarray) -> np.ndarray:
    return _place(a, _C_BLOCKS)


def build_d(a: np.ndarray) -> np.ndarray:
    return _place(a, _D_BLOCKS)


def recover(c: np.ndarray, binary: bool = True) -> np.ndarray:
    """A(i,j,k) = C(i,j,k) + C(i,j+n,k) over the first n indices."""
    side = c.shape[0]
    if c.ndim != 3 or c.shape != (side,) * 3 or side % 2:
        raise ShapeMismatchError(f"recover expects a cubic tensor of even side, got {c.shape}")
    n = side // 2
    a = c[:n, :n, :n] + c[:n, n:, :n]
    if binary and not is_binary(a):
        raise ValueError("recovered tensor has entries above 1")
    a.setflags(write=False)
    return a


# exhaustive 3DCT ------------------------------------------------------------

def _coerce_marginals(R, C=None, F=None) -> MarginalTriple:
    if isinstance(R, MarginalTriple):
        return R
    R, C, F = (np.asarray(m, dtype=np.int64) for m in (R, C, F))
    n = R.shape[0]
    for m in (R, C, F):
        if m.shape != (n, n):
            raise ShapeMismatchError("R, C and F must all be n x n")
    if min(int(R.min()), int(C.min()), int(F.min())) < 0:
        raise ValueError("marginal sums must be natural numbers")
    return MarginalTriple(R, C, F)


def iter_3dct(
    R,
    C=None,
    F=None,
    *,
    binary: bool = False,
    weights: np.ndarray | None = None,
    cap: int = DEFAULT_SOLVER_CAP,
) -> Iterator[np.ndarray]:
    """Enumerate every table with the given row, column and file sums, in
    increasing lexicographic order of the (i, j, k) entry sequence.

    ``binary`` restricts entries to {0, 1}; ``weights`` restricts entry
    (i, j, k) to {0, weights[i, j, k]} (the table is then A .* weights for a
    0/1 tensor A). Otherwise entries range over the naturals.
    """
    m = _coerce_marginals(R, C, F)
    n = m.n
    if n > cap:
        raise SearchLimitExceeded(f"3DCT enumeration capped at n={cap}, got n={n}")
    tot = m.total()
    if int(m.C.sum()) != tot or int(m.F.sum()) != tot:
        return

    remR = [[int(x) for x in row] for row in m.R]  # [i][k]
    remC = [[int(x) for x in row] for row in m.C]  # [j][k]
    remF = [[int(x) for x in row] for row in m.F]  # [i][j]

    if weights is not None:
        w = np.asarray(weights, dtype=np.int64)
        if w.shape != (n, n, n) or int(w.min()) < 1:
            raise ValueError("weights must be a strictly positive n x n x n tensor")
        choices = [[[(0, int(w[i, j, k])) for k in range(n)] for j in range(n)] for i in range(n)]
    elif binary:
        choices = [[[(0, 1)] * n for _ in range(n)] for _ in range(n)]
    else:
        choices = [
            [
                [tuple(range(min(remR[i][k], remC[j][k], remF[i][j]) + 1)) for k in range(n)]
                for j in range(n)
            ]
            for i in range(n)
        ]
    top = [[[max(choices[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)]
    # capacity still available on each line after the current cell
    sufR = [[[sum(top[i][jj][k] for jj in range(j + 1, n)) for k in range(n)] for j in range(n)] for i in range(n)]
    sufC = [[[sum(top[ii][j][k] for ii in range(i + 1, n)) for k in range(n)] for j in range(n)] for i in range(n)]
    sufF = [[[sum(top[i][j][kk] for kk in range(k + 1, n)) for k in range(n)] for j in range(n)] for i in range(n)]

    cells = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    table = [0] * len(cells)

    def walk(pos: int):
        if pos == len(cells):
            out = np.array(table, dtype=np.int64).reshape(n, n, n)
            out.setflags(write=False)
            yield out
            return
        i, j, k = cells[pos]
        r, c, f = remR[i][k], remC[j][k], remF[i][j]
        sr, sc, sf = sufR[i][j][k], sufC[i][j][k], sufF[i][j][k]
        for v in choices[i][j][k]:
            if v > r or v > c or v > f:
                break
            if r - v > sr or c - v > sc or f - v > sf:
                continue
            remR[i][k] = r - v
            remC[j][k] = c - v
            remF[i][j] = f - v
            table[pos] = v
            yield from walk(pos + 1)
        remR[i][k], remC[j][k], remF[i][j] = r, c, f
        table[pos] = 0

    yield from walk(0)


def brute_force_3dct(R, C=None, F=None, *, binary: bool = True, weights=None, cap: int = DEFAULT_SOLVER_CAP):
    """Lexicographically lowest table with the given marginals, or None."""
    return next(iter_3dct(R, C, F, binary=binary, weights=weights, cap=cap), None)


def sol3dct_demo(x: BitString, n: int, cap: int = DEFAULT_DEMO_CAP) -> np.ndarray:
    """Recover a 0/1 tensor A with g2_fixed(A, f0(n)) == x by going through
    the doubled instance duplic(x, n) at side 2n with all-ones weights.

    The exhaustive solver plays the role of the Problem-5 oracle: doubled
    solutions are enumerated in lexicographic order and the first one whose
    folded tensor re-encodes to ``x`` is returned.
    """
    if n > cap:
        raise SearchLimitExceeded(f"reduction demo capped at n={cap}, got n={n}")
    width = f0(n)
    base = decode_marginals(x, n, width)
    tot = base.total()
    if int(base.C.sum()) != tot or int(base.F.sum()) != tot:
        raise NoSolution("marginal blocks disagree on the table total")
    z = duplic(x, n)
    doubled = decode_marginals(z, 2 * n, width)
    for c in iter_3dct(doubled, binary=True, cap=2 * n):
        a = recover(c, binary=False)
        if is_binary(a) and g2_fixed(a, width) == x:
            return a
    raise NoSolution("no 0/1 table realizes the given encoding")
