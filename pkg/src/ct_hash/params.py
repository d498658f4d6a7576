"""Weight tensors V and W: construction, hypothesis checks, generation and
the text file format."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    FormatError,
    InvalidParameters,
    ParameterGenerationError,
    ShapeMismatchError,
)
from .tensor import format_tensor, parse_tensor_tokens, tensor

HEADER = "ct-hash-params v1"

# (hypothesis id, tensor label, axis whose lines are tested, compare against)
# axis: "k" = lines V(i, j, *), "i" = lines V(*, j, k), "j" = lines V(i, *, k)
HYPOTHESES = (
    ("4a", None, None, None),
    ("4b", "V", "k", "W"),
    ("4c", "V", "i", "W"),
    ("4d", "V", "j", "W"),
    ("4e", "V", "k", "ones"),
    ("4f", "V", "i", "ones"),
    ("4g", "V", "j", "ones"),
    ("4h", "W", "k", "ones"),
    ("4i", "W", "i", "ones"),
    ("4j", "W", "j", "ones"),
)


def vones(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    return (1,) * n


def mones(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    arr = np.ones((n, n, n), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def is_nlc(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when no real alpha gives u == alpha * v.

    Exact for integer vectors: if v has a nonzero entry v[m], the only
    candidate is alpha = u[m] / v[m], and u == alpha * v iff
    u[i] * v[m] == u[m] * v[i] for every i.
    """
    u = [int(x) for x in u]
    v = [int(x) for x in v]
    if len(u) != len(v):
        raise ShapeMismatchError("is_nlc needs vectors of equal length")
    pivot = next((m for m, x in enumerate(v) if x != 0), None)
    if pivot is None:
        return any(u)
    return any(u[i] * v[pivot] != u[pivot] * v[i] for i in range(len(u)))


def _lines(t: np.ndarray, axis: str):
    """Yield ((a, b), vector) for every line of ``t`` along ``axis``.

    (a, b) are the two fixed 0-based indices in (i, j, k) order.
    """
    n = t.shape[0]
    for a in range(n):
        for b in range(n):
            if axis == "k":
                yield (a, b), t[a, b, :]
            elif axis == "i":
                yield (a, b), t[:, a, b]
            else:
                yield (a, b), t[a, :, b]


_FIXED_NAMES = {"k": ("i", "j"), "i": ("j", "k"), "j": ("i", "k")}
_LINE_PATTERN = {"k": "{t}({a},{b},*)", "i": "{t}(*,{a},{b})", "j": "{t}({a},*,{b})"}


@dataclass(frozen=True)
class HypothesisResult:
    hypothesis: str
    passed: bool
    # 1-based indices of the first failing line, e.g. {"i": 1, "j": 3}
    witness: dict | None = None
    detail: str = ""

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"({self.hypothesis}) {status}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class ValidationReport:
    results: tuple[HypothesisResult, ...]

    @property
    def valid(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, hypothesis: str) -> HypothesisResult:
        for r in self.results:
            if r.hypothesis == hypothesis:
                return r
        raise KeyError(hypothesis)

    def failures(self) -> list[HypothesisResult]:
        return [r for r in self.results if not r.passed]

    def to_text(self) -> str:
        lines = [r.describe() for r in self.results]
        lines.append("valid" if self.valid else "invalid")
        return "\n".join(lines)


def validate_pair(V: np.ndarray, W: np.ndarray) -> ValidationReport:
    """Check all ten hypotheses (4a)-(4j) on the pair (V, W)."""
    if V.ndim != 3 or V.shape != W.shape or V.shape != (V.shape[0],) * 3:
        raise ShapeMismatchError(f"V and W must be cubic of equal side: {V.shape} vs {W.shape}")
    if V.size and (V.min() < 1 or W.min() < 1):
        raise ValueError("V and W entries must be strictly positive")
    tensors = {"V": V, "W": W}
    results = []
    for hyp, label, axis, other in HYPOTHESES:
        if label is None:
            same = bool(np.array_equal(V, W))
            results.append(HypothesisResult(hyp, not same, None, "V equals W" if same else ""))
            continue
        failure = _first_collinear_line(tensors[label], axis, None if other == "ones" else tensors[other])
        if failure is None:
            results.append(HypothesisResult(hyp, True))
        else:
            a, b = failure[0] + 1, failure[1] + 1
            names = _FIXED_NAMES[axis]
            where = _LINE_PATTERN[axis].format(t=label, a=a, b=b)
            target = "VOnes(n)" if other == "ones" else _LINE_PATTERN[axis].format(t=other, a=a, b=b)
            results.append(
                HypothesisResult(
                    hyp,
                    False,
                    {names[0]: a, names[1]: b, "axis": axis},
                    f"{where} is a multiple of {target}",
                )
            )
    return ValidationReport(tuple(results))


def _line_matrix(t: np.ndarray, axis: str) -> np.ndarray:
    """All lines along ``axis`` as rows, ordered like ``_lines``."""
    n = t.shape[0]
    moved = {"k": t, "i": np.moveaxis(t, 0, 2), "j": np.moveaxis(t, 1, 2)}[axis]
    return moved.reshape(n * n, n)


def _first_collinear_line(t: np.ndarray, axis: str, other: np.ndarray | None):
    """0-based (a, b) of the first line of ``t`` that is a multiple of the
    matching line of ``other`` (or of VOnes when ``other`` is None)."""
    n = t.shape[0]
    if max(int(t.max()), 1 if other is None else int(other.max())) >= 1 << 31:
        # products could overflow int64; use the exact scalar test
        for (a, b), line in _lines(t, axis):
            ref = vones(n) if other is None else _line_at(other, axis, a, b)
            if not is_nlc(line, ref):
                return (a, b)
        return None
    lines = _line_matrix(t, axis)
    refs = np.ones_like(lines) if other is None else _line_matrix(other, axis)
    # strictly positive entries, so column 0 is always a valid pivot
    collinear = np.all(lines * refs[:, :1] == lines[:, :1] * refs, axis=1)
    hits = np.flatnonzero(collinear)
    if hits.size == 0:
        return None
    return divmod(int(hits[0]), n)


def _line_at(t: np.ndarray, axis: str, a: int, b: int) -> np.ndarray:
    if axis == "k":
        return t[a, b, :]
    if axis == "i":
        return t[:, a, b]
    return t[a, :, b]


@dataclass(frozen=True, eq=False)
class ParameterPair:
    n: int
    V: np.ndarray
    W: np.ndarray
    validated: bool = False
    report: ValidationReport | None = field(default=None, repr=False)

    @classmethod
    def checked(cls, V, W) -> "ParameterPair":
        """Validate and wrap; raises InvalidParameters naming the failing hypotheses."""
        V, W = tensor(V), tensor(W)
        report = validate_pair(V, W)
        if not report.valid:
            failed = ", ".join(r.describe() for r in report.failures())
            raise InvalidParameters(f"parameter pair fails {failed}", report)
        return cls(V.shape[0], V, W, True, report)

    @classmethod
    def unchecked(cls, V, W) -> "ParameterPair":
        """Wrap without validation (baselines such as V = W = all ones)."""
        V, W = tensor(V), tensor(W)
        if V.shape != W.shape:
            raise ShapeMismatchError(f"V and W differ in shape: {V.shape} vs {W.shape}")
        return cls(V.shape[0], V, W, False)

    def __eq__(self, other):
        if not isinstance(other, ParameterPair):
            return NotImplemented
        return np.array_equal(self.V, other.V) and np.array_equal(self.W, other.W)

    __hash__ = None


def paper_pair(n: int = 8) -> ParameterPair:
    """V(i,j,k) = i + 8j + 64k and W(i,j,k) = 700 - (j + 8k + 64i), 1-based."""
    idx = np.arange(1, n + 1)
    i, j, k = np.meshgrid(idx, idx, idx, indexing="ij")
    V = i + 8 * j + 64 * k
    W = 700 - (j + 8 * k + 64 * i)
    return ParameterPair.checked(V, W)


def generate_pair(n: int, seed: int, max_tries: int = 1000) -> ParameterPair:
    """Rejection-sample entries uniformly from [1, 2n^2] until the pair validates."""
    if n < 2:
        # every positive length-1 vector is a multiple of VOnes(1)
        raise ParameterGenerationError(f"no valid parameter pair exists for n={n}")
    rng = random.Random(seed)
    hi = 2 * n * n
    for _ in range(max_tries):
        V = np.array([rng.randint(1, hi) for _ in range(n**3)], dtype=np.int64).reshape(n, n, n)
        W = np.array([rng.randint(1, hi) for _ in range(n**3)], dtype=np.int64).reshape(n, n, n)
        if validate_pair(V, W).valid:
            return ParameterPair.checked(V, W)
    raise ParameterGenerationError(f"no valid pair for n={n} after {max_tries} tries (seed {seed})")


def format_params(p: ParameterPair) -> str:
    return f"{HEADER} n={p.n}\n" + format_tensor(p.V) + format_tensor(p.W)


def parse_params(text: str, validate: bool = True) -> ParameterPair:
    lines = text.lstrip().splitlines()
    if not lines:
        raise FormatError("empty params file")
    head = lines[0].split()
    if len(head) != 3 or " ".join(head[:2]) != HEADER or not head[2].startswith("n="):
        raise FormatError(f"missing header '{HEADER} n=<n>'")
    try:
        n = int(head[2][2:])
    except ValueError as exc:
        raise FormatError(f"bad header side: {head[2]}") from exc
    tokens = "\n".join(lines[1:]).split()
    V, pos = parse_tensor_tokens(tokens, 0)
    W, pos = parse_tensor_tokens(tokens, pos)
    if pos != len(tokens):
        raise FormatError("trailing data after the W tensor")
    if V.shape[0] != n or W.shape[0] != n:
        raise FormatError(f"header says n={n} but tensors have sides {V.shape[0]}, {W.shape[0]}")
    if validate:
        return ParameterPair.checked(V, W)
    return ParameterPair.unchecked(V, W)
