import itertools

import numpy as np
import pytest

from ct_hash.params import generate_pair

# 3x3 worked example: five 0/1 matrices sharing R = S = (2, 2, 1) and a weight matrix
A1 = [[1, 1, 0], [1, 1, 0], [0, 0, 1]]
A2 = [[1, 1, 0], [1, 0, 1], [0, 1, 0]]
A3 = [[1, 1, 0], [0, 1, 1], [1, 0, 0]]
A4 = [[0, 1, 1], [1, 1, 0], [1, 0, 0]]
A5 = [[1, 0, 1], [1, 1, 0], [0, 1, 0]]
W3 = [[1, 4, 9], [2, 8, 18], [3, 12, 27]]

WORKED_G1 = {
    "A1": (5, 10, 27, 3, 12, 27),
    "A2": (5, 20, 12, 3, 16, 18),
    "A3": (5, 26, 3, 4, 12, 18),
    "A4": (13, 10, 3, 5, 12, 9),
    "A5": (10, 10, 12, 3, 20, 9),
}
WORKED = {"A1": A1, "A2": A2, "A3": A3, "A4": A4, "A5": A5}


def binary_tensors(n):
    """Every n x n x n 0/1 tensor, (i, j, k) lexicographic bit order."""
    for bits in itertools.product((0, 1), repeat=n**3):
        yield np.array(bits, dtype=np.int64).reshape(n, n, n)


def loop_marginals(t):
    """Triple loop with k outermost; independent of numpy axis sums."""
    n = t.shape[0]
    R = [[0] * n for _ in range(n)]
    C = [[0] * n for _ in range(n)]
    F = [[0] * n for _ in range(n)]
    for k in range(n):
        for j in range(n):
            for i in range(n):
                v = int(t[i, j, k])
                R[i][k] += v
                C[j][k] += v
                F[i][j] += v
    return R, C, F


def dfs_3dct_k_outer(R, C, F, domain):
    """Every table with the given marginals, filling cells k-outermost.

    Deliberately naive: no capacity pruning, only final checks per line.
    """
    n = len(R)
    cells = [(i, j, k) for k in range(n) for j in range(n) for i in range(n)]
    table = np.zeros((n, n, n), dtype=np.int64)
    found = []

    def ok_partial():
        return (
            np.all(table.sum(axis=1) <= R)
            and np.all(table.sum(axis=0) <= C)
            and np.all(table.sum(axis=2) <= F)
        )

    def walk(pos):
        if pos == len(cells):
            if (
                np.array_equal(table.sum(axis=1), R)
                and np.array_equal(table.sum(axis=0), C)
                and np.array_equal(table.sum(axis=2), F)
            ):
                found.append(table.copy())
            return
        i, j, k = cells[pos]
        for v in domain(i, j, k):
            table[i, j, k] = v
            if ok_partial():
                walk(pos + 1)
        table[i, j, k] = 0

    walk(0)
    return found


@pytest.fixture(scope="session")
def pair2():
    return generate_pair(2, 7)


@pytest.fixture(scope="session")
def pair3():
    return generate_pair(3, 11)


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
