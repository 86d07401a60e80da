"""Dense exact linear algebra over a field (Fractions or number field elements)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DomainError

Matrix = list[list]


def _copy(m: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in m]


def det(m: Sequence[Sequence], one=Fraction(1)):
    """Determinant by Gaussian elimination; entries must support field division."""
    a = _copy(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise DomainError("determinant of a non-square matrix")
    out = one
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return one * 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            out = -out
        p = a[k][k]
        out = out * p
        inv = one / p
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return out


def rank(m: Sequence[Sequence]) -> int:
    a = _copy(m)
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                for j in range(c, cols):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == rows:
            break
    return r


def solve(m: Sequence[Sequence], b: Sequence):
    """Unique solution of m x = b for square invertible m."""
    n = len(m)
    a = [list(r) + [bi] for r, bi in zip(m, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise DomainError("singular linear system")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    cols = [solve(m, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*a)]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]
