"""Small dense matrices over the scalar field."""
from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .cyclotomic import CycloScalar
from .errors import SingularBasis

Matrix = list  # list[list[CycloScalar]]


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(rows: Sequence[Sequence[CycloScalar]], nvars: int) -> CycloScalar:
    n = len(rows)
    if n == 0:
        return CycloScalar.one(nvars)
    if n <= 5:
        total = CycloScalar.zero(nvars)
        for p in permutations(range(n)):
            term = CycloScalar.const(_perm_sign(p), nvars)
            for i, j in enumerate(p):
                term = term * rows[i][j]
                if term.is_zero():
                    break
            total = total + term
        return total
    m = [list(r) for r in rows]
    det = CycloScalar.one(nvars)
    for c in range(n):
        piv = next((k for k in range(c, n) if not m[k][c].is_zero()), None)
        if piv is None:
            return CycloScalar.zero(nvars)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for k in range(c + 1, n):
            if not m[k][c].is_zero():
                f = m[k][c] * inv
                m[k] = [a - f * b for a, b in zip(m[k], m[c])]
    return det


def matmul(A: Matrix, B: Matrix, nvars: int) -> Matrix:
    out = []
    for row in A:
        new = []
        for j in range(len(B[0]) if B else 0):
            s = CycloScalar.zero(nvars)
            for k, a in enumerate(row):
                if not a.is_zero() and not B[k][j].is_zero():
                    s = s + a * B[k][j]
            new.append(s)
        out.append(new)
    return out


def identity(n: int, nvars: int) -> Matrix:
    return [[CycloScalar.const(int(i == j), nvars) for j in range(n)] for i in range(n)]


def is_identity(A: Matrix) -> bool:
    return all((a == (1 if i == j else 0)) for i, row in enumerate(A) for j, a in enumerate(row))


def solve_square(A: Matrix, b: Sequence[CycloScalar], nvars: int) -> list[CycloScalar]:
    """x with A·x = b by Gaussian elimination; SingularBasis if A is singular."""
    n = len(A)
    m = [list(r) + [b[i]] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((k for k in range(c, n) if not m[k][c].is_zero()), None)
        if piv is None:
            raise SingularBasis("restriction system is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = m[c][c].inverse()
        m[c] = [x * inv for x in m[c]]
        for k in range(n):
            if k != c and not m[k][c].is_zero():
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[c])]
    return [m[i][n] for i in range(n)]
