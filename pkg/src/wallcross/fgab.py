"""Exact integer linear algebra over finitely generated abelian groups.

Everything here works on Python ints, so entries never overflow.  Matrices
are small (desk scale) and immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .errors import NotSurjective


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [tuple(c) for c in cols]
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class FgAbelianGroup:
    """ℤ^free_rank ⊕ ⊕ ℤ/d_k with d_1 | d_2 | ... and every d_k ≥ 2."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.torsion:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group")
        return self.torsion_order

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SmithDecomposition:
    """A = U·S·V with U, V unimodular and S diagonal with a divisibility chain.

    ``U_inv`` and ``V_inv`` are kept because kernels and cokernels are read
    off them directly.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _identity_rows(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    n, m = A.shape
    a = A.tolist()
    # P·A·Q = S is tracked together with P^{-1} and Q^{-1}; then U = P^{-1}, V = Q^{-1}.
    P, Pi = _identity_rows(n), _identity_rows(n)
    Q, Qi = _identity_rows(m), _identity_rows(m)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        P[i], P[j] = P[j], P[i]
        for r in Pi:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]
        Qi[i], Qi[j] = Qi[j], Qi[i]

    def row_addmul(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        P[dst] = [x + q * y for x, y in zip(P[dst], P[src])]
        for r in Pi:
            r[src] -= q * r[dst]

    def col_addmul(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for r in a:
            r[dst] += q * r[src]
        for r in Q:
            r[dst] += q * r[src]
        Qi[src] = [x - q * y for x, y in zip(Qi[src], Qi[dst])]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        P[i] = [-x for x in P[i]]
        for r in Pi:
            r[i] = -r[i]

    t = 0
    while t < min(n, m):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, m) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            changed = False
            for i in range(t + 1, n):
                if a[i][t]:
                    row_addmul(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        row_swap(t, i)
                        changed = True
            for j in range(t + 1, m):
                if a[t][j]:
                    col_addmul(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        col_swap(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, m) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            row_addmul(t, bad, 1)
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    return SmithDecomposition(
        U=IntMatrix.from_rows(Pi, n),
        S=IntMatrix.from_rows(a, m),
        V=IntMatrix.from_rows(Qi, m),
        U_inv=IntMatrix.from_rows(P, n),
        V_inv=IntMatrix.from_rows(Q, m),
    )


def hermite_rows(vectors: Iterable[Sequence[int]], dim: int | None = None) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows: echelon form, positive pivots, entries above a
    pivot reduced into [0, pivot).  Two generating sets span the same lattice
    iff their outputs agree.
    """
    rows = [list(v) for v in vectors]
    if dim is None:
        dim = len(rows[0]) if rows else 0
    out = []
    col = 0
    while rows and col < dim:
        rows = [r for r in rows if any(r)]
        active = [r for r in rows if r[col]]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            for r in active[1:]:
                q = r[col] // piv[col]
                for k in range(dim):
                    r[k] -= q * piv[k]
            active = [r for r in active if r[col]]
        piv = active[0]
        if piv[col] < 0:
            piv[:] = [-x for x in piv]
        rows = [r for r in rows if r is not piv]
        out.append(piv)
        col += 1
    # reduce above pivots
    for i, r in enumerate(out):
        c = next(k for k in range(dim) if r[k])
        for prev in out[:i]:
            q = prev[c] // r[c]
            if q:
                for k in range(dim):
                    prev[k] -= q * r[k]
    return [tuple(r) for r in out]


def hnf_canonical(A: IntMatrix) -> IntMatrix:
    """Canonical representative of A under left multiplication by unimodular matrices."""
    rows = hermite_rows(A.rows, A.ncols)
    return IntMatrix.from_rows(rows + [(0,) * A.ncols] * (A.nrows - len(rows)), A.ncols)


def reduce_mod_lattice(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical coset representative of v modulo the lattice with HNF rows ``hnf``."""
    v = list(v)
    for row in hnf:
        c = next(k for k, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """ℤ-basis of {x : A·x = 0}, as the columns of the result (HNF-canonical)."""
    snf = smith_normal_form(A)
    vi = snf.V_inv
    basis = [vi.column(j) for j in range(snf.rank, A.ncols)]
    basis = hermite_rows(basis, A.ncols) if basis else []
    return IntMatrix.from_columns(basis, A.ncols)


def cokernel(A: IntMatrix) -> tuple[FgAbelianGroup, IntMatrix]:
    """coker(A : ℤ^cols → ℤ^rows) in invariant-factor form.

    Returns the group and the projection ℤ^rows → group as a matrix whose
    rows are the coordinates: torsion coordinates first (reduced mod their
    factor), then free coordinates.
    """
    snf = smith_normal_form(A)
    diag = snf.diagonal
    proj = snf.U_inv
    torsion, tors_rows, free_rows = [], [], []
    for i in range(A.nrows):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        if d == 0:
            free_rows.append(proj.rows[i])
        else:
            torsion.append(d)
            tors_rows.append(tuple(x % d for x in proj.rows[i]))
    group = FgAbelianGroup(len(free_rows), tuple(torsion))
    return group, IntMatrix.from_rows(tors_rows + free_rows, A.nrows)


def _relation_matrix(beta: IntMatrix, target: FgAbelianGroup) -> IntMatrix:
    # [β_tors diag(d); β_free 0]: its kernel projects onto ker(β) ⊂ ℤ^N
    t = len(target.torsion)
    rows = []
    for k, row in enumerate(beta.rows):
        extra = [target.torsion[k] if j == k else 0 for j in range(t)] if k < t else [0] * t
        rows.append(list(row) + extra)
    return IntMatrix.from_rows(rows, beta.ncols + t)


def is_surjective(beta: IntMatrix, target: FgAbelianGroup) -> bool:
    if beta.nrows != target.ngens:
        raise ValueError("beta rows must match the generators of target")
    snf = smith_normal_form(_relation_matrix(beta, target))
    return snf.rank == beta.nrows and all(d == 1 for d in snf.diagonal[: snf.rank])


def gale_dual(beta: IntMatrix, target: FgAbelianGroup) -> IntMatrix:
    """Characters D_i = β^∨(e_i^∨) as the columns of an r×N matrix, HNF-canonical."""
    if not is_surjective(beta, target):
        raise NotSurjective("beta is not surjective onto its target")
    N = beta.ncols
    K = kernel_basis(_relation_matrix(beta, target))
    lattice = [c[:N] for c in K.columns()]
    r = len(lattice)
    D = IntMatrix.from_rows(lattice, N) if r else IntMatrix.zeros(0, N)
    return hnf_canonical(D)
