"""Exact rational linear algebra and polyhedral feasibility.

Feasibility of mixed strict/weak linear systems is decided by Fourier-Motzkin
elimination.  Right-hand sides may carry infinitesimal parts: a rhs is a
tuple ``(b0, b1, ...)`` meaning ``b0 + b1·ε + b2·ε² + ...`` with ε > 0
arbitrarily small, and signs are read lexicographically.  Variable
coefficients are always plain rationals.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

Lex = tuple  # tuple[Fraction, ...]


def lex_sign(b: Lex) -> int:
    for x in b:
        if x:
            return 1 if x > 0 else -1
    return 0


def _lex_axpy(a: Fraction, x: Lex, b: Fraction, y: Lex) -> Lex:
    return tuple(a * u + b * v for u, v in zip(x, y))


def to_fractions(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over ℚ.  Returns (rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    i = 0
    for c in range(ncols):
        p = next((k for k in range(i, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[i], m[p] = m[p], m[i]
        inv = 1 / m[i][c]
        m[i] = [x * inv for x in m[i]]
        for k in range(len(m)):
            if k != i and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[i])]
        pivots.append(c)
        i += 1
        if i == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence]) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : rows·x = 0} over ℚ."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(m, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of A·x = b over ℚ, or None.  Unique when A has full column rank."""
    ncols = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    m, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(m, piv):
        x[pc] = row[ncols]
    return tuple(x)


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    m, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] >= n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector in its direction."""
    v = to_fractions(v)
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in ints)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# Fourier-Motzkin ---------------------------------------------------------

# A constraint is (coeffs, rhs, strict) meaning  coeffs·x ≥ rhs  (or > if strict).


def _normalize(coeffs, rhs):
    lead = next((abs(c) for c in coeffs if c), None)
    if lead is None or lead == 1:
        return tuple(coeffs), rhs
    return tuple(c / lead for c in coeffs), tuple(x / lead for x in rhs)


def _tighten(constraints):
    best = {}
    for coeffs, rhs, strict in constraints:
        coeffs, rhs = _normalize(coeffs, rhs)
        old = best.get(coeffs)
        if old is None:
            best[coeffs] = (rhs, strict)
            continue
        orhs, ostrict = old
        s = lex_sign(tuple(a - b for a, b in zip(rhs, orhs)))
        if s > 0 or (s == 0 and strict and not ostrict):
            best[coeffs] = (rhs, strict)
    return [(c, r, s) for c, (r, s) in best.items()]


def feasible(
    nvars: int,
    equalities: Sequence[tuple[Sequence, Lex]] = (),
    inequalities: Sequence[tuple[Sequence, Lex, bool]] = (),
) -> bool:
    """Is there x ∈ ℚ^nvars with every equality and (strict or weak) ≥ constraint holding?"""
    eqs = [(list(map(Fraction, c)), tuple(map(Fraction, r))) for c, r in equalities]
    ineqs = [(list(map(Fraction, c)), tuple(map(Fraction, r)), bool(s)) for c, r, s in inequalities]
    width = max([len(r) for _, r in eqs] + [len(r) for _, r, _ in ineqs] + [1])
    pad = lambda r: tuple(r) + (Fraction(0),) * (width - len(r))
    eqs = [(c, pad(r)) for c, r in eqs]
    ineqs = [(c, pad(r), s) for c, r, s in ineqs]

    # substitute equalities away
    while eqs:
        c, r = eqs.pop()
        v = next((k for k in range(nvars) if c[k] != 0), None)
        if v is None:
            if lex_sign(r) != 0:
                return False
            continue
        piv = c[v]

        def sub(cc, rr):
            f = cc[v] / piv
            if f == 0:
                return cc, rr
            return [a - f * b for a, b in zip(cc, c)], _lex_axpy(Fraction(1), rr, -f, r)

        eqs = [sub(cc, rr) for cc, rr in eqs]
        ineqs = [(*sub(cc, rr), s) for cc, rr, s in ineqs]

    cons = _tighten([(tuple(c), r, s) for c, r, s in ineqs])
    for v in range(nvars):
        pos = [x for x in cons if x[0][v] > 0]
        neg = [x for x in cons if x[0][v] < 0]
        rest = [x for x in cons if x[0][v] == 0]
        for pc, pr, ps in pos:
            for nc, nr, ns in neg:
                a, b = -nc[v], pc[v]
                coeffs = tuple(a * x + b * y for x, y in zip(pc, nc))
                rest.append((coeffs, _lex_axpy(a, pr, b, nr), ps or ns))
        cons = _tighten(rest)
    for _, rhs, strict in cons:
        s = lex_sign(rhs)
        if s > 0 or (strict and s == 0):
            return False
    return True


def in_open_cone(vectors: Sequence[Sequence], target: Sequence[Lex]) -> bool:
    """Is ``target`` a combination of ``vectors`` with all coefficients strictly positive?

    ``target`` is given coordinatewise as lexicographic tuples.  The empty
    combination is {0}.
    """
    k = len(vectors)
    dim = len(target)
    if k == 0:
        return all(lex_sign(t) == 0 for t in target)
    eqs = [([vec[i] for vec in vectors], target[i]) for i in range(dim)]
    pos = [(tuple(int(j == i) for j in range(k)), (0,), True) for i in range(k)]
    return feasible(k, eqs, pos)


def in_closed_cone(vectors: Sequence[Sequence], target: Sequence) -> bool:
    k = len(vectors)
    if k == 0:
        return all(x == 0 for x in target)
    eqs = [([vec[i] for vec in vectors], (target[i],)) for i in range(len(target))]
    nonneg = [(tuple(int(j == i) for j in range(k)), (0,), False) for i in range(k)]
    return feasible(k, eqs, nonneg)


def cone_rays(inequalities: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays (primitive, sorted) of the pointed cone {x : h·x ≥ 0 for h in inequalities}."""
    hs = [to_fractions(h) for h in inequalities]
    rays = set()
    for combo in combinations(range(len(hs)), dim - 1):
        rows = [hs[i] for i in combo]
        ns = nullspace(rows, dim)
        if len(ns) != 1:
            continue
        for sgn in (1, -1):
            v = tuple(sgn * x for x in ns[0])
            if all(dot(h, v) >= 0 for h in hs):
                rays.add(primitive(v))
    if dim == 1:
        rays = {(s,) for s in (1, -1) if all(h[0] * s >= 0 for h in hs)}
    return sorted(rays)
