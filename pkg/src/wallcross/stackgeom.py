"""Stacky fan, hyperplane-arrangement ideal and the fixed-point atlas."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import polyhedra as ph
from .errors import SpanFailure
from .fgab import FgAbelianGroup, IntMatrix, cokernel, hermite_rows, kernel_basis
from .gitchambers import AnticoneSet, GitData, anticone_set, as_theta, extended_set


def reconstruct_beta(g: GitData) -> tuple[FgAbelianGroup, IntMatrix]:
    """𝐍 = coker(𝕃 → ℤ^N) and β : ℤ^N → 𝐍 as the projection matrix."""
    if g.r == 0:
        return FgAbelianGroup(g.N, ()), IntMatrix.identity(g.N)
    return cokernel(g.inclusion())


@dataclass(frozen=True)
class StackyFanData:
    N_group: FgAbelianGroup
    beta: IntMatrix
    b: tuple[tuple[int, ...], ...]
    top_cones: tuple[frozenset[int], ...]
    cones: tuple[frozenset[int], ...]
    ext: frozenset[int]
    rays_ok: bool
    support_flags: tuple[int, ...]

    def b_bar(self, i: int) -> tuple[int, ...]:
        """Image of b_i in 𝐍 modulo torsion."""
        return self.b[i - 1][len(self.N_group.torsion):]


def stacky_fan(g: GitData, theta) -> StackyFanData:
    A = anticone_set(g, theta)
    S = extended_set(g, theta)
    group, beta = reconstruct_beta(g)
    full = frozenset(range(1, g.N + 1))
    top = tuple(sorted((full - d for d in A.minimal), key=sorted))
    cones = set()
    for t in top:
        for k in range(len(t) + 1):
            cones.update(frozenset(c) for c in combinations(sorted(t), k))
    cones = tuple(sorted(cones, key=lambda c: (len(c), sorted(c))))
    b = tuple(beta.column(i) for i in range(g.N))
    fan = StackyFanData(group, beta, b, top, cones, S, True, ())
    rays_ok = all(frozenset({i}) in cones for i in full - S)
    # extended vectors should sit in the support; flag (do not fail) when not certified
    flags = tuple(
        s for s in sorted(S)
        if not any(ph.in_closed_cone([fan.b_bar(i) for i in sorted(t)], fan.b_bar(s)) for t in top)
    )
    return StackyFanData(group, beta, b, top, cones, S, rays_ok, flags)


@dataclass(frozen=True)
class HypertoricIdealData:
    """Generators Σ_i c_i z_i w_i, stored as coefficient rows (c_1..c_n)."""

    generators: tuple[tuple[int, ...], ...]

    def as_strings(self) -> list[str]:
        out = []
        for row in self.generators:
            terms = []
            for i, c in enumerate(row, 1):
                if c == 0:
                    continue
                mono = f"z{i}w{i}"
                coef = "" if abs(c) == 1 else f"{abs(c)} "
                sign = "-" if c < 0 else "+"
                terms.append((sign, coef + mono))
            if not terms:
                out.append("0")
                continue
            s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, t in terms[1:]:
                s += f" {sign} {t}"
            out.append(s)
        return out


def reduced_lattice(g: GitData) -> list[tuple[int, ...]]:
    """ℤ-basis of 𝕃_red = {x ∈ 𝕃 : ⟨D_s, x⟩ = 0 for extended s}."""
    ext_rows = [g.char(s) for s in sorted(g.extended_indices)]
    if not ext_rows:
        return [tuple(int(i == j) for j in range(g.r)) for i in range(g.r)]
    return kernel_basis(IntMatrix.from_rows(ext_rows, g.r)).columns()


def hypertoric_ideal(g: GitData) -> HypertoricIdealData:
    gens = []
    for x in reduced_lattice(g):
        gens.append(tuple(ph.dot(g.char(i), x) for i in range(1, g.n + 1)))
    return HypertoricIdealData(tuple(gens))


# fixed points ----------------------------------------------------------------


@dataclass(frozen=True)
class FixedPoint:
    delta: tuple[int, ...]
    isotropy: FgAbelianGroup
    lifts: tuple[tuple[int, ...], ...]
    elements: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def inertia_points(self):
        return [(self.delta, g) for g in self.elements]


@dataclass(frozen=True)
class FixedPointAtlas:
    r: int
    points: tuple[FixedPoint, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def inertia_points(self) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
        return [ip for p in self.points for ip in p.inertia_points()]

    def labels(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(p.delta, rho) for p in self.points for rho in p.lifts]

    def point(self, delta) -> FixedPoint:
        delta = tuple(sorted(delta))
        for p in self.points:
            if p.delta == delta:
                return p
        raise KeyError(delta)

    @property
    def size(self) -> int:
        return sum(p.order for p in self.points)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(p.order for p in self.points)


def _box(hnf: Sequence[Sequence[int]]):
    pivots = [row[next(k for k, x in enumerate(row) if x)] for row in hnf]
    return sorted(product(*(range(p) for p in pivots)))


def fixed_point(data, delta: Sequence[int]) -> FixedPoint:
    delta = tuple(sorted(delta))
    r = data.r
    cols = [data.characters[i - 1] for i in delta]
    if ph.rank(cols) != r:
        raise SpanFailure(f"characters of {delta} do not span")
    group, _ = cokernel(IntMatrix.from_columns(cols, r))
    if group.free_rank:
        raise SpanFailure(f"characters of {delta} do not span")
    span = hermite_rows(cols, r)
    lifts = tuple(_box(span))
    # ĝ with ⟨D_i, ĝ⟩ ∈ ℤ for i ∈ δ: pick an r-subset basis, ĝ = A^{-1} k mod 𝕃
    basis = next(c for c in combinations(cols, r) if ph.rank(list(c)) == r)
    Ainv = ph.inverse([list(v) for v in basis])
    elems = set()
    col_lattice = hermite_rows([tuple(basis[i][j] for i in range(r)) for j in range(r)], r)
    for k in _box(col_lattice):
        gh = tuple(sum(Ainv[a][b] * k[b] for b in range(r)) for a in range(r))
        gh = tuple(x - (x.numerator // x.denominator) for x in gh)
        if all(ph.dot(v, gh).denominator == 1 for v in cols):
            elems.add(gh)
    return FixedPoint(delta, group, lifts, tuple(sorted(elems)))


def atlas_for(data, anticones: AnticoneSet) -> FixedPointAtlas:
    return FixedPointAtlas(data.r, tuple(fixed_point(data, d) for d in anticones.minimal))


def fixed_points(g: GitData, theta) -> FixedPointAtlas:
    return atlas_for(g, anticone_set(g, as_theta(theta)))
