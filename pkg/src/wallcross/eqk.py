"""Localized equivariant K-theory in the fixed-point restriction model.

A class is the tuple of its restrictions to the inertia points (δ, g) of
one side.  Line bundles restrict to units (root of unity times a
Λ-monomial); everything else is built from those by ring operations.

Variables of the scalar field are Λ_1, …, Λ_m, Λ_ħ, where Λ_k = e^{λ_k}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from . import polyhedra as ph
from .cyclotomic import CycloScalar, Unit
from .errors import SideMismatch, SpanFailure
from .gitchambers import AnticoneSet, anticone_set, as_theta
from .stackgeom import FixedPointAtlas, atlas_for

InertiaPoint = tuple  # (delta: tuple[int, ...], ghat: tuple[Fraction, ...])


@dataclass(frozen=True)
class LineBundleSymbol:
    """L(p) ⊗ e^{twist}, with twist over (λ_1, …, λ_m, λ)."""

    p: tuple[int, ...]
    twist: tuple[int, ...]

    def __mul__(self, other: LineBundleSymbol) -> LineBundleSymbol:
        return LineBundleSymbol(
            tuple(a + b for a, b in zip(self.p, other.p)),
            tuple(a + b for a, b in zip(self.twist, other.twist)),
        )

    def inverse(self) -> LineBundleSymbol:
        return LineBundleSymbol(tuple(-a for a in self.p), tuple(-a for a in self.twist))

    def __pow__(self, k: int) -> LineBundleSymbol:
        return LineBundleSymbol(tuple(k * a for a in self.p), tuple(k * a for a in self.twist))


def R(data, i: int) -> LineBundleSymbol:
    return LineBundleSymbol(tuple(data.char(i)), tuple(data.twist(i)))


def S(data, i: int) -> LineBundleSymbol:
    return R(data, i).inverse()


def L(data, p: Sequence[int]) -> LineBundleSymbol:
    return LineBundleSymbol(tuple(p), (0,) * (data.m + 1))


def hbar(data) -> LineBundleSymbol:
    return LineBundleSymbol((0,) * data.r, (0,) * data.m + (1,))


def _solve_in_delta(data, delta, p) -> tuple[Fraction, ...]:
    cols = [data.char(j) for j in delta]
    A = [[cols[j][k] for j in range(len(cols))] for k in range(data.r)]
    c = ph.solve(A, list(p)) if data.r else ()
    if c is None:
        raise SpanFailure(f"characters of {tuple(delta)} do not span")
    return c


def restrict_unit(data, sym: LineBundleSymbol, pt: InertiaPoint) -> Unit:
    """Restriction of a line bundle to (δ, g), as a unit of the scalar field."""
    delta, ghat = pt
    c = _solve_in_delta(data, delta, sym.p)
    exps = [Fraction(x) for x in sym.twist]
    for cj, j in zip(c, delta):
        if cj:
            for k, w in enumerate(data.twist(j)):
                exps[k] -= cj * w
    return Unit(ph.dot(sym.p, ghat), tuple(exps))


def restrict_line_bundle(data, sym: LineBundleSymbol, pt: InertiaPoint) -> CycloScalar:
    return restrict_unit(data, sym, pt).as_scalar()


@dataclass(frozen=True)
class KSide:
    """One side of a crossing: GIT data (plain or tilde), stability and atlas."""

    data: object
    theta: object
    tag: str

    @cached_property
    def anticones(self) -> AnticoneSet:
        return anticone_set(self.data, self.theta)

    @cached_property
    def atlas(self) -> FixedPointAtlas:
        return atlas_for(self.data, self.anticones)

    @cached_property
    def points(self) -> tuple[InertiaPoint, ...]:
        return tuple(self.atlas.inertia_points())

    @property
    def nvars(self) -> int:
        return self.data.m + 1

    @property
    def M(self) -> int:
        return lcm(1, *self.atlas.orders)


def make_side(data, theta, tag: str = "plus") -> KSide:
    return KSide(data, as_theta(theta), tag)


@dataclass(frozen=True)
class KClass:
    side: KSide
    values: tuple[CycloScalar, ...]

    def _check(self, other: KClass):
        if self.side.tag != other.side.tag or self.side.points != other.side.points:
            raise SideMismatch(f"cannot combine {self.side.tag} and {other.side.tag} classes")

    def __add__(self, other: KClass) -> KClass:
        self._check(other)
        return KClass(self.side, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: KClass) -> KClass:
        self._check(other)
        return KClass(self.side, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> KClass:
        return KClass(self.side, tuple(-a for a in self.values))

    def __mul__(self, other) -> KClass:
        if isinstance(other, KClass):
            self._check(other)
            return KClass(self.side, tuple(a * b for a, b in zip(self.values, other.values)))
        return KClass(self.side, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, KClass):
            return NotImplemented
        self._check(other)
        return all(a == b for a, b in zip(self.values, other.values))

    __hash__ = None

    def at(self, pt: InertiaPoint) -> CycloScalar:
        return self.values[self.side.points.index(pt)]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def descends_to(self, M: int) -> bool:
        return all(v.descends_to(M) for v in self.values)


def kclass(side: KSide, sym: LineBundleSymbol) -> KClass:
    return KClass(side, tuple(restrict_line_bundle(side.data, sym, pt) for pt in side.points))


def kconst(side: KSide, c) -> KClass:
    return KClass(side, tuple(CycloScalar.const(c, side.nvars) for _ in side.points))


def kclass_sum(a: KClass, b: KClass) -> KClass:
    return a + b


def kclass_product(a: KClass, b: KClass) -> KClass:
    return a * b


def kclass_eq(a: KClass, b: KClass) -> bool:
    return a == b


def one_minus(side: KSide, sym: LineBundleSymbol) -> KClass:
    return kconst(side, 1) - kclass(side, sym)


def structure_class(side: KSide, delta: Sequence[int], rho: Sequence[int]) -> KClass:
    """e_{δ,ρ} = L(ρ̂) · Π_{i∉δ} (1 − S_i)."""
    data = side.data
    out = kclass(side, L(data, rho))
    for i in range(1, data.N + 1):
        if i not in delta:
            out = out * one_minus(side, S(data, i))
    return out


def structure_basis(side: KSide) -> list[tuple[tuple, KClass]]:
    return [((delta, rho), structure_class(side, delta, rho)) for delta, rho in side.atlas.labels()]


def euler_factor(side: KSide, pt: InertiaPoint) -> CycloScalar:
    """Π_{i∉δ} (1 − S_i) restricted at pt, i.e. e_{δ,0}|_pt."""
    data = side.data
    delta = pt[0]
    out = CycloScalar.one(side.nvars)
    for i in range(1, data.N + 1):
        if i not in delta:
            out = out * (1 - restrict_line_bundle(data, S(data, i), pt))
    return out


def block_determinant(side: KSide, delta) -> CycloScalar:
    """det of (e_{δ,ρ}|_{(δ,g)})_{ρ,g}, computed exactly."""
    from .linalg import determinant

    fp = side.atlas.point(delta)
    rows = []
    for rho in fp.lifts:
        e = structure_class(side, fp.delta, rho)
        rows.append([e.at((fp.delta, g)) for g in fp.elements])
    return determinant(rows, side.nvars)


@dataclass
class RelationReport:
    vanishing: list[tuple[tuple[int, ...], bool]]
    j_relations: list[tuple[int, bool]]
    cross_vanishing: bool
    block_dets_nonzero: bool

    @property
    def ok(self) -> bool:
        return (
            all(ok for _, ok in self.vanishing)
            and all(ok for _, ok in self.j_relations)
            and self.cross_vanishing
            and self.block_dets_nonzero
        )


def verify_relations(g, theta, tag: str = "plus", max_vanishing_sets: int = 512) -> RelationReport:
    from itertools import combinations

    side = make_side(g, theta, tag)
    data = side.data
    A = side.anticones
    full = frozenset(range(1, data.N + 1))
    vanishing = []
    # minimal sets T whose complement is not an anticone
    checked = 0
    for k in range(1, data.N + 1):
        for T in combinations(range(1, data.N + 1), k):
            if checked >= max_vanishing_sets:
                break
            if (full - frozenset(T)) in A:
                continue
            if any(frozenset(t) <= frozenset(T) for t, _ in vanishing):
                continue
            prod = kconst(side, 1)
            for i in T:
                prod = prod * one_minus(side, S(data, i))
            vanishing.append((T, prod.is_zero()))
            checked += 1
    hb = kclass(side, hbar(data))
    jrel = [(i, kclass(side, R(data, i)) * kclass(side, R(data, data.n + i)) == hb) for i in range(1, data.n + 1)]
    cross = True
    for (delta, rho), e in structure_basis(side):
        for pt in side.points:
            if pt[0] != delta and not e.at(pt).is_zero():
                cross = False
    dets = all(not block_determinant(side, fp.delta).is_zero() for fp in side.atlas)
    return RelationReport(vanishing, jrel, cross, dets)
