"""Fourier-Mukai transform on localized K-theory across a single wall.

Ψ sends the minus structure basis e_{δ₋,ρ} to plus-side classes:

* shared δ₋ (still a minimal anticone on the plus side): Ψ(e) = e_{δ₋,ρ}^+;
* flopped δ₋: a μ_l-averaged product in t = ζ·(R_{j₋}^+)^{1/l}, where j₋ is
  the unique element of δ₋ pairing negatively with e and l = −D_{j₋}·e.

Everything is evaluated pointwise in the restriction model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from .cyclotomic import CycloScalar, Poly, Unit
from .eqk import (
    KClass,
    KSide,
    L,
    LineBundleSymbol,
    R,
    S,
    euler_factor,
    kclass,
    make_side,
    restrict_unit,
    structure_class,
)
from .errors import DegenerateCrossing, OrbifoldUnsupported, SingularBasis
from .gitchambers import GitData, WallCrossingData, as_theta, tilde_data, wall_crossing
from .linalg import determinant, is_identity, matmul


@dataclass(frozen=True)
class AnticoneCase:
    delta: tuple[int, ...]
    shared: bool
    j_minus: int | None = None
    l: int | None = None


@dataclass
class CrossingContext:
    git: GitData
    wc: WallCrossingData | None
    plus: KSide
    minus: KSide
    cases: dict[tuple[int, ...], AnticoneCase] = field(default_factory=dict)

    @cached_property
    def M_base(self) -> int:
        return lcm(self.plus.M, self.minus.M)

    @cached_property
    def M_ext(self) -> int:
        ls = [c.l for c in self.cases.values() if not c.shared]
        return self.M_base * lcm(1, *ls)

    @property
    def nvars(self) -> int:
        return self.git.m + 1

    @property
    def e(self) -> tuple[int, ...]:
        return self.wc.e if self.wc is not None else (0,) * self.git.r

    def pairing(self, i: int) -> int:
        return sum(a * b for a, b in zip(self.git.char(i), self.e))

    def plus_labels(self):
        return self.plus.atlas.labels()

    def minus_labels(self):
        return self.minus.atlas.labels()


def crossing_context(g: GitData, theta_plus, theta_minus) -> CrossingContext:
    wc = wall_crossing(g, theta_plus, theta_minus)
    ctx = CrossingContext(g, wc, make_side(g, wc.theta_plus, "plus"), make_side(g, wc.theta_minus, "minus"))
    plus_min = set(ctx.plus.anticones.minimal)
    for d in ctx.minus.anticones.minimal:
        delta = tuple(sorted(d))
        if d in plus_min:
            ctx.cases[delta] = AnticoneCase(delta, True)
            continue
        neg = [j for j in delta if wc.pairing(j) < 0]
        if len(neg) != 1:
            raise DegenerateCrossing(f"{delta} has {len(neg)} indices pairing negatively with e")
        ctx.cases[delta] = AnticoneCase(delta, False, neg[0], -wc.pairing(neg[0]))
    return ctx


def trivial_context(g: GitData, theta) -> CrossingContext:
    """Degenerate crossing of a chamber with itself: every minimal anticone is shared."""
    theta = as_theta(theta)
    ctx = CrossingContext(g, None, make_side(g, theta, "plus"), make_side(g, theta, "minus"))
    for d in ctx.minus.anticones.minimal:
        delta = tuple(sorted(d))
        ctx.cases[delta] = AnticoneCase(delta, True)
    return ctx


def reversed_context(ctx: CrossingContext) -> CrossingContext:
    if ctx.wc is None:
        return trivial_context(ctx.git, ctx.plus.theta)
    return crossing_context(ctx.git, ctx.wc.theta_minus, ctx.wc.theta_plus)


# the transform ---------------------------------------------------------------


def _flopped_value(ctx: CrossingContext, case: AnticoneCase, rho, pt, branch: int) -> CycloScalar:
    plus = ctx.plus
    data = plus.data
    nv = ctx.nvars
    l = case.l
    r_unit = restrict_unit(data, R(data, case.j_minus), pt)
    t0 = r_unit.root(l, branch)
    rho_e = sum(a * b for a, b in zip(rho, ctx.e))
    L_rho = restrict_unit(data, L(data, rho), pt)
    # factors independent of the branch of t
    fixed = CycloScalar.one(nv)
    for j in range(1, data.N + 1):
        if j not in case.delta and ctx.pairing(j) < 0:
            fixed = fixed * (1 - restrict_unit(data, S(data, j), pt).as_scalar())
    total = CycloScalar.zero(nv)
    for k in range(l):
        t = t0 * Unit(Fraction(k, l), (0,) * nv)
        geo = CycloScalar.zero(nv)
        for a in range(l):
            geo = geo + (t ** (-a)).as_scalar()
        term = geo * (L_rho * t ** rho_e).as_scalar() * fixed
        for i in range(1, data.N + 1):
            p = ctx.pairing(i)
            if i not in case.delta and p >= 0:
                term = term * (1 - (t ** (-p) * restrict_unit(data, S(data, i), pt)).as_scalar())
        total = total + term
    return total * Fraction(1, l)


def fm_transform(ctx: CrossingContext, delta: Sequence[int], rho: Sequence[int], branch: int = 0) -> KClass:
    """Ψ(e_{δ₋,ρ}) as a plus-side class.  ``branch`` shifts the chosen l-th root by ζ_l^branch."""
    delta = tuple(sorted(delta))
    case = ctx.cases[delta]
    if case.shared:
        return structure_class(ctx.plus, delta, rho)
    vals = tuple(_flopped_value(ctx, case, tuple(rho), pt, branch) for pt in ctx.plus.points)
    return KClass(ctx.plus, vals)


def fm_transform_projected(ctx: CrossingContext, delta: Sequence[int], rho: Sequence[int]) -> KClass:
    """Second route for the flopped case: expand in a formal variable t, keep
    exponents divisible by l and substitute t^l = R_{j₋}^+, so no roots are taken."""
    delta = tuple(sorted(delta))
    case = ctx.cases[delta]
    if case.shared:
        return structure_class(ctx.plus, delta, rho)
    data, nv, l = ctx.plus.data, ctx.nvars, case.l
    rho_e = sum(a * b for a, b in zip(rho, ctx.e))
    vals = []
    for pt in ctx.plus.points:
        # polynomial in t: dict exponent -> scalar
        f = {-a: CycloScalar.one(nv) for a in range(l)}

        def mul(f, g):
            out = {}
            for e1, c1 in f.items():
                for e2, c2 in g.items():
                    out[e1 + e2] = out[e1 + e2] + c1 * c2 if e1 + e2 in out else c1 * c2
            return out

        lr = restrict_unit(data, L(data, rho), pt).as_scalar()
        f = mul(f, {rho_e: lr})
        for j in range(1, data.N + 1):
            p = ctx.pairing(j)
            if j in delta:
                continue
            s = restrict_unit(data, S(data, j), pt).as_scalar()
            if p <= 0:
                f = mul(f, {0: 1 - s})
            else:
                f = mul(f, {0: CycloScalar.one(nv), -p: -s})
        r_unit = restrict_unit(data, R(data, case.j_minus), pt)
        v = CycloScalar.zero(nv)
        for ex, c in f.items():
            if ex % l == 0:
                v = v + c * (r_unit ** (ex // l)).as_scalar()
        vals.append(v)
    return KClass(ctx.plus, tuple(vals))


# matrices --------------------------------------------------------------------


@dataclass
class FMMatrix:
    rows: list  # plus labels
    cols: list  # minus labels
    entries: list  # list[list[CycloScalar]]
    nvars: int

    def determinant(self) -> CycloScalar:
        if len(self.rows) != len(self.cols):
            raise SingularBasis("FM matrix is not square")
        return determinant(self.entries, self.nvars)

    def is_identity(self) -> bool:
        return self.rows == self.cols and is_identity(self.entries)

    def __matmul__(self, other: FMMatrix) -> FMMatrix:
        if self.cols != other.rows:
            raise ValueError("label mismatch in FM matrix product")
        return FMMatrix(self.rows, other.cols, matmul(self.entries, other.entries, self.nvars), self.nvars)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FMMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))
        )


def expand_in_basis(side: KSide, cls: KClass) -> dict:
    """Coefficients of a class in the structure basis of its side.

    Per fixed point δ the restriction block is χ_ρ(g)·m_ρ·E(δ,g), so the
    block inverts by character orthogonality:
    c_ρ = m_ρ^{-1} · |G|^{-1} · Σ_g χ_ρ(g)^{-1} v_g / E(δ,g).
    """
    data, nv = side.data, side.nvars
    coeffs = {}
    for fp in side.atlas:
        E = {g: euler_factor(side, (fp.delta, g)) for g in fp.elements}
        for g, eg in E.items():
            if eg.is_zero():
                raise SingularBasis(f"Euler factor vanishes at {fp.delta}, {g}")
        for rho in fp.lifts:
            m_rho = restrict_unit(data, L(data, rho), (fp.delta, (Fraction(0),) * data.r))
            acc = CycloScalar.zero(nv)
            for g in fp.elements:
                chi = Unit(sum(Fraction(a) * b for a, b in zip(rho, g)), (0,) * nv)
                v = cls.at((fp.delta, g))
                if not v.is_zero():
                    acc = acc + v * chi.inverse() / E[g]
            coeffs[(fp.delta, rho)] = acc * m_rho.inverse() * Fraction(1, fp.order)
    return coeffs


def recombine(side: KSide, coeffs: dict) -> KClass:
    out = KClass(side, tuple(CycloScalar.zero(side.nvars) for _ in side.points))
    for (delta, rho), c in coeffs.items():
        if not c.is_zero():
            out = out + structure_class(side, delta, rho) * c
    return out


def _transform_images(ctx: CrossingContext, branch: int = 0, pullback=None) -> list[KClass]:
    imgs = []
    for delta, rho in ctx.minus_labels():
        img = fm_transform(ctx, delta, rho, branch)
        imgs.append(pullback(img) if pullback else img)
    return imgs


def fm_matrix(ctx: CrossingContext, ambient: str = "X", branch: int = 0) -> FMMatrix:
    """Matrix of Ψ: columns are minus basis labels, rows plus basis labels.

    ``ambient="Y"`` routes the images through the identification ι^⋆ of the
    hypertoric core with its ambient toric stack; the result must not change.
    """
    rows, cols = ctx.plus_labels(), ctx.minus_labels()
    side = ctx.plus
    pull = None
    if ambient == "Y":
        side = core_side(ctx.plus)
        pull = lambda c: core_pullback(side, c)
    entries = [[None] * len(cols) for _ in rows]
    for j, img in enumerate(_transform_images(ctx, branch, pull)):
        coeffs = expand_in_basis(side, img)
        for i, lab in enumerate(rows):
            entries[i][j] = coeffs[lab]
    return FMMatrix(rows, cols, entries, ctx.nvars)


def monodromy(ctx: CrossingContext) -> FMMatrix:
    """Ψ′∘Ψ on the minus side, Ψ′ the transform of the reversed crossing."""
    psi = fm_matrix(ctx)
    psi_rev = fm_matrix(reversed_context(ctx))
    return psi_rev @ psi


def core_side(side: KSide) -> KSide:
    return KSide(side.data, side.theta, "core-" + side.tag)


def core_pullback(core: KSide, cls: KClass) -> KClass:
    # ι^⋆ is an isomorphism of localized K-theories with the same fixed points,
    # so it acts as the identity on restriction tuples
    return KClass(core, cls.values)


def galois_report(ctx: CrossingContext, branch_check: bool = True) -> dict:
    """Per flopped basis label: descends to ℚ(ζ_{M_base}) and branch independence."""
    from .serialize import kclass_json

    out = {}
    for delta, rho in ctx.minus_labels():
        if ctx.cases[delta].shared:
            continue
        img = fm_transform(ctx, delta, rho)
        entry = {"descends": img.descends_to(ctx.M_base)}
        if branch_check:
            other = fm_transform(ctx, delta, rho, branch=1)
            entry["branch_identical"] = kclass_json(img) == kclass_json(other)
        out[(delta, rho)] = entry
    return out


def lift_independence(ctx: CrossingContext, shifts: Sequence[int] = (1, -1)) -> dict:
    """Test Ψ(e') = Λ^{-k·tw_j}·Ψ(e) for lifts ρ̂' = ρ̂ + k·D_j, j ∈ δ₋."""
    g, nv = ctx.git, ctx.nvars
    out = {}
    for delta, rho in ctx.minus_labels():
        base = fm_transform(ctx, delta, rho)
        ok = True
        for j in delta:
            for k in shifts:
                alt = tuple(a + k * b for a, b in zip(rho, g.char(j)))
                scale = Unit.monomial(tuple(-k * w for w in g.twist(j)))
                if fm_transform(ctx, delta, alt) != base * scale:
                    ok = False
        out[(delta, rho)] = ok
    return out


# localization oracle ---------------------------------------------------------


@dataclass
class OracleData:
    tilde: KSide
    f_minus: dict
    f_plus: dict


def _pullback_matches(ctx, tilde: KSide, q, side: KSide, delta, twist_e: bool) -> bool:
    g = ctx.git
    for i in range(1, g.N + 1):
        p = g.char(i)
        shift = -sum(a * b for a, b in zip(p, ctx.e)) if twist_e else 0
        tsym = LineBundleSymbol(tuple(p) + (shift,), tuple(g.twist(i)))
        lhs = restrict_unit(tilde.data, tsym, q)
        rhs = restrict_unit(g, R(g, i), (delta, (Fraction(0),) * g.r))
        if lhs != rhs:
            return False
    return True


def oracle_data(ctx: CrossingContext) -> OracleData:
    if ctx.wc is None:
        raise OrbifoldUnsupported("oracle needs a genuine wall crossing")
    td = tilde_data(ctx.wc)
    tilde = KSide(td, td.theta, "tilde")
    for side in (ctx.plus, ctx.minus, tilde):
        if any(o != 1 for o in side.atlas.orders):
            raise OrbifoldUnsupported(f"{side.tag} side has nontrivial isotropy")
    f_minus, f_plus = {}, {}
    for q in tilde.points:
        for side, target, twist_e in ((ctx.minus, f_minus, False), (ctx.plus, f_plus, True)):
            hits = [fp.delta for fp in side.atlas if _pullback_matches(ctx, tilde, q, side, fp.delta, twist_e)]
            if len(hits) != 1:
                raise OrbifoldUnsupported(f"no unique image of tilde point {q[0]} on the {side.tag} side")
            target[q] = hits[0]
    return OracleData(tilde, f_minus, f_plus)


def localization_oracle(ctx: CrossingContext, E: KClass, od: OracleData | None = None) -> KClass:
    """(F₊)⋆F₋^⋆E by Atiyah-Bott localization on the common blow-up."""
    od = od or oracle_data(ctx)
    tilde, nv = od.tilde, ctx.nvars
    zero = (Fraction(0),) * ctx.git.r
    vals = []
    for p in ctx.plus.points:
        acc = CycloScalar.zero(nv)
        for q in tilde.points:
            if od.f_plus[q] != p[0]:
                continue
            v = E.at((od.f_minus[q], zero))
            if v.is_zero():
                continue
            acc = acc + v / euler_factor(tilde, q)
        vals.append(acc * euler_factor(ctx.plus, p))
    return KClass(ctx.plus, tuple(vals))


def oracle_matches(ctx: CrossingContext) -> dict:
    od = oracle_data(ctx)
    out = {}
    for delta, rho in ctx.minus_labels():
        e = structure_class(ctx.minus, delta, rho)
        out[(delta, rho)] = localization_oracle(ctx, e, od) == fm_transform(ctx, delta, rho)
    return out


def hand_product(ctx: CrossingContext, factors: Sequence[dict[int, int]]) -> KClass:
    """Π_f (1 − Π_i (S_i^+)^{f[i]}) as a plus-side class."""
    side = ctx.plus
    g = side.data
    one = KClass(side, tuple(CycloScalar.one(ctx.nvars) for _ in side.points))
    out = one
    for powers in factors:
        sym = L(g, (0,) * g.r)
        for i, k in sorted(powers.items()):
            sym = sym * S(g, i) ** k
        out = out * (one - kclass(side, sym))
    return out
