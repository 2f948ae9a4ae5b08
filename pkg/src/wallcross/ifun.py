"""Truncated equivariant I-function series and the moduli chart transition.

Terms are kept exact and unsummed.  Each term records its degree d, the
monomial 𝗒^d as an exponent vector over the side's ordered basis
(𝗉_1, …, 𝗉_r), the telescoped hypergeometric factor of every index, and
the sector label of 1_{[-d]}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Sequence

from . import polyhedra as ph
from .errors import BasisNotAdapted, SectorMismatch
from .fgab import IntMatrix, hermite_rows, reduce_mod_lattice, smith_normal_form
from .gitchambers import GitData, WallCrossingData, anticone_set, as_theta, extended_set

F0 = Fraction(0)


def frac(x) -> Fraction:
    x = Fraction(x)
    return x - floor(x)


# linear-factored rational functions -----------------------------------------


@dataclass(frozen=True)
class LinearRational:
    """coeff · Π num / Π den, every factor a linear form with leading coefficient 1.

    Forms are coefficient tuples over a fixed variable list ``names``.
    """

    names: tuple[str, ...]
    coeff: Fraction
    num: tuple[tuple[Fraction, ...], ...] = ()
    den: tuple[tuple[Fraction, ...], ...] = ()

    @classmethod
    def build(cls, names, coeff, num=(), den=()) -> LinearRational:
        coeff = Fraction(coeff)
        nums, dens = [], []
        for form in num:
            form = tuple(Fraction(x) for x in form)
            lead = next((x for x in form if x), None)
            if lead is None:
                return cls(tuple(names), F0)
            coeff *= lead
            nums.append(tuple(x / lead for x in form))
        for form in den:
            form = tuple(Fraction(x) for x in form)
            lead = next((x for x in form if x), None)
            if lead is None:
                raise ZeroDivisionError("vanishing denominator factor")
            coeff /= lead
            dens.append(tuple(x / lead for x in form))
        if coeff == 0:
            return cls(tuple(names), F0)
        for f in list(nums):
            if f in dens:
                nums.remove(f)
                dens.remove(f)
        return cls(tuple(names), coeff, tuple(sorted(nums)), tuple(sorted(dens)))

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other: LinearRational) -> LinearRational:
        return LinearRational.build(self.names, self.coeff * other.coeff, self.num + other.num, self.den + other.den)

    def substitute(self, images: dict[str, tuple[Fraction, ...]], names: Sequence[str]) -> LinearRational:
        """Replace each variable by a linear form over ``names``."""
        def sub(form):
            out = [F0] * len(names)
            for c, v in zip(form, self.names):
                if c:
                    for k, x in enumerate(images[v]):
                        out[k] += c * x
            return tuple(out)

        return LinearRational.build(names, self.coeff, [sub(f) for f in self.num], [sub(f) for f in self.den])

    @staticmethod
    def form_str(form, names) -> str:
        parts = []
        for c, v in zip(form, names):
            if not c:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("-" if c < 0 else "+", mag + v))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, p in parts[1:]:
            s += f" {sign} {p}"
        return s

    def __str__(self):
        if self.coeff == 0:
            return "0"
        def order(f):
            # by leading variable, then the rest of the form
            lead = next(k for k, x in enumerate(f) if x)
            return (lead, tuple(abs(x) for x in f), f)

        num = "*".join(f"({self.form_str(f, self.names)})" for f in sorted(self.num, key=order))
        dens = [f"({self.form_str(f, self.names)})" for f in sorted(self.den, key=order)]
        head = str(self.coeff) if (self.coeff != 1 or not num) else ""
        s = head + ("*" if head and num else "") + num
        if not dens:
            return s
        return s + "/" + (dens[0] if len(dens) == 1 else "(" + "*".join(dens) + ")")


# degrees and factors ---------------------------------------------------------


@dataclass(frozen=True)
class RationalDegree:
    d: tuple[Fraction, ...]
    pairings: tuple[Fraction, ...]

    def integrality_set(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.pairings, 1) if v.denominator == 1)


def degree(g, d: Sequence) -> RationalDegree:
    d = tuple(Fraction(x) for x in d)
    return RationalDegree(d, tuple(ph.dot(g.char(i), d) for i in range(1, g.N + 1)))


def enumerate_degrees(g: GitData, theta, bound) -> list[RationalDegree]:
    """All d ∈ 𝕂_θ with |D_i·d| ≤ bound for every i, sorted by pairings.

    Any such d is integral on some minimal anticone δ, hence d = A_δ^{-1}k with
    |k| ≤ bound, which makes the scan finite and complete.
    """
    B = Fraction(bound)
    A = anticone_set(g, theta)
    kmax = floor(B)
    found = {}
    for delta in A.minimal:
        rows = [g.char(i) for i in sorted(delta)]
        Ainv = ph.inverse([list(r) for r in rows]) if g.r else []
        for k in product(range(-kmax, kmax + 1), repeat=len(rows)):
            d = tuple(sum(Ainv[a][b] * k[b] for b in range(g.r)) for a in range(g.r))
            deg = degree(g, d)
            if any(abs(v) > B for v in deg.pairings):
                continue
            if deg.integrality_set() not in A:
                continue
            found[deg.pairings] = deg
    return [found[k] for k in sorted(found)]


@dataclass(frozen=True)
class HypFactor:
    """Telescoped factor of index j: Π_{a} (u_j + a z) in the numerator or denominator."""

    j: int
    value: Fraction
    kind: str  # "num", "den" or "one"
    a_values: tuple[Fraction, ...]

    @property
    def count(self) -> int:
        return len(self.a_values)


def hyperg_factor(v, j: int = 0) -> HypFactor:
    v = Fraction(v)
    if v > 0:
        a_vals = []
        a = v
        while a > 0:
            a_vals.append(a)
            a -= 1
        return HypFactor(j, v, "den", tuple(sorted(a_vals)))
    if v < 0:
        a_vals = []
        a = v + 1
        while a <= 0:
            a_vals.append(a)
            a += 1
        return HypFactor(j, v, "num" if a_vals else "one", tuple(sorted(a_vals)))
    return HypFactor(j, v, "one", ())


def telescoping_count(v, grid_den: int = 0) -> int:
    """Brute-force |{a : ⟨a⟩ = ⟨v⟩, a ∈ (min(0,v), max(0,v)]}| on the grid (1/den)ℤ."""
    v = Fraction(v)
    den = grid_den or v.denominator
    lo, hi = min(F0, v), max(F0, v)
    n = 0
    k = floor(lo * den) - 1
    while Fraction(k, den) <= hi:
        a = Fraction(k, den)
        if lo < a <= hi and frac(a) == frac(v):
            n += 1
        k += 1
    return n


# sector labels ---------------------------------------------------------------


@dataclass(frozen=True)
class SectorLabel:
    fractions: tuple[Fraction, ...]
    n_lawrence: int

    @property
    def age(self) -> Fraction:
        return sum(self.fractions[: self.n_lawrence], F0)


def sector_label(g, deg: RationalDegree, sign: str = "minus") -> SectorLabel:
    s = -1 if sign == "minus" else 1
    return SectorLabel(tuple(frac(s * v) for v in deg.pairings), 2 * g.n)


def point_label(g, pt) -> SectorLabel:
    delta, ghat = pt
    return SectorLabel(tuple(frac(ph.dot(g.char(i), ghat)) for i in range(1, g.N + 1)), 2 * g.n)


# chart transition -------------------------------------------------------------


@dataclass(frozen=True)
class ModuliChartTransition:
    basis_plus: tuple[tuple[int, ...], ...]
    basis_minus: tuple[tuple[int, ...], ...]
    c_i: tuple[Fraction, ...]
    c: Fraction

    def monomial(self, deg: RationalDegree, side: str = "plus") -> tuple[Fraction, ...]:
        basis = self.basis_plus if side == "plus" else self.basis_minus
        return tuple(ph.dot(p, deg.d) for p in basis)

    def to_plus_coordinates(self, minus_exps: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Rewrite Π ỹ_i^{a_i} in the 𝗒 coordinates via ỹ_i = y_i y_r^{c_i}, ỹ_r = y_r^{-c}."""
        r = len(minus_exps)
        out = list(minus_exps[: r - 1]) + [F0]
        out[r - 1] = sum((ci * a for ci, a in zip(self.c_i, minus_exps[: r - 1])), F0) - self.c * minus_exps[r - 1]
        return tuple(out)


def _solve_pairing(e: Sequence[int], target: int) -> tuple[int, ...]:
    snf = smith_normal_form(IntMatrix.from_rows([e], len(e)))
    # e = U·S·V with S = (s, 0, …); x = V^{-1}·(target·U^{-1}/s, 0, …)
    s = snf.diagonal[0]
    u = snf.U_inv.rows[0][0]
    if (target * u) % s:
        raise BasisNotAdapted("no lattice vector with the requested pairing")
    y = [target * u // s] + [0] * (len(e) - 1)
    return snf.V_inv.apply(y)


def chart_transition(wc: WallCrossingData) -> ModuliChartTransition:
    r = wc.git.r
    wall = [tuple(p) for p in wc.wall_basis]
    hnf = hermite_rows(wall, r) if wall else []
    p_plus = reduce_mod_lattice(_solve_pairing(wc.e, 1), hnf)
    p_minus = reduce_mod_lattice(_solve_pairing(wc.e, -1), hnf)
    basis_plus = tuple(wall) + (p_plus,)
    basis_minus = tuple(wall) + (p_minus,)
    # p_r^+ = Σ c_i p_i − c·p_r^−
    cols = [list(v) for v in wall] + [[-x for x in p_minus]]
    A = [[cols[j][k] for j in range(len(cols))] for k in range(r)]
    sol = ph.solve(A, list(p_plus))
    if sol is None or sol[-1] <= 0:
        raise BasisNotAdapted("ordered bases are not wall-adapted")
    return ModuliChartTransition(basis_plus, basis_minus, tuple(sol[:-1]), sol[-1])


# series ----------------------------------------------------------------------


@dataclass(frozen=True)
class ISeriesTerm:
    degree: RationalDegree
    monomial: tuple[Fraction, ...]
    factors: tuple[HypFactor, ...]
    sector: SectorLabel
    value: LinearRational

    def is_identity_term(self) -> bool:
        return (
            not any(self.degree.d)
            and not any(self.monomial)
            and all(f.kind == "one" for f in self.factors)
            and not any(self.sector.fractions)
            and self.value.coeff == 1
            and not self.value.num
            and not self.value.den
        )


@dataclass(frozen=True)
class Sigma:
    """σ = θ(Σ 𝗉_i log 𝗒_i) + c_0, kept symbolic; c_0 is an opaque constant."""

    basis: tuple[tuple[int, ...], ...]
    c0: str = "c0"
    c0_value: Fraction = F0


@dataclass(frozen=True)
class ISeries:
    side: str
    bound: Fraction
    sector_sign: str
    terms: tuple[ISeriesTerm, ...]
    sigma: Sigma
    u_names: tuple[str, ...]
    ext: frozenset[int]


def u_names(g) -> tuple[str, ...]:
    return tuple(f"u{j}" for j in range(1, g.N + 1)) + ("z",)


def term_value(g, deg: RationalDegree, ext: frozenset[int]) -> tuple[tuple[HypFactor, ...], LinearRational]:
    names = u_names(g)
    z = len(names) - 1
    nums, dens, factors = [], [], []
    for j, v in enumerate(deg.pairings, 1):
        hf = hyperg_factor(v, j)
        factors.append(hf)
        for a in hf.a_values:
            form = [F0] * len(names)
            if j not in ext:
                form[j - 1] = Fraction(1)
            form[z] = a
            (nums if hf.kind == "num" else dens).append(form)
    return tuple(factors), LinearRational.build(names, 1, nums, dens)


def i_series(
    g: GitData,
    theta,
    bound,
    chart: ModuliChartTransition | None = None,
    side: str = "plus",
    sector_sign: str = "minus",
) -> ISeries:
    theta = as_theta(theta)
    ext = extended_set(g, theta)
    basis = None
    if chart is not None:
        basis = chart.basis_plus if side == "plus" else chart.basis_minus
    else:
        basis = tuple(tuple(int(i == j) for j in range(g.r)) for i in range(g.r))
    terms = []
    for deg in enumerate_degrees(g, theta, bound):
        factors, value = term_value(g, deg, ext)
        mono = tuple(ph.dot(p, deg.d) for p in basis)
        terms.append(ISeriesTerm(deg, mono, factors, sector_label(g, deg, sector_sign), value))
    return ISeries(side, Fraction(bound), sector_sign, tuple(terms), Sigma(basis), u_names(g), ext)


def lambda_names(g) -> tuple[str, ...]:
    return tuple(f"l{k}" for k in range(1, g.m + 1)) + ("h", "z")


def u_restriction(g, pt, ext: frozenset[int]) -> dict[str, tuple[Fraction, ...]]:
    """u_j|_δ as linear forms over (λ_1, …, λ_m, λ, z)."""
    delta = tuple(pt[0])
    width = g.m + 2
    cols = [g.char(i) for i in delta]
    A = [[cols[j][k] for j in range(len(cols))] for k in range(g.r)]
    out = {}
    for j in range(1, g.N + 1):
        if j in delta or j in ext:
            out[f"u{j}"] = (F0,) * width
            continue
        c = ph.solve(A, list(g.char(j))) if g.r else ()
        form = [Fraction(x) for x in g.twist(j)] + [F0]
        for ci, i in zip(c, delta):
            for k, w in enumerate(g.twist(i)):
                form[k] -= ci * w
        out[f"u{j}"] = tuple(form)
    out["z"] = (F0,) * (width - 1) + (Fraction(1),)
    return out


def restrict_term(g, term: ISeriesTerm, pt, ext: frozenset[int] = frozenset(), sector_sign: str = "minus") -> LinearRational:
    label = point_label(g, pt)
    if label.fractions != term.sector.fractions:
        raise SectorMismatch(f"term sector {term.sector.fractions} vs point {label.fractions}")
    return term.value.substitute(u_restriction(g, pt, ext), lambda_names(g))


def matching_points(g, term: ISeriesTerm, points) -> list:
    return [pt for pt in points if point_label(g, pt).fractions == term.sector.fractions]


def support_dichotomy(g, term: ISeriesTerm, points, ext=frozenset()) -> str:
    """'match' if some inertia point carries the term's sector and the term is
    nonzero there, 'vanishes' if every matching restriction is zero, 'none'
    if no point carries the sector."""
    pts = matching_points(g, term, points)
    if not pts:
        return "none"
    vals = [restrict_term(g, term, pt, ext) for pt in pts]
    return "vanishes" if all(v.is_zero() for v in vals) else "match"


def monomial_law_holds(chart: ModuliChartTransition, degrees: Sequence[RationalDegree]) -> bool:
    return all(chart.to_plus_coordinates(chart.monomial(d, "minus")) == chart.monomial(d, "plus") for d in degrees)


def wall_side_theta(wc: WallCrossingData, side: str):
    return wc.theta_plus if side == "plus" else wc.theta_minus
