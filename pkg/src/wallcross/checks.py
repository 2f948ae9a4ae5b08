"""Invariant suites, one per module, shared by ``wallcross verify`` and the tests.

Each suite returns an ordered list of ``Check`` records; nothing raises on a
violated property.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import polyhedra as ph
from .errors import OrbifoldUnsupported, WallcrossError
from .fgab import IntMatrix, gale_dual, hnf_canonical
from .gitchambers import (
    GitData,
    angle_contains,
    anticone_set,
    as_theta,
    span_rank,
    tilde_data,
    wall_crossing,
)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


def _guard(name, fn) -> Check:
    try:
        res = fn()
    except WallcrossError as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    if isinstance(res, tuple):
        return Check(name, bool(res[0]), str(res[1]))
    return Check(name, bool(res))


def fgab_suite(g: GitData, *_):
    from .stackgeom import reconstruct_beta

    def roundtrip():
        group, beta = reconstruct_beta(g)
        D = gale_dual(beta, group)
        return D == hnf_canonical(IntMatrix.from_columns(g.characters, g.r)), f"N = {group}"

    return [_guard("fgab.gale_roundtrip", roundtrip)]


def upward_closed(g, theta, max_n: int = 8) -> tuple[bool, str]:
    """Exhaustive: I ∈ 𝒜 and I ⊆ J imply J ∈ 𝒜, using the angle test directly."""
    if g.N > max_n:
        return True, f"skipped (N = {g.N} > {max_n})"
    theta = as_theta(theta)
    subsets = [frozenset(c) for k in range(g.N + 1) for c in combinations(range(1, g.N + 1), k)]
    member = {I: angle_contains(g, I, theta) for I in subsets}
    A = anticone_set(g, theta)
    for I in subsets:
        if member[I] != (I in A):
            return False, f"membership predicate disagrees at {sorted(I)}"
        if member[I]:
            for j in range(1, g.N + 1):
                if not member[I | {j}]:
                    return False, f"{sorted(I)} is an anticone but {sorted(I | {j})} is not"
    return True, f"{len(subsets)} subsets"


def theta_zero_property(g, wc) -> tuple[bool, str]:
    Ap, Am = wc.anticones_plus, wc.anticones_minus
    for k in range(1, g.N + 1):
        for c in combinations(range(1, g.N + 1), k):
            I = frozenset(c)
            both = I in Ap and I in Am
            if span_rank(g, I) == g.r and angle_contains(g, I, wc.theta_zero) and not both:
                return False, f"theta0 in the angle of {sorted(I)} outside both chambers"
            if both and not ph.in_closed_cone([g.char(i) for i in sorted(I)], wc.theta_zero.value):
                return False, f"theta0 not in the closed angle of common anticone {sorted(I)}"
    return True, "ok"


def chamber_suite(g: GitData, theta_plus, theta_minus=None):
    out = [_guard("gitchambers.upward_closure_plus", lambda: upward_closed(g, theta_plus))]
    if theta_minus is None:
        return out
    out.append(_guard("gitchambers.upward_closure_minus", lambda: upward_closed(g, theta_minus)))

    def balance():
        wc = wall_crossing(g, theta_plus, theta_minus)
        lp = [i for i in wc.M_plus if i <= 2 * g.n]
        lm = [i for i in wc.M_minus if i <= 2 * g.n]
        return len(lp) == len(lm), f"|M+| = {len(lp)}, |M-| = {len(lm)} on Lawrence indices"

    def antisym():
        a = wall_crossing(g, theta_plus, theta_minus)
        b = wall_crossing(g, theta_minus, theta_plus)
        return a.e == tuple(-x for x in b.e) and a.M_plus == b.M_minus, f"e = {a.e}"

    def tilde_sides():
        wc = wall_crossing(g, theta_plus, theta_minus)
        td = tilde_data(wc)
        full = g.N + 1
        ok = True
        for th, A in ((td.theta_plus, wc.anticones_plus), (td.theta_minus, wc.anticones_minus)):
            mins = {d - {full} for d in anticone_set(td, th).minimal}
            ok &= mins == set(A.minimal)
        return ok, "tilde chambers reproduce both sides"

    out += [
        _guard("gitchambers.lawrence_balance", balance),
        _guard("gitchambers.e_antisymmetry", antisym),
        _guard("gitchambers.theta0_angles", lambda: theta_zero_property(g, wall_crossing(g, theta_plus, theta_minus))),
        _guard("gitchambers.tilde_reproduces_sides", tilde_sides),
    ]
    return out


def stackgeom_suite(g: GitData, theta_plus, theta_minus=None):
    from .stackgeom import fixed_points, hypertoric_ideal, reduced_lattice, stacky_fan

    def spans():
        at = fixed_points(g, theta_plus)
        return all(span_rank(g, p.delta) == g.r for p in at), f"orders {at.orders}"

    def ideal_rank():
        gens = hypertoric_ideal(g).generators
        lat = reduced_lattice(g)
        rows = [[ph.dot(g.char(i), x) for i in range(1, g.N + 1)] for x in lat]
        return ph.rank(gens) == ph.rank(rows) == len(lat) or not lat, f"{len(gens)} generators"

    def fan_rays():
        f = stacky_fan(g, theta_plus)
        return f.rays_ok, f"support flags {list(f.support_flags)}"

    out = [
        _guard("stackgeom.minimal_anticones_span", spans),
        _guard("stackgeom.ideal_rank", ideal_rank),
        _guard("stackgeom.fan_rays", fan_rays),
    ]
    if theta_minus is not None:
        def sizes():
            a, b = fixed_points(g, theta_plus).size, fixed_points(g, theta_minus).size
            return a == b, f"{a} vs {b}"
        out.append(_guard("stackgeom.basis_sizes_match", sizes))
    return out


def eqk_suite(g: GitData, theta_plus, theta_minus=None):
    from .eqk import L, kclass, make_side, verify_relations

    out = []
    for tag, th in (("plus", theta_plus), ("minus", theta_minus)):
        if th is None:
            continue

        def rel(th=th, tag=tag):
            rep = verify_relations(g, th, tag)
            return rep.ok, f"{len(rep.vanishing)} vanishing sets, J {all(ok for _, ok in rep.j_relations)}"

        def hom(th=th, tag=tag):
            side = make_side(g, th, tag)
            ok = True
            for i in range(1, g.N + 1):
                for j in range(i, g.N + 1):
                    p, q = g.char(i), g.char(j)
                    s = tuple(a + b for a, b in zip(p, q))
                    ok &= kclass(side, L(g, p)) * kclass(side, L(g, q)) == kclass(side, L(g, s))
            return ok, "L(p)L(q) = L(p+q)"

        out.append(_guard(f"eqk.relations_{tag}", rel))
        out.append(_guard(f"eqk.homomorphism_{tag}", hom))
    return out


def fmk_suite(g: GitData, theta_plus, theta_minus=None, with_monodromy: bool = True):
    if theta_minus is None:
        return []
    from .fmk import crossing_context, fm_matrix, fm_transform, fm_transform_projected, galois_report, monodromy, oracle_matches

    ctx_box = {}

    def ctx():
        if "c" not in ctx_box:
            ctx_box["c"] = crossing_context(g, theta_plus, theta_minus)
        return ctx_box["c"]

    def galois():
        rep = galois_report(ctx())
        ok = all(v["descends"] and v["branch_identical"] for v in rep.values())
        return ok, f"{len(rep)} flopped classes, M_base = {ctx().M_base}"

    def projection():
        c = ctx()
        return all(fm_transform(c, *lab) == fm_transform_projected(c, *lab) for lab in c.minus_labels()), "root-free route agrees"

    def invertible():
        m = fm_matrix(ctx())
        return not m.determinant().is_zero(), f"{len(m.rows)}x{len(m.cols)}"

    def y_vs_x():
        c = ctx()
        return fm_matrix(c, "X") == fm_matrix(c, "Y"), "ambient and core routes agree"

    def oracle():
        try:
            res = oracle_matches(ctx())
        except OrbifoldUnsupported as exc:
            return True, f"skipped: {exc}"
        return all(res.values()), f"{len(res)} classes"

    out = [
        _guard("fmk.galois_and_branch", galois),
        _guard("fmk.projection_route", projection),
        _guard("fmk.invertible", invertible),
        _guard("fmk.core_vs_ambient", y_vs_x),
        _guard("fmk.oracle", oracle),
    ]
    if with_monodromy:
        def mono():
            m = monodromy(ctx())
            return not m.determinant().is_zero(), "identity" if m.is_identity() else "nontrivial"
        out.append(_guard("fmk.monodromy_invertible", mono))
    return out


def ifun_suite(g: GitData, theta_plus, theta_minus=None, bound=Fraction(1), sector_sign: str = "minus"):
    from .ifun import (
        chart_transition,
        enumerate_degrees,
        hyperg_factor,
        i_series,
        monomial_law_holds,
        support_dichotomy,
        telescoping_count,
    )
    from .stackgeom import fixed_points

    def identity_term():
        s = i_series(g, theta_plus, bound, sector_sign=sector_sign)
        zero = [t for t in s.terms if not any(t.degree.d)]
        return len(zero) == 1 and zero[0].is_identity_term(), "d = 0 term"

    def telescoping():
        degs = enumerate_degrees(g, theta_plus, bound)
        for d in degs:
            for v in d.pairings:
                if hyperg_factor(v).count != telescoping_count(v):
                    return False, f"pairing {v}"
        return True, f"{len(degs)} degrees"

    def dichotomy():
        s = i_series(g, theta_plus, bound, sector_sign=sector_sign)
        pts = fixed_points(g, theta_plus).inertia_points()
        bad = [t.degree.d for t in s.terms if support_dichotomy(g, t, pts, s.ext) == "none"]
        return not bad, f"{len(s.terms)} terms"

    out = [
        _guard("ifun.identity_term", identity_term),
        _guard("ifun.telescoping", telescoping),
        _guard("ifun.support_dichotomy", dichotomy),
    ]
    if theta_minus is not None:
        def chart():
            wc = wall_crossing(g, theta_plus, theta_minus)
            ch = chart_transition(wc)
            degs = enumerate_degrees(g, theta_plus, bound) + enumerate_degrees(g, theta_minus, bound)
            return monomial_law_holds(ch, degs) and ch.c > 0, f"c = {ch.c}, c_i = {[str(x) for x in ch.c_i]}"
        out.append(_guard("ifun.chart_law", chart))
    return out


SUITES = {
    "fgab": fgab_suite,
    "gitchambers": chamber_suite,
    "stackgeom": stackgeom_suite,
    "eqk": eqk_suite,
    "fmk": fmk_suite,
    "ifun": ifun_suite,
}


def run_suite(name: str, g: GitData, theta_plus, theta_minus=None, **kw) -> list[Check]:
    fn = SUITES[name]
    if name == "ifun":
        return fn(g, theta_plus, theta_minus, **kw)
    return fn(g, theta_plus, theta_minus)
