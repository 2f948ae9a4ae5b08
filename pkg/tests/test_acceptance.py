"""Acceptance criteria 1-8, one printed PASS/FAIL line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from importlib import resources

import pytest

from wallcross import GitData, StabilityVector
from wallcross.checks import fgab_suite, upward_closed
from wallcross.cli import parse_input
from wallcross.eqk import R, block_determinant, hbar, kclass, make_side, structure_class
from wallcross.errors import NonGenericTheta, NotAdjacent, SameChamber
from wallcross.fmk import (
    crossing_context,
    fm_matrix,
    fm_transform,
    galois_report,
    hand_product,
    monodromy,
    oracle_matches,
    trivial_context,
)
from wallcross.gitchambers import tilde_data, validate, wall_crossing
from wallcross.ifun import (
    LinearRational,
    chart_transition,
    enumerate_degrees,
    hyperg_factor,
    i_series,
    matching_points,
    monomial_law_holds,
    restrict_term,
    telescoping_count,
)
from wallcross.stackgeom import fixed_points, hypertoric_ideal, stacky_fan

BUNDLED = ("tstar_p12", "atiyah", "rank2_flop", "extended_r2", "tstar_p13")
TPP = GitData.rank_one(1, 2)
F = Fraction


_capture = {}
LINES: list[str] = []


def report(num: int, ok: bool, detail: str = ""):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    LINES.append(line)
    cap = _capture.get("sys")
    if cap is None:
        print(line, flush=True)
    else:
        with cap.disabled():
            print("\n" + line, flush=True)
    return ok


@pytest.fixture(autouse=True)
def _show(capsys):
    _capture["sys"] = capsys
    yield
    _capture.pop("sys", None)


def load(name):
    spec = parse_input(name)
    return spec.git(), StabilityVector(spec.theta_plus), StabilityVector(spec.theta_minus)


def golden(name):
    return json.loads((resources.files("wallcross") / "data" / "goldens" / f"{name}.json").read_text())


def sets(A):
    return sorted(sorted(x) for x in A.minimal)


# 1 --------------------------------------------------------------------------


def test_criterion_1_tstar_p12_golden():
    gold = golden("tstar_p12")
    wc = wall_crossing(TPP, (1,), (-1,))
    td = tilde_data(wc)
    chart = chart_transition(wc)
    got = {
        "minimal_anticones_plus": sets(wc.anticones_plus),
        "minimal_anticones_minus": sets(wc.anticones_minus),
        "isotropy_orders_plus": list(fixed_points(TPP, (1,)).orders),
        "isotropy_orders_minus": list(fixed_points(TPP, (-1,)).orders),
        "hypertoric_ideal": hypertoric_ideal(TPP).as_strings(),
        "e": list(wc.e),
        "M_plus": sorted(wc.M_plus),
        "M_minus": sorted(wc.M_minus),
        "M_zero": sorted(wc.M_zero),
        "tilde_characters": [list(c) for c in td.characters],
        "top_cones_plus": sorted(sorted(c) for c in stacky_fan(TPP, (1,)).top_cones),
        "top_cones_minus": sorted(sorted(c) for c in stacky_fan(TPP, (-1,)).top_cones),
        "chart_c": str(chart.c),
        "chart_c_i": [str(x) for x in chart.c_i],
    }
    mism = [k for k in gold if got.get(k) != gold[k]]
    assert report(1, not mism, "exact match to goldens" if not mism else f"mismatch in {mism}")


# 2 --------------------------------------------------------------------------


def test_criterion_2_fm_exactness():
    ctx = crossing_context(TPP, (1,), (-1,))
    img = fm_transform(ctx, (3,), (0,))
    hand = hand_product(ctx, [{4: 1}, {3: 1, 1: 1}, {3: 2, 2: 1}])
    m = fm_matrix(ctx)
    det_ok = not m.determinant().is_zero()
    ok = img == hand and det_ok and (len(m.rows), len(m.cols)) == (3, 3)
    assert report(2, ok, f"image == hand product: {img == hand}; 3x3 det nonzero: {det_ok}")


# 3 --------------------------------------------------------------------------


def random_rank_one(rng: random.Random):
    n = rng.choice((2, 3))
    half = [rng.choice((1, 2, 3)) for _ in range(n)]
    return tuple(half)


def test_criterion_3_galois_invariance():
    rng = random.Random(20240611)
    data = [(1, 2)] + [random_rank_one(rng) for _ in range(6)] + [(1, 3), (2, 3)]
    seen_l, bad = set(), []
    for half in data:
        ctx = crossing_context(GitData.rank_one(*half), (1,), (-1,))
        seen_l |= {c.l for c in ctx.cases.values()}
        rep = galois_report(ctx)
        if not all(v["descends"] and v["branch_identical"] for v in rep.values()):
            bad.append(half)
    # the named case delta- = {4} with l = 2
    ctx = crossing_context(TPP, (1,), (-1,))
    named = ctx.cases[(4,)].l == 2
    ok = not bad and named and seen_l >= {1, 2, 3}
    assert report(3, ok, f"{len(data)} rank-1 data, l values {sorted(seen_l)}, failures {bad}")


# 4 --------------------------------------------------------------------------


def test_criterion_4_oracle_equivalence():
    results = {}
    for name in ("atiyah", "rank2_flop"):
        g, tp, tm = load(name)
        res = oracle_matches(crossing_context(g, tp, tm))
        results[name] = (sum(res.values()), len(res))
    ok = all(a == b and b > 0 for a, b in results.values())
    assert report(4, ok, ", ".join(f"{k}: {a}/{b}" for k, (a, b) in results.items()))


# 5 --------------------------------------------------------------------------


def test_criterion_5_ring_relations():
    failures = []
    for name in BUNDLED:
        g, tp, tm = load(name)
        for tag, th in (("plus", tp), ("minus", tm)):
            side = make_side(g, th, tag)
            h = kclass(side, hbar(g))
            for i in range(1, g.n + 1):
                if kclass(side, R(g, i)) * kclass(side, R(g, g.n + i)) != h:
                    failures.append(f"{name}/{tag}: R{i}R{g.n + i}")
            for fp in side.atlas:
                for rho_lab in [lab for lab in side.atlas.labels() if lab[0] == fp.delta]:
                    e = structure_class(side, *rho_lab)
                    for pt in side.points:
                        if pt[0] != fp.delta and not e.at(pt).is_zero():
                            failures.append(f"{name}/{tag}: e{rho_lab} at {pt[0]}")
                if block_determinant(side, fp.delta).is_zero():
                    failures.append(f"{name}/{tag}: block {fp.delta}")
    assert report(5, not failures, f"{len(BUNDLED)} data, both sides" if not failures else "; ".join(failures[:5]))


# 6 --------------------------------------------------------------------------


def test_criterion_6_monodromy():
    notes, ok = [], True
    for name in ("tstar_p12", "atiyah"):
        g, tp, tm = load(name)
        m = monodromy(crossing_context(g, tp, tm))
        inv = not m.determinant().is_zero()
        ok &= inv and not m.is_identity()
        notes.append(f"{name}: invertible={inv}, identity={m.is_identity()}")
    triv = monodromy(trivial_context(TPP, (1,)))
    ok &= triv.is_identity()
    notes.append(f"all-shared: identity={triv.is_identity()}")
    assert report(6, ok, "; ".join(notes))


# 7 --------------------------------------------------------------------------


def test_criterion_7_ifunction():
    s = i_series(TPP, (1,), 2)
    by_deg = {t.degree.d: t for t in s.terms}
    zero = by_deg[(F(0),)]
    names = s.u_names  # u1..u4, z
    half = LinearRational.build(names, 1, [(0, 0, 0, 1, 0)], [(0, 1, 0, 0, 1), (1, 0, 0, 0, F(1, 2))])
    one = LinearRational.build(
        names,
        1,
        [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 1, -1)],
        [(1, 0, 0, 0, 1), (0, 1, 0, 0, 1), (0, 1, 0, 0, 2)],
    )
    hand_ok = by_deg[(F(1, 2),)].value == half and by_deg[(F(1),)].value == one

    tele_bad = []
    for q in range(1, 5):
        for p in range(-3 * q, 3 * q + 1):
            v = F(p, q)
            if hyperg_factor(v).count != telescoping_count(v):
                tele_bad.append(v)

    neg = by_deg[(F(-1, 2),)]
    pts = fixed_points(TPP, (1,)).inertia_points()
    matches = matching_points(TPP, neg, pts)
    vanish = bool(matches) and all(restrict_term(TPP, neg, pt, s.ext).is_zero() for pt in matches)

    ok = zero.is_identity_term() and hand_ok and not tele_bad and vanish
    assert report(
        7,
        ok,
        f"d=0 is 1: {zero.is_identity_term()}; hand terms: {hand_ok}; telescoping misses: {len(tele_bad)}; "
        f"degree -1/2 vanishes on {len(matches)} points: {vanish}",
    )


# 8 --------------------------------------------------------------------------


def random_lawrence_pairs(rng: random.Random, count: int):
    """Random rank-1 and rank-2 Lawrence data with an adjacent chamber pair."""
    out = []
    while len(out) < count:
        r = rng.choice((1, 2))
        n = rng.choice((2, 3)) if r == 1 else 3
        half = [tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(n)]
        if any(not any(v) for v in half):
            continue
        g = GitData.lawrence(half)
        if r == 1:
            thetas = ((1,), (-1,))
        else:
            k = rng.randrange(n)
            d = half[k]
            normal = (-d[1], d[0])
            small = F(1, 97)
            thetas = (
                tuple(F(a) + small * b for a, b in zip(d, normal)),
                tuple(F(a) - small * b for a, b in zip(d, normal)),
            )
        try:
            if not all(validate(g, StabilityVector(t)).ok for t in thetas):
                continue
            wall_crossing(g, *thetas)
        except (NotAdjacent, SameChamber, NonGenericTheta):
            continue
        out.append((g, thetas))
    return out


def test_criterion_8_combinatorics():
    notes, ok = [], True
    rng = random.Random(8)
    cases = [load(name) for name in BUNDLED]
    cases = [(g, (tp.value, tm.value)) for g, tp, tm in cases] + random_lawrence_pairs(rng, 12)

    closure = all(upward_closed(g, th)[0] for g, ths in cases if g.N <= 8 for th in ths)
    ok &= closure
    notes.append(f"upward closure on {sum(g.N <= 8 for g, _ in cases)} data: {closure}")

    balance = True
    for g, (tp, tm) in cases:
        wc = wall_crossing(g, tp, tm)
        lp = [i for i in wc.M_plus if i <= 2 * g.n]
        lm = [i for i in wc.M_minus if i <= 2 * g.n]
        balance &= len(lp) == len(lm)
    ok &= balance
    notes.append(f"|M+| = |M-|: {balance}")

    roundtrip = all(c.ok for g, _ in cases for c in fgab_suite(g))
    ok &= roundtrip
    notes.append(f"gale roundtrip: {roundtrip}")

    law = True
    for g, (tp, tm) in cases:
        ch = chart_transition(wall_crossing(g, tp, tm))
        degs = enumerate_degrees(g, tp, 1) + enumerate_degrees(g, tm, 1)
        law &= monomial_law_holds(ch, degs) and ch.c > 0
    tpp = chart_transition(wall_crossing(TPP, (1,), (-1,)))
    inverse = tpp.c == 1 and all(
        tpp.to_plus_coordinates(tpp.monomial(d, "minus")) == tuple(-x for x in tpp.monomial(d, "minus"))
        for d in enumerate_degrees(TPP, (1,), 2)
    )
    ok &= law and inverse
    notes.append(f"chart law: {law}; T*P(1,2) c = {tpp.c}, y~ = 1/y: {inverse}")
    assert report(8, ok, "; ".join(notes))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
