from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross import GitData, StabilityVector
from wallcross.checks import ifun_suite
from wallcross.errors import SectorMismatch
from wallcross.gitchambers import wall_crossing
from wallcross.ifun import (
    LinearRational,
    chart_transition,
    degree,
    enumerate_degrees,
    hyperg_factor,
    i_series,
    point_label,
    restrict_term,
    sector_label,
    support_dichotomy,
    telescoping_count,
)
from wallcross.stackgeom import fixed_points

F = Fraction
TPP = GitData.rank_one(1, 2)
RANK2 = GitData.lawrence([(1, 0), (1, 0), (0, 1)])


def degs(g, theta, bound):
    return [d.d for d in enumerate_degrees(g, theta, bound)]


def test_degree_enumeration():
    assert sorted(degs(TPP, (1,), 1)) == [(F(-1, 2),), (F(0),), (F(1, 2),)]
    assert sorted(degs(TPP, (1,), 2)) == [(F(k, 2),) for k in range(-2, 3)]
    assert degs(TPP, (-1,), F(1, 2)) == [(F(0),)]
    # every enumerated degree is integral on an anticone and obeys the bound
    for d in enumerate_degrees(RANK2, (1, 1), 1):
        assert all(abs(v) <= 1 for v in d.pairings)


def test_hyperg_factors():
    f = hyperg_factor(F(3, 2), 1)
    assert f.kind == "den" and f.a_values == (F(1, 2), F(3, 2))
    f = hyperg_factor(F(-2))
    assert f.kind == "num" and f.a_values == (F(-1), F(0))
    assert hyperg_factor(F(-1, 2)).kind == "one"
    assert hyperg_factor(0).count == 0


@given(st.fractions(min_value=-3, max_value=3, max_denominator=4), st.integers(1, 12))
def test_telescoping_matches_grid(v, mult):
    den = v.denominator * mult
    assert hyperg_factor(v).count == telescoping_count(v, den)


def test_linear_rational():
    names = ("x", "z")
    a = LinearRational.build(names, 2, [(2, 4)], [(1, 2)])
    assert a.coeff == 4 and not a.num and not a.den
    assert LinearRational.build(names, 1, [(0, 0)]).is_zero()
    with pytest.raises(ZeroDivisionError):
        LinearRational.build(names, 1, [], [(0, 0)])
    assert str(LinearRational.build(names, 1, [(1, -1)], [(1, F(1, 2))])) == "(x - z)/(x + 1/2*z)"


def test_identity_and_hand_terms():
    s = i_series(TPP, (1,), 2)
    terms = {t.degree.d: t for t in s.terms}
    assert terms[(F(0),)].is_identity_term()
    assert str(terms[(F(1, 2),)].value) == "(u4)/((u1 + 1/2*z)*(u2 + z))"
    assert str(terms[(F(1),)].value) == "(u3)*(u4)*(u4 - z)/((u1 + z)*(u2 + z)*(u2 + 2*z))"


def test_sector_labels():
    d = degree(TPP, (F(1, 2),))
    lab = sector_label(TPP, d, "minus")
    assert lab.fractions == (F(1, 2), 0, F(1, 2), 0)
    assert lab.age == 1
    assert sector_label(TPP, d, "plus").fractions == (F(1, 2), 0, F(1, 2), 0)
    assert point_label(TPP, ((2,), (F(1, 2),))).fractions == (F(1, 2), 0, F(1, 2), 0)


def test_support_and_sector_mismatch():
    s = i_series(TPP, (1,), 1)
    pts = fixed_points(TPP, (1,)).inertia_points()
    terms = {t.degree.d: t for t in s.terms}
    assert support_dichotomy(TPP, terms[(F(-1, 2),)], pts) == "vanishes"
    assert support_dichotomy(TPP, terms[(F(1, 2),)], pts) == "match"
    with pytest.raises(SectorMismatch):
        restrict_term(TPP, terms[(F(1, 2),)], ((1,), (F(0),)))
    v = restrict_term(TPP, terms[(F(0),)], ((1,), (F(0),)))
    assert v.coeff == 1 and not v.num


def test_chart_transition():
    ch = chart_transition(wall_crossing(TPP, (1,), (-1,)))
    assert ch.c == 1 and ch.c_i == ()
    assert ch.basis_plus == ((1,),) and ch.basis_minus == ((-1,),)
    ch2 = chart_transition(wall_crossing(RANK2, (1, 1), (-1, 1)))
    assert ch2.c > 0
    for d in enumerate_degrees(RANK2, (1, 1), 1):
        assert ch2.to_plus_coordinates(ch2.monomial(d, "minus")) == ch2.monomial(d, "plus")


@pytest.mark.parametrize("g,tp,tm", [(TPP, (1,), (-1,)), (RANK2, (1, 1), (-1, 1))])
def test_ifun_suite(g, tp, tm):
    checks = ifun_suite(g, StabilityVector(tp), StabilityVector(tm), bound=F(1))
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]
