from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross import GitData, StabilityVector
from wallcross.checks import eqk_suite
from wallcross.cyclotomic import Cyclo, Unit
from wallcross.eqk import (
    L,
    R,
    S,
    block_determinant,
    euler_factor,
    hbar,
    kclass,
    kconst,
    make_side,
    restrict_unit,
    structure_basis,
    structure_class,
    verify_relations,
)
from wallcross.errors import SideMismatch

F = Fraction
TPP = GitData.rank_one(1, 2)
RANK2 = GitData.lawrence([(1, 0), (1, 0), (0, 1)])


def test_restriction_at_twisted_sector():
    # R_1 at (delta = {2}, g = 1/2): D_1 = D_2 / 2, so the phase is 1/2 and
    # the twist is l1 - l2/2
    u = restrict_unit(TPP, R(TPP, 1), ((2,), (F(1, 2),)))
    assert u == Unit(F(1, 2), (F(1), F(-1, 2), F(0)))
    assert u.as_scalar() == -Unit.monomial((1, F(-1, 2), 0)).as_scalar()


def test_restriction_on_fixed_generator_is_trivial():
    # R_j restricted to a point with j in delta is 1
    assert restrict_unit(TPP, R(TPP, 2), ((2,), (F(1, 2),))).is_one()
    assert restrict_unit(TPP, R(TPP, 1), ((1,), (F(0),))).is_one()


def test_hbar_and_pairs():
    side = make_side(TPP, (1,))
    h = kclass(side, hbar(TPP))
    for i in (1, 2):
        assert kclass(side, R(TPP, i)) * kclass(side, R(TPP, i + 2)) == h
    assert kclass(side, R(TPP, 1)) * kclass(side, S(TPP, 1)) == kconst(side, 1)


points = st.sampled_from(make_side(TPP, (1,)).points + make_side(TPP, (-1,)).points)
chars = st.tuples(st.integers(-4, 4))


@given(chars, chars, points)
def test_restriction_homomorphism(p, q, pt):
    s = tuple(a + b for a, b in zip(p, q))
    assert restrict_unit(TPP, L(TPP, p), pt) * restrict_unit(TPP, L(TPP, q), pt) == restrict_unit(TPP, L(TPP, s), pt)


rank2_points = st.sampled_from(make_side(RANK2, (1, 1)).points)


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(1, 6), rank2_points)
def test_restriction_of_powers(p, k, pt):
    assert restrict_unit(RANK2, L(RANK2, p) ** k, pt) == restrict_unit(RANK2, L(RANK2, p), pt) ** k


def test_structure_classes_supported_on_their_point():
    side = make_side(TPP, (1,))
    basis = structure_basis(side)
    assert len(basis) == 3
    for (delta, rho), e in basis:
        for pt in side.points:
            assert e.at(pt).is_zero() == (pt[0] != delta)
        assert not block_determinant(side, delta).is_zero()


def test_euler_factor_matches_trivial_structure_class():
    side = make_side(TPP, (-1,))
    for pt in side.points:
        assert structure_class(side, pt[0], (0,)).at(pt) == euler_factor(side, pt)


def test_side_mismatch():
    a = kconst(make_side(TPP, (1,), "plus"), 1)
    b = kconst(make_side(TPP, (-1,), "minus"), 1)
    with pytest.raises(SideMismatch):
        a + b


def test_descent_of_classes():
    side = make_side(TPP, (1,))
    e = structure_class(side, (2,), (1,))
    assert e.descends_to(2)
    assert side.M == 2


def test_relation_report():
    rep = verify_relations(TPP, (1,))
    assert rep.ok and rep.cross_vanishing and rep.block_dets_nonzero
    assert verify_relations(RANK2, (-1, 1), "minus").ok


@pytest.mark.parametrize("g,tp,tm", [(TPP, (1,), (-1,)), (RANK2, (1, 1), (-1, 1))])
def test_eqk_suite(g, tp, tm):
    checks = eqk_suite(g, StabilityVector(tp), StabilityVector(tm))
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_cyclotomic_value_in_class():
    side = make_side(TPP, (1,))
    v = kclass(side, L(TPP, (1,))).at(((2,), (F(1, 2),)))
    assert v.as_unit()[1] == Cyclo.rational(-1)
