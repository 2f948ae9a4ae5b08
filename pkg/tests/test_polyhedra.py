from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from wallcross import polyhedra as ph

F = Fraction


def test_open_cone_membership():
    vecs = [(1, 0), (0, 1)]
    assert ph.in_open_cone(vecs, [(F(1),), (F(2),)])
    assert not ph.in_open_cone(vecs, [(F(1),), (F(0),)])
    # lexicographic perturbation decides boundary points
    assert ph.in_open_cone(vecs, [(F(1), F(0)), (F(0), F(1))])
    assert not ph.in_open_cone(vecs, [(F(1), F(0)), (F(0), F(-1))])


def test_closed_cone_membership():
    assert ph.in_closed_cone([(1, 0), (0, 1)], (1, 0))
    assert ph.in_closed_cone([(1,), (-1,)], (5,))
    assert not ph.in_closed_cone([(1, 1)], (1, 0))


def test_lex_sign():
    assert ph.lex_sign((F(0), F(-1))) == -1
    assert ph.lex_sign((F(0), F(0))) == 0
    assert ph.lex_sign((F(1), F(-5))) == 1


def test_primitive_and_dot():
    assert ph.primitive((F(2, 3), F(4, 3))) == (1, 2)
    assert ph.dot((1, 2), (3, 4)) == 11


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_annihilates(rows):
    ns = ph.nullspace(rows, 3)
    assert len(ns) == 3 - ph.rank(rows)
    for v in ns:
        assert all(ph.dot(r, v) == 0 for r in rows)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=2, max_size=2))
def test_inverse(rows):
    if ph.rank(rows) < 2:
        return
    inv = ph.inverse(rows)
    prod = [[sum(F(rows[i][k]) * inv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]


def test_cone_rays_quadrant():
    rays = ph.cone_rays([(1, 0), (0, 1)], 2)
    assert sorted(rays) == [(0, 1), (1, 0)]
