from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallcross import GitData
from wallcross.errors import NotSurjective
from wallcross.fgab import (
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    gale_dual,
    hnf_canonical,
    is_surjective,
    kernel_basis,
    reduce_mod_lattice,
    smith_normal_form,
)
from wallcross.polyhedra import rank
from wallcross.stackgeom import reconstruct_beta


def matrices(max_rows=4, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda m: st.lists(
                st.lists(st.integers(-bound, bound), min_size=m, max_size=m), min_size=n, max_size=n
            ).map(lambda rows: IntMatrix.from_rows(rows, m))
        )
    )


@given(matrices())
def test_snf_roundtrip(A):
    snf = smith_normal_form(A)
    assert snf.U @ snf.S @ snf.V == A
    assert snf.U @ snf.U_inv == IntMatrix.identity(A.nrows)
    assert snf.V @ snf.V_inv == IntMatrix.identity(A.ncols)
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    d = [x for x in snf.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    # off-diagonal entries vanish
    assert all(snf.S[i, j] == 0 for i in range(A.nrows) for j in range(A.ncols) if i != j)


@given(matrices())
def test_kernel_is_saturated_basis(A):
    K = kernel_basis(A)
    cols = K.columns()
    assert all(not any(A.apply(c)) for c in cols)
    assert len(cols) == A.ncols - rank(A.rows)
    if cols:
        # saturation: the kernel lattice is primitive, so its SNF is all ones
        assert all(d == 1 for d in smith_normal_form(K).diagonal)


def test_snf_known_diagonal():
    A = IntMatrix.from_rows([[2, 4], [6, 8]])
    assert smith_normal_form(A).diagonal == (2, 4)
    B = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert smith_normal_form(B).diagonal == (1, 6)


def test_cokernel_examples():
    group, proj = cokernel(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert group == FgAbelianGroup(0, (6,))
    group, _ = cokernel(IntMatrix.from_rows([[1, 2]]))
    assert group == FgAbelianGroup(0, ())
    group, _ = cokernel(IntMatrix.from_rows([[2], [0]]))
    assert group == FgAbelianGroup(1, (2,))
    assert str(group) == "Z/2 + Z"


def test_group_validation():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (1,))
    assert FgAbelianGroup(0, (2, 4)).order == 8


def test_gale_dual_rejects_non_surjective():
    beta = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert not is_surjective(beta, FgAbelianGroup(2))
    with pytest.raises(NotSurjective):
        gale_dual(beta, FgAbelianGroup(2))


def test_gale_dual_with_torsion_target():
    # beta: Z^2 -> Z/2 + Z, (x, y) -> (x + y mod 2, x); the kernel is x = 0, y even
    beta = IntMatrix.from_rows([[1, 1], [1, 0]])
    target = FgAbelianGroup(1, (2,))
    assert is_surjective(beta, target)
    D = gale_dual(beta, target)
    assert D.shape == (1, 2)
    assert [abs(x) for x in D.rows[0]] == [0, 2]
    # (x mod 2, x + 2y) misses (0, 1)
    assert not is_surjective(IntMatrix.from_rows([[1, 0], [1, 2]]), target)


@pytest.mark.parametrize(
    "g",
    [
        GitData.rank_one(1, 2),
        GitData.rank_one(1, 3),
        GitData.lawrence([(1, 0), (0, 1), (1, 1)]),
        GitData.lawrence([(1, 0), (-1, 0)], extended=[(0, 1)]),
    ],
    ids=["p12", "p13", "rank2", "extended"],
)
def test_reconstruct_roundtrip(g):
    group, beta = reconstruct_beta(g)
    assert gale_dual(beta, group) == hnf_canonical(IntMatrix.from_columns(g.characters, g.r))


def test_reduce_mod_lattice():
    hnf = [(2, 0), (0, 3)]
    assert reduce_mod_lattice((5, -4), hnf) == (1, 2)


def test_hnf_is_canonical_under_row_ops():
    A = IntMatrix.from_rows([[1, 2, -1, -2]])
    B = IntMatrix.from_rows([[-1, -2, 1, 2]])
    assert hnf_canonical(A) == hnf_canonical(B)
    C = IntMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    D = IntMatrix.from_rows([[1, 1, 2], [0, 1, 1]])
    assert hnf_canonical(C) == hnf_canonical(D)


def test_determinant():
    assert IntMatrix.from_rows([[2, 1], [7, 4]]).det() == 1
    assert IntMatrix.identity(3).det() == 1
    assert Fraction(IntMatrix.from_rows([[0, 1], [1, 0]]).det()) == -1
