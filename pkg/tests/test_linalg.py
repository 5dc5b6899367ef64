import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commuting_su2.cw import blowup_complex, collapse_to_yn
from commuting_su2.linalg import (
    AbelianGroup,
    ChainComplex,
    CompositionNotZero,
    IntMatrix,
    cohomology_with_coefficients,
    homology_at,
    invariant_factors,
    mod2_rank,
    smith_normal_form,
    z2_dimension,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = [[draw(small_ints) if draw(st.booleans()) else 0 for _ in range(c)] for _ in range(r)]
    return IntMatrix.from_dense(rows, c)


def is_unimodular(M):
    f = invariant_factors(M)
    return M.rows == M.cols == len(f) and all(d == 1 for d in f)


def test_snf_examples():
    assert smith_normal_form(IntMatrix.from_dense([[0]])).S == IntMatrix.from_dense([[0]])
    assert smith_normal_form(IntMatrix.from_dense([[2, 0], [0, 3]])).diagonal == (1, 6)
    assert smith_normal_form(IntMatrix.identity(3)).S == IntMatrix.identity(3)
    assert smith_normal_form(IntMatrix.from_dense([[12, 6, 4], [3, 9, 6], [2, 16, 14]])).diagonal == (1, 10, 30)


@given(matrices())
def test_snf_postcondition(M):
    sf = smith_normal_form(M)
    assert sf.U @ M @ sf.V == sf.S
    d = sf.diagonal
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert is_unimodular(sf.U) and is_unimodular(sf.V)


@given(matrices())
def test_snf_without_transforms_agrees(M):
    assert smith_normal_form(M, transforms=False).diagonal == smith_normal_form(M).diagonal


def test_big_entries_stay_exact():
    M = IntMatrix.from_dense([[10**40, 3], [7, 10**30 + 1]])
    sf = smith_normal_form(M)
    assert sf.U @ M @ sf.V == sf.S
    det = 10**40 * (10**30 + 1) - 21
    assert sf.diagonal[0] * sf.diagonal[1] == abs(det)


def test_homology_examples():
    assert homology_at(IntMatrix.zeros(0, 1), IntMatrix.zeros(1, 1)) == AbelianGroup.free(1)
    assert homology_at(IntMatrix.zeros(1, 1), IntMatrix.zeros(1, 0)) == AbelianGroup.free(1)
    rp2 = ChainComplex({0: ["v"], 1: ["e"], 2: ["f"]}, {1: IntMatrix.zeros(1, 1), 2: IntMatrix.from_dense([[2]])})
    assert [str(rp2.homology(k)) for k in range(3)] == ["Z", "Z2", "0"]
    assert [str(g) for g in cohomology_with_coefficients(rp2, "Z")] == ["Z", "0", "Z2"]
    assert [z2_dimension(g) for g in cohomology_with_coefficients(rp2, "Z2")] == [1, 1, 1]


def test_composition_not_zero():
    with pytest.raises(CompositionNotZero):
        homology_at(IntMatrix.from_dense([[1]]), IntMatrix.from_dense([[1]]))


def test_mod2_rank_examples():
    assert mod2_rank(IntMatrix.from_dense([[2]])) == 0
    assert mod2_rank(IntMatrix.identity(4)) == 4
    assert mod2_rank(IntMatrix.from_dense([[1, 1], [1, 1]])) == 1


def random_unimodular(n, rng, steps=12):
    M = {(i, i): 1 for i in range(n)}
    U = IntMatrix(n, n, M)
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        E = IntMatrix(n, n, {**{(k, k): 1 for k in range(n)}, (i, j): rng.choice([-2, -1, 1, 2])})
        U = E @ U
    return U


def inverse_unimodular(U):
    sf = smith_normal_form(U)
    # U = U_s^{-1} V_s^{-1} with S = I, so U^{-1} = V_s U_s
    return sf.V @ sf.U


@pytest.mark.parametrize("n", [1, 2])
def test_homology_invariant_under_basis_change(n):
    rng = random.Random(n)
    C = blowup_complex(n)
    top = C.top_degree
    P = {k: random_unimodular(C.rank(k), rng) for k in range(top + 1)}
    Pinv = {k: inverse_unimodular(P[k]) for k in P}
    for k in P:
        assert P[k] @ Pinv[k] == IntMatrix.identity(C.rank(k))
    twisted = ChainComplex(C.cells, {k: P[k - 1] @ C.boundary(k) @ Pinv[k] for k in range(1, top + 1)})
    for k in range(top + 1):
        assert twisted.homology(k) == C.homology(k)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_euler_characteristic_and_uct(n):
    for C in (blowup_complex(n), collapse_to_yn(n)):
        hz = cohomology_with_coefficients(C, "Z")
        assert C.euler_characteristic() == sum((-1) ** k * g.free_rank for k, g in enumerate(hz))
        h2 = [z2_dimension(g) for g in cohomology_with_coefficients(C, "Z2")]
        padded = hz + [AbelianGroup()]
        for k, d in enumerate(h2):
            assert d == padded[k].free_rank + padded[k].two_torsion_count + padded[k + 1].two_torsion_count


def test_abelian_group_normalisation():
    assert AbelianGroup.from_orders(1, [2, 3]) == AbelianGroup(1, (6,))
    assert AbelianGroup.from_orders(0, [1, 4, 2]).torsion == (2, 4)
    assert AbelianGroup(0, (2, 4)).primary_counts() == {2: 1, 4: 1}
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))
    g = AbelianGroup.elementary(3, 4)
    assert str(g) == "Z^3 + Z2^4" and AbelianGroup.from_json(g.to_json()) == g


def test_chain_complex_json_roundtrip():
    C = blowup_complex(1)
    D = ChainComplex.from_json(C.to_json())
    assert D.to_json() == C.to_json()
