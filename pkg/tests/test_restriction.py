import pytest

from commuting_su2.restriction import (
    EmptyInput,
    IndexData,
    UnsupportedGenerator,
    all_index_data,
    choose_a,
    exhaustive_choose_a,
    independence_check,
    is_odd_witness,
    parity_count,
    restrict_generator,
    restriction_matrix,
)
from commuting_su2.linalg import mod2_rank


def test_restrict_generator():
    assert restrict_generator("v", (1,), (-1, 1)) == "u"
    assert restrict_generator("x", (1, 2), (1, 1)) == "0"
    assert restrict_generator("x", (1, 2), (1, -1)) == "u"
    assert restrict_generator("u", (), (1, 1)) == "u"
    with pytest.raises(UnsupportedGenerator):
        restrict_generator("w", (1,), (1,))


def test_matrix():
    assert restriction_matrix(1).to_dense() == [[1, 1], [0, 1]]
    assert mod2_rank(restriction_matrix(2)) == 4
    for n in range(1, 6):
        assert restriction_matrix(n).to_dense()[0] == [1] * 2**n


@pytest.mark.parametrize("n", range(1, 9))
def test_independence(n):
    assert independence_check(n)
    # the cokernel dimension equals the number of f-classes
    assert 2**n - mod2_rank(restriction_matrix(n)) == 2**n - 1 - n - n * (n - 1) // 2


def test_choose_examples():
    assert choose_a(IndexData([1], [(1, 2)]), 2) == (1, -1)
    assert choose_a(IndexData([1]), 1) == (-1,)
    a = choose_a(IndexData([], [(1, 2), (1, 3)]), 3)
    assert is_odd_witness(IndexData([], [(1, 2), (1, 3)]), a)
    assert parity_count(IndexData([], [(1, 2), (1, 3)]), (-1, 1, 1)) == 2
    with pytest.raises(EmptyInput):
        choose_a(IndexData(), 2)


def test_exhaustive_examples():
    assert exhaustive_choose_a(IndexData([1]), 2) == (-1, 1)
    assert exhaustive_choose_a(IndexData(), 3) is None
    assert exhaustive_choose_a(IndexData([1, 2], [(1, 2)]), 2) == (-1, -1)
    with pytest.raises(ValueError):
        exhaustive_choose_a(IndexData([1]), 21)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sweep(n):
    for data in all_index_data(n):
        assert is_odd_witness(data, choose_a(data, n))
        assert exhaustive_choose_a(data, n) is not None
        assert not is_odd_witness(data, (1,) * n)


def test_index_validation():
    with pytest.raises(ValueError):
        IndexData([], [(2, 1)])
    with pytest.raises(ValueError):
        choose_a(IndexData([5]), 3)


def test_large_n_without_search():
    for J in ([(1, 2), (2, 3), (1, 3)], [(1, 2), (1, 3)], [(4, 22)]):
        data = IndexData([], J)
        assert is_odd_witness(data, choose_a(data, 22))
