import json

import pytest

from commuting_su2 import closed_form as cf
from commuting_su2.linalg import AbelianGroup


def G(free, twos=0):
    return AbelianGroup.elementary(free, twos)


def test_binom_convention():
    assert cf.binom(3, -1) == 0 and cf.binom(3, 4) == 0 and cf.binom(4, 2) == 6


@pytest.mark.parametrize(
    "fn,n,key,want",
    [
        (cf.blowup_cohomology, 2, 2, G(1, 3)),
        (cf.blowup_cohomology, 1, 3, G(1)),
        (cf.blowup_cohomology, 3, 0, G(1)),
        (cf.blowup_cohomology, 3, 6, G(0)),
        (cf.blowup_ktheory, 2, "K0", G(2, 4)),
        (cf.blowup_ktheory, 3, "K1", G(4)),
        (cf.blowup_ktheory, 1, "K0", G(1, 2)),
        (cf.yn_cohomology, 1, 3, G(1)),
        (cf.yn_cohomology, 3, 3, G(3, 1)),
        (cf.yn_cohomology, 2, 4, G(0, 1)),
        (cf.yn_ktheory, 2, "K0", G(2, 1)),
        (cf.yn_ktheory, 2, "K1", G(2)),
        (cf.yn_ktheory, 3, "K1", G(4, 1)),
    ],
)
def test_examples(fn, n, key, want):
    assert fn(n, key) == want


@pytest.mark.parametrize("n,i,want", [(3, 3, 8), (1, 3, 1), (2, 3, 3)])
def test_mod2_betti(n, i, want):
    assert cf.yn_mod2_betti(n, i) == want


@pytest.mark.parametrize("n", range(1, 13))
def test_totals(n):
    free = sum(cf.yn_cohomology(n, i).free_rank for i in range(n + 3))
    assert free == 2**n
    twos = sum(cf.yn_cohomology(n, i).two_torsion_count for i in range(n + 3))
    assert twos == (2**n - 1 - n) + (2**n - 1 - n - cf.binom(n, 2))
    assert cf.yn_mod2_betti(n, 3) == 2**n - 1 - cf.binom(n, 2) + cf.binom(n + 1, 3)


def test_growth():
    assert cf.polynomial_growth_test([n * n for n in range(1, 11)], 2)
    assert not cf.polynomial_growth_test([n * n for n in range(1, 11)], 1)
    assert cf.polynomial_growth_test([5] * 4, 0)
    seq = [cf.yn_mod2_betti(n, 3) for n in range(1, 13)]
    assert not any(cf.polynomial_growth_test(seq, d) for d in range(10))
    with pytest.raises(cf.InsufficientData):
        cf.polynomial_growth_test([1, 2], 1)
    # a sequence that only becomes polynomial late
    assert cf.polynomial_growth_test([9, 0, 3, 4, 5, 6], 1, tail=4)


def test_table_formats():
    t = cf.closed_form_table("yn", "cohomology-z", 3)
    data = json.loads(t.dumps())
    assert data["groups"]["H3"]["text"] == "Z^3 + Z2"
    assert "| H3 | Z^3 + Z2 |" in t.to_markdown()
    assert "yn,cohomology-z,3,H3,3,2,Z^3 + Z2" in t.to_csv()
    k = cf.closed_form_table("blowup", "k", 2)
    assert list(k.groups) == ["K0", "K1"]
    z2 = cf.closed_form_table("yn", "cohomology-z2", 3)
    assert z2.groups[3] == AbelianGroup.elementary(0, 8)
    with pytest.raises(ValueError):
        cf.GroupTable("yn", "k", 2, {3: G(1)})
