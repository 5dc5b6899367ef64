import json
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commuting_su2 import closed_form as cf
from commuting_su2.ring import (
    Atom,
    BlowupRing,
    CohomologyRing,
    NotInImage,
    RingMismatch,
    UndeterminedInput,
    YnRing,
    additive_structure,
    blowup_ring,
    chern_character,
    equivariant_kt_ring,
    yn_ring,
)
from commuting_su2.verify import (
    blowup_relation_failures,
    chern_bijection_failures,
    chern_multiplicativity,
    structural_failures,
    yn_relation_failures,
)

RINGS = {n: (BlowupRing(n), YnRing(n)) for n in range(1, 5)}


@st.composite
def elements(draw, ring):
    basis = ring.basis()
    picks = draw(st.lists(st.sampled_from(basis), min_size=0, max_size=4))
    coeffs = {}
    for m in picks:
        coeffs[m] = coeffs.get(m, 0) + draw(st.integers(-3, 3))
    return ring.zero() + sum((ring.element(m, c) for m, c in coeffs.items()), ring.zero())


@st.composite
def ring_and_triple(draw):
    n = draw(st.integers(1, 4))
    ring = RINGS[n][draw(st.integers(0, 1))]
    return ring, draw(elements(ring)), draw(elements(ring)), draw(elements(ring))


@given(ring_and_triple())
def test_associative_and_distributive(t):
    R, a, b, c = t
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


def _even_odd(e):
    ring = e.ring
    even = ring.zero() + sum((ring.element(m, c) for m, c in e.coeffs.items() if m.parity == "even"), ring.zero())
    return even, e - even


@given(ring_and_triple())
def test_graded_commutative(t):
    R, a, b, _ = t
    a0, a1 = _even_odd(a)
    b0, b1 = _even_odd(b)
    assert a0 * b == b * a0
    assert a1 * b1 == -(b1 * a1)


def test_blowup_examples():
    B = blowup_ring(4)
    x = B.gen
    assert str(x("x", 1, 2) * x("x", 3, 4)) == "x12*x34"
    assert x("x", 1, 2) * x("x", 1, 2) == x("u") * x("x", 1, 2)
    assert x("x", 2, 1) * x("x", 3, 4) == -(x("x", 1, 2) * x("x", 3, 4))
    assert (x("u") * x("w", 1)).is_zero()
    assert (x("w", 1) * x("w", 2)).is_zero()
    tau = x("x", 1, 2) * x("x", 2, 3)
    assert not tau.is_determined()
    assert tau.undetermined == {Atom("x", ((1, 2), (2, 3)))}
    assert (tau * 2).is_zero()
    assert (tau * x("u")).is_zero() and (tau * x("w", 4)).is_zero() and (tau * x("v", 4)).is_zero()


def test_overlap_chain_is_forced():
    # x12 x34 re-pairs to x14 x23, so x12 x23 x34 = x14 x23^2 = u x14 x23
    B = blowup_ring(4)
    assert B.x_product((1, 2), (2, 3), (3, 4)) == B.gen("u") * B.x_product((1, 2), (3, 4))


def test_sign_permutation_property():
    B = blowup_ring(4)
    base = B.x_product((1, 2), (3, 4))
    for p in permutations((1, 2, 3, 4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        assert B.x_product((p[0], p[1]), (p[2], p[3])) == base * (-1) ** inv


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_relation_suites(n):
    assert blowup_relation_failures(n) == []
    assert yn_relation_failures(n) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_structure_exhaustive(n):
    for R in RINGS[n]:
        assert structural_failures(R) == []


def test_yn_examples():
    Y = yn_ring(5)
    h = Y.gen
    assert h("a", 1, 2) * h("a", 3, 4) == h("d", 1, 2, 3, 4) * 4
    assert (h("a", 1, 2) * h("a", 1, 2)).is_zero()
    assert (h("f", 1) * h("e", 1)).is_zero()
    assert (h("b", 1, 2) * h("c", 3, 4, 5)).is_zero()
    assert h("f", 1) * 2 == Y.zero()
    with pytest.raises(NotInImage):
        Y.project(Y.blowup.gen("x", 1, 2))


@pytest.mark.parametrize("n", range(1, 9))
def test_additive_structure(n):
    assert additive_structure(blowup_ring(n), "K0") == cf.blowup_ktheory(n, "K0")
    assert additive_structure(blowup_ring(n), "K1") == cf.blowup_ktheory(n, "K1")
    assert additive_structure(yn_ring(n), "K0") == cf.yn_ktheory(n, "K0")
    assert additive_structure(yn_ring(n), "K1") == cf.yn_ktheory(n, "K1")


def test_chern_examples():
    B = blowup_ring(3)
    assert list(chern_character(B.gen("x", 1, 2)).degrees()) == [2]
    assert list(chern_character(B.gen("w", 1)).degrees()) == [3]
    Y = yn_ring(3)
    ch = chern_character(Y.gen("b", 1, 2))
    ((deg, terms),) = ch.degrees().items()
    assert deg == 4 and all(m.order == 2 for m in terms)
    with pytest.raises(UndeterminedInput):
        chern_character(B.gen("x", 1, 2) * B.gen("x", 2, 3))


@pytest.mark.parametrize("n", range(1, 7))
def test_chern_bijection(n):
    assert chern_bijection_failures(blowup_ring(n)) == []
    assert chern_bijection_failures(yn_ring(n)) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chern_multiplicative(n):
    for R in RINGS[n]:
        bad, checked, _ = chern_multiplicativity(R)
        assert bad == [] and checked > 0


def test_cohomology_ring_truncates_above_dimension():
    H = CohomologyRing(blowup_ring(1))
    w = chern_character(blowup_ring(1).gen("w", 1))
    assert (w * w).is_zero()


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        blowup_ring(2).gen("u") * blowup_ring(3).gen("u")


def test_multiplication_table_exports():
    B = blowup_ring(3)
    t = json.loads(B.multiplication_table_json())
    assert t["products"]["x12"]["x12"] == "u*x12"
    assert t["products"]["x12"]["x23"].startswith("undetermined")
    assert t["products"]["w1"]["w2"] == "0"
    assert "| x12 |" in B.multiplication_table_markdown()
    Y = json.loads(yn_ring(2).multiplication_table_json())
    assert Y["products"]["a12"]["a12"] == "0"


def test_equivariant_ring():
    E = equivariant_kt_ring()
    assert (E.v * (E.u + 2)).is_zero()
    assert E.u * E.u == E.u * -2
    assert str(E.restrict(1 + 1 + E.u - E.v)) == "(1 + c, 2)"
    assert all(E.relations_vanish_after_restriction().values())
    assert E.kernel_rank() == 0
